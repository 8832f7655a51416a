import pytest
from hypothesis import given
from hypothesis import strategies as st

from disfleval import (
    DEFAULT_NORMALIZATION,
    AnnotatedToken,
    DisfluencyCategory,
    FluencyClass,
    Hypothesis,
    NormalizationConfig,
    PairingError,
    ParseError,
    ReferenceTranscript,
    RepairType,
    load_normalization_config,
    pair_files,
    parse_hypothesis,
    parse_inline,
    parse_repair_bracket,
    read_hypothesis_file,
    read_reference_file,
    serialize_bracket,
    serialize_inline,
    write_hypothesis_file,
    write_reference_file,
)
from disfleval.synth import DisfluencyRates, gen_reference

F = FluencyClass.FLUENT
D = FluencyClass.DISFLUENT


class TestParseInline:
    def test_flight_sentence(self):
        ref = parse_inline("u1\ti want a flight to/E boston/E uh/I i/I mean/I to denver")
        assert len(ref.tokens) == 11
        assert ref.n_fluent == 6
        assert ref.n_disfluent == 5
        assert ref.tokens[4].category is DisfluencyCategory.EDITED
        assert ref.tokens[6].category is DisfluencyCategory.INTERJECTION

    def test_plain_sentence(self):
        ref = parse_inline("u2\tthe cat")
        assert ref.surfaces() == ("the", "cat")
        assert ref.n_disfluent == 0
        assert ref.repairs == ()

    def test_partial_kept_by_default(self):
        ref = parse_inline("u3\twou-/P the cat")
        assert ref.surfaces() == ("wou", "the", "cat")
        assert ref.tokens[0].category is DisfluencyCategory.PARTIAL

    def test_partial_dropped_when_configured(self):
        config = NormalizationConfig(drop_partial_words=True)
        ref = parse_inline("u3\twou-/P the cat", config)
        assert ref.surfaces() == ("the", "cat")
        assert ref.n_disfluent == 0

    def test_malformed_suffix_names_column(self):
        with pytest.raises(ParseError) as exc:
            parse_inline("u1\ta to/X b")
        assert exc.value.column == 6
        assert "to/X" in str(exc.value)

    @pytest.mark.parametrize("line", ["u1\t", "u1\t...", "u1"])
    def test_empty_utterance_rejected(self, line):
        with pytest.raises(ParseError, match="empty utterance"):
            parse_inline(line)

    def test_missing_id_rejected(self):
        with pytest.raises(ParseError, match="utterance id"):
            parse_inline("\tthe cat")

    def test_normalization_case_and_punctuation(self):
        ref = parse_inline("u1\tThe CAT.")
        assert ref.surfaces() == ("the", "cat")

    def test_internal_apostrophe_survives(self):
        ref = parse_inline("u1\tlet's go")
        assert ref.surfaces() == ("let's", "go")


class TestParseRepairBracket:
    def test_correction_with_interregnum(self):
        ref = parse_repair_bracket(
            "u1\ti want a flight [ to boston + { uh i mean } to denver ]"
        )
        (rep,) = ref.repairs
        assert [ref.tokens[i].surface for i in rep.reparandum.indices()] == ["to", "boston"]
        assert [ref.tokens[i].surface for i in rep.interregnum.indices()] == ["uh", "i", "mean"]
        assert [ref.tokens[i].surface for i in rep.repair.indices()] == ["to", "denver"]
        assert rep.repair_type is RepairType.CORRECTION

    def test_repetition(self):
        ref = parse_repair_bracket("u2\tso [ from + from ] that standpoint")
        assert ref.repairs[0].repair_type is RepairType.REPETITION

    def test_restart_has_empty_repair(self):
        ref = parse_repair_bracket("u3\t[ there's a + ] let's go")
        (rep,) = ref.repairs
        assert rep.repair_type is RepairType.RESTART
        assert rep.repair.length == 0

    def test_nested_bracket_flattened_into_reparandum(self):
        ref = parse_repair_bracket("u4\t[ a [ b + c ] + d ] e")
        (rep,) = ref.repairs
        assert [ref.tokens[i].surface for i in rep.reparandum.indices()] == ["a", "b", "c"]
        assert [ref.tokens[i].surface for i in rep.repair.indices()] == ["d"]

    def test_partial_override_inside_reparandum(self):
        ref = parse_repair_bracket("u5\t[ o-/P + i've ] been")
        assert ref.tokens[0].category is DisfluencyCategory.PARTIAL
        assert ref.tokens[0].fluency is D

    @pytest.mark.parametrize(
        "line,message",
        [
            ("u\t[ a + b", "unbalanced repair bracket"),
            ("u\t[ a b c", "missing"),  # no '+' separator at all
            ("u\t[ a b ] c", "expected"),  # ']' arrives before '+'
            ("u\ta } b", "outside a repair bracket"),
            ("u\ta { b } c", "outside a repair bracket"),
            ("u\ta + b", "outside a repair bracket"),
            ("u\t[ + a ]", "empty reparandum"),
            ("u\t[ a + b/E ]", "repair words are fluent"),
            ("u\t[ a + { b", "unclosed interregnum"),
            ("u\t[ a + { b ] }", "inside interregnum"),
        ],
    )
    def test_markup_errors(self, line, message):
        with pytest.raises(ParseError, match=message):
            parse_repair_bracket(line)

    def test_class_projection_matches_inline(self):
        bracket = parse_repair_bracket(
            "u1\ti want a flight [ to boston + { uh i mean } to denver ] wou-/P"
        )
        inline = parse_inline(
            "u1\ti want a flight to/E boston/E uh/I i/I mean/I to denver wou-/P"
        )
        assert bracket.tokens == inline.tokens


class TestParseHypothesis:
    def test_plain_line(self):
        assert parse_hypothesis("u1\ti want a flight to denver").tokens == (
            "i",
            "want",
            "a",
            "flight",
            "to",
            "denver",
        )

    def test_empty_hypothesis_allowed(self):
        assert parse_hypothesis("u2\t").tokens == ()

    def test_normalization(self):
        assert parse_hypothesis("u3\tThe CAT.").tokens == ("the", "cat")

    def test_missing_id(self):
        with pytest.raises(ParseError, match="utterance id"):
            parse_hypothesis("\tx")


class TestAutoLabelFillers:
    CONFIG = NormalizationConfig(auto_label_fillers=True)

    def test_multiword_filler_labeled(self):
        ref = parse_inline("u1\tyou know the cat", self.CONFIG)
        assert ref.tokens[0].category is DisfluencyCategory.INTERJECTION
        assert ref.tokens[1].category is DisfluencyCategory.INTERJECTION
        assert ref.tokens[2].fluency is F

    def test_gold_labels_win(self):
        # The explicit fluent... no way to tag fluent explicitly, so check that
        # a token with an explicit category is not relabeled.
        ref = parse_inline("u1\tuh/P the cat", self.CONFIG)
        assert ref.tokens[0].category is DisfluencyCategory.PARTIAL

    def test_repair_words_not_relabeled(self):
        ref = parse_repair_bracket("u1\t[ well + well ] done", self.CONFIG)
        (rep,) = ref.repairs
        assert ref.tokens[rep.repair.start].fluency is F

    def test_off_by_default(self):
        ref = parse_inline("u1\tyou know the cat")
        assert ref.n_disfluent == 0


class TestRoundTrip:
    @given(
        st.lists(
            st.tuples(
                st.text(alphabet="abcd", min_size=1, max_size=4),
                st.sampled_from([None, *DisfluencyCategory]),
            ),
            min_size=1,
            max_size=10,
        )
    )
    def test_inline_round_trip(self, spec):
        tokens = tuple(
            AnnotatedToken(s, D if cat else F, cat) for s, cat in spec
        )
        ref = ReferenceTranscript("u", tokens)
        assert parse_inline(serialize_inline(ref)) == ref

    @pytest.mark.parametrize("seed", range(40))
    def test_bracket_round_trip_of_generated_corpora(self, seed):
        rates = DisfluencyRates(
            p_repetition=0.15, p_correction=0.1, p_restart=0.08, p_filler=0.12, max_span=2
        )
        ref = gen_reference(seed, 12, (1, 10), rates, utterance_id=f"g{seed}")
        assert parse_repair_bracket(serialize_bracket(ref)) == ref

    def test_inline_round_trip_of_parsed_line(self):
        line = "u1\ti want a flight to/E boston/E uh/I i/I mean/I to denver"
        ref = parse_inline(line)
        assert serialize_inline(ref) == line
        assert parse_inline(serialize_inline(ref)) == ref


class TestPairFiles:
    REFS = [parse_inline(f"u{k}\ta b") for k in range(3)]

    def hyps(self, ids):
        return [parse_hypothesis(f"{i}\ta b") for i in ids]

    def test_full_match(self):
        pairs = pair_files(self.REFS, self.hyps(["u0", "u1", "u2"]))
        assert [p.reference.utterance_id for p in pairs] == ["u0", "u1", "u2"]

    def test_missing_hypothesis_is_error_by_default(self):
        with pytest.raises(PairingError, match="u1"):
            pair_files(self.REFS, self.hyps(["u0", "u2"]))

    def test_missing_hypothesis_scored_as_empty(self):
        pairs = pair_files(self.REFS, self.hyps(["u0", "u2"]), missing="empty")
        assert len(pairs) == 3
        assert pairs[1].hypothesis.tokens == ()

    def test_unknown_hypothesis_id(self):
        with pytest.raises(PairingError, match="zz"):
            pair_files(self.REFS, self.hyps(["u0", "u1", "u2", "zz"]))

    def test_duplicate_ids(self):
        with pytest.raises(PairingError, match="duplicate"):
            pair_files(self.REFS + [self.REFS[0]], self.hyps(["u0"]), missing="empty")
        with pytest.raises(PairingError, match="duplicate"):
            pair_files(self.REFS, self.hyps(["u0", "u0"]), missing="empty")

    def test_id_mismatch_rejected_in_pair_type(self):
        from disfleval import UtterancePair

        with pytest.raises(ValueError, match="mismatch"):
            UtterancePair(self.REFS[0], Hypothesis("other", ("a",)))


class TestFileIO:
    def test_reference_file_with_comments(self, tmp_path):
        path = tmp_path / "ref.txt"
        path.write_text(
            "# a comment\n\nu1\ta b/E c\nu2\t[ d + d ] e\n",
            encoding="utf-8",
        )
        refs = read_reference_file(path)
        assert [r.utterance_id for r in refs] == ["u1", "u2"]
        assert refs[1].repairs[0].repair_type is RepairType.REPETITION

    def test_parse_error_carries_path_and_line(self, tmp_path):
        path = tmp_path / "ref.txt"
        path.write_text("u1\ta b\nu2\tc/Q d\n", encoding="utf-8")
        with pytest.raises(ParseError) as exc:
            read_reference_file(path)
        assert exc.value.path == str(path)
        assert exc.value.line == 2
        assert str(path) in str(exc.value) and ":2:" in str(exc.value)

    def test_duplicate_id_in_file(self, tmp_path):
        path = tmp_path / "ref.txt"
        path.write_text("u1\ta\nu1\tb\n", encoding="utf-8")
        with pytest.raises(ParseError, match="duplicate"):
            read_reference_file(path)

    def test_hypothesis_file_round_trip(self, tmp_path):
        hyps = [Hypothesis("u1", ("a", "b")), Hypothesis("u2", ())]
        path = tmp_path / "hyp.txt"
        write_hypothesis_file(hyps, path)
        assert read_hypothesis_file(path) == hyps

    def test_reference_file_round_trip(self, tmp_path):
        rates = DisfluencyRates(p_repetition=0.2, p_filler=0.2, max_span=2)
        refs = [
            gen_reference(seed, 10, (2, 8), rates, utterance_id=f"u{seed}")
            for seed in range(10)
        ]
        path = tmp_path / "ref.txt"
        write_reference_file(refs, path)
        assert read_reference_file(path) == refs


class TestNormalizationConfigFile:
    def test_load(self, tmp_path):
        path = tmp_path / "norm.cfg"
        path.write_text(
            "# normalization\nlowercase = true\nstrip_punctuation=false\n"
            "drop_partial_words=yes\nfiller_lexicon=uh,um,er\n",
            encoding="utf-8",
        )
        config = load_normalization_config(path)
        assert config.lowercase is True
        assert config.strip_punctuation is False
        assert config.drop_partial_words is True
        assert config.filler_lexicon == frozenset({"uh", "um", "er"})

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "norm.cfg"
        path.write_text("shout=true\n", encoding="utf-8")
        with pytest.raises(ParseError, match="unknown config key"):
            load_normalization_config(path)

    def test_bad_boolean(self, tmp_path):
        path = tmp_path / "norm.cfg"
        path.write_text("lowercase=maybe\n", encoding="utf-8")
        with pytest.raises(ParseError, match="boolean"):
            load_normalization_config(path)

    def test_default_lexicon_has_multiword_entries(self):
        assert "you know" in DEFAULT_NORMALIZATION.filler_lexicon
        assert "i mean" in DEFAULT_NORMALIZATION.filler_lexicon
