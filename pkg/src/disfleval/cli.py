"""Command-line front end.

Subcommands:

* ``score``    - score a hypothesis file against an annotated reference file
  and emit a JSON (default) or TSV report.
* ``align``    - pretty-print the alignment of one utterance.
* ``simulate`` - generate a synthetic corpus, simulate a system on it, and
  score the result.

Exit codes: 0 success, 1 internal/verification failure, 2 parse or
configuration errors, 3 pairing/lookup errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ._version import __version__
from .align import DISFLUENCY_AWARE, ORACLE_MAX_TOKENS, SCHEMES, align, oracle_align_all
from .ingest import (
    DEFAULT_NORMALIZATION,
    NormalizationConfig,
    PairingError,
    ParseError,
    load_normalization_config,
    pair_files,
    read_hypothesis_file,
    read_reference_file,
    write_hypothesis_file,
    write_reference_file,
)
from .metrics import aggregate, counts_from_alignment, score_corpus
from .report import (
    build_report,
    render_alignment_text,
    render_json,
    render_tsv,
    summary_line,
    verify_report,
)
from .synth import (
    ChannelRates,
    DisfluencyRates,
    SimulationMode,
    gen_corpus,
    simulate_system,
)

NORM_CONFIG_ENV = "DISFLEVAL_NORM_CONFIG"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_PAIRING = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="disfleval",
        description="Score systems that jointly transcribe speech and remove disfluencies.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--norm-config",
        default=None,
        help=f"key=value normalization config file (default: ${NORM_CONFIG_ENV} if set)",
    )
    common.add_argument(
        "--ref-format",
        choices=["bracket", "inline"],
        default="bracket",
        help="reference annotation format (bracket is a superset of inline)",
    )

    p_score = sub.add_parser(
        "score", parents=[common], help="score a hypothesis file against a reference file"
    )
    p_score.add_argument("--ref", required=True, help="annotated reference file")
    p_score.add_argument("--hyp", required=True, help="hypothesis file")
    p_score.add_argument("--format", choices=["json", "tsv"], default="json")
    p_score.add_argument(
        "--missing",
        choices=["error", "empty"],
        default="error",
        help="how to treat references with no hypothesis",
    )
    p_score.add_argument("--out", default=None, help="write the report here instead of stdout")
    p_score.add_argument("--jobs", type=int, default=1, help="scoring worker processes")
    p_score.add_argument(
        "--self-verify",
        action="store_true",
        help="recompute the corpus block from the per-utterance blocks and fail on mismatch",
    )

    p_align = sub.add_parser(
        "align", parents=[common], help="pretty-print one utterance's alignment"
    )
    p_align.add_argument("--ref", required=True)
    p_align.add_argument("--hyp", required=True)
    p_align.add_argument("--utterance", required=True, help="utterance id to display")
    p_align.add_argument("--scheme", choices=["standard", "disfluency"], default="disfluency")
    p_align.add_argument(
        "--enumerate",
        action="store_true",
        dest="enumerate_minima",
        help="also report how many minimal-cost alignments exist (small utterances only)",
    )

    p_sim = sub.add_parser(
        "simulate", parents=[common], help="generate, corrupt and score a synthetic corpus"
    )
    p_sim.add_argument("--out-dir", required=True)
    p_sim.add_argument("--config", default=None, help="key=value file with defaults for the flags below")
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--utterances", type=int, default=None)
    p_sim.add_argument("--vocab-size", type=int, default=None)
    p_sim.add_argument("--min-len", type=int, default=None)
    p_sim.add_argument("--max-len", type=int, default=None)
    p_sim.add_argument("--max-span", type=int, default=None)
    p_sim.add_argument("--p-repetition", type=float, default=None)
    p_sim.add_argument("--p-correction", type=float, default=None)
    p_sim.add_argument("--p-restart", type=float, default=None)
    p_sim.add_argument("--p-filler", type=float, default=None)
    p_sim.add_argument("--p-sub", type=float, default=None)
    p_sim.add_argument("--p-ins", type=float, default=None)
    p_sim.add_argument("--p-del", type=float, default=None)
    p_sim.add_argument("--mode", choices=["e2e", "verbatim"], default=None)
    p_sim.add_argument("--format", choices=["json", "tsv"], default="json")
    return parser


def _load_norm_config(args) -> NormalizationConfig:
    path = args.norm_config or os.environ.get(NORM_CONFIG_ENV)
    if path:
        return load_normalization_config(path)
    return DEFAULT_NORMALIZATION


def _read_pairs(args, config: NormalizationConfig, missing: str):
    refs = read_reference_file(args.ref, config, format=args.ref_format)
    hyps = read_hypothesis_file(args.hyp, config)
    pairs = pair_files(refs, hyps, missing=missing)
    return [(p.reference, p.hypothesis) for p in pairs]


def _cmd_score(args) -> int:
    config = _load_norm_config(args)
    pairs = _read_pairs(args, config, args.missing)
    pairs.sort(key=lambda pair: pair[0].utterance_id)
    scores = score_corpus(pairs, jobs=args.jobs)
    corpus = aggregate(scores)
    report = build_report(
        scores,
        corpus,
        config={
            "scheme": DISFLUENCY_AWARE.name,
            "normalization": config.to_dict(),
            "missing": args.missing,
            "ref_format": args.ref_format,
        },
    )
    if args.self_verify:
        try:
            verify_report(report)
        except ValueError as err:
            print(f"error: report self-verification failed: {err}", file=sys.stderr)
            return EXIT_INTERNAL
    text = render_json(report) if args.format == "json" else render_tsv(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(summary_line(corpus))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_align(args) -> int:
    config = _load_norm_config(args)
    scheme = SCHEMES["standard" if args.scheme == "standard" else "disfluency_aware"]
    refs = read_reference_file(args.ref, config, format=args.ref_format)
    hyps = read_hypothesis_file(args.hyp, config)
    ref = next((r for r in refs if r.utterance_id == args.utterance), None)
    hyp = next((h for h in hyps if h.utterance_id == args.utterance), None)
    if ref is None or hyp is None:
        missing_side = "reference" if ref is None else "hypothesis"
        raise PairingError(f"utterance id {args.utterance!r} not found in {missing_side} file")
    alignment = align(ref, hyp, scheme)
    bundle = counts_from_alignment(alignment, ref)
    print(f"utterance {ref.utterance_id}  scheme={scheme.name}")
    sys.stdout.write(render_alignment_text(ref, hyp, alignment))
    print(f"cost: base={alignment.cost.base} eps={alignment.cost.eps:+d}")
    counts = bundle.to_dict()
    print("counts: " + " ".join(f"{k}={v}" for k, v in counts.items()))
    if args.enumerate_minima:
        if max(len(ref.tokens), len(hyp.tokens)) > ORACLE_MAX_TOKENS:
            print(
                f"minimal alignments: not enumerated "
                f"(utterance longer than {ORACLE_MAX_TOKENS} tokens)"
            )
        else:
            minima = oracle_align_all(ref, hyp, scheme)
            print(f"minimal alignments: {len(minima)} (up to insertion placement)")
    return EXIT_OK


def _sim_settings(args) -> dict:
    defaults = {
        "seed": 0,
        "utterances": 100,
        "vocab_size": 50,
        "min_len": 5,
        "max_len": 12,
        "max_span": 2,
        "p_repetition": 0.06,
        "p_correction": 0.04,
        "p_restart": 0.02,
        "p_filler": 0.05,
        "p_sub": 0.0,
        "p_ins": 0.0,
        "p_del": 0.0,
        "mode": "e2e",
    }
    if args.config:
        for key, raw in _load_kv(args.config).items():
            if key not in defaults:
                raise ValueError(f"unknown simulate config key {key!r}")
            if key == "mode":
                defaults[key] = raw
            elif isinstance(defaults[key], float):
                defaults[key] = float(raw)
            else:
                defaults[key] = int(raw)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            defaults[key] = value
    if defaults["mode"] not in ("e2e", "verbatim"):
        raise ValueError(f"mode must be 'e2e' or 'verbatim', got {defaults['mode']!r}")
    return defaults


def _load_kv(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ParseError("expected key=value", path=path, line=line_no)
        key, _, value = text.partition("=")
        out[key.strip()] = value.strip()
    return out


def _cmd_simulate(args) -> int:
    settings = _sim_settings(args)
    rates = DisfluencyRates(
        p_repetition=settings["p_repetition"],
        p_correction=settings["p_correction"],
        p_restart=settings["p_restart"],
        p_filler=settings["p_filler"],
        max_span=settings["max_span"],
    )
    noise = ChannelRates(
        p_sub=settings["p_sub"], p_ins=settings["p_ins"], p_del=settings["p_del"]
    )
    mode = SimulationMode.E2E_PERFECT if settings["mode"] == "e2e" else SimulationMode.VERBATIM
    refs = gen_corpus(
        settings["seed"],
        settings["utterances"],
        settings["vocab_size"],
        (settings["min_len"], settings["max_len"]),
        rates,
    )
    hyps = [
        simulate_system(ref, mode, noise, seed=_hyp_seed(settings["seed"], k))
        for k, ref in enumerate(refs)
    ]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_reference_file(refs, out_dir / "ref.txt")
    write_hypothesis_file(hyps, out_dir / "hyp.txt")
    scores = score_corpus(list(zip(refs, hyps)))
    corpus = aggregate(scores)
    report = build_report(
        scores,
        corpus,
        config={
            "scheme": DISFLUENCY_AWARE.name,
            "normalization": DEFAULT_NORMALIZATION.to_dict(),
            "simulation": {k: settings[k] for k in sorted(settings)},
        },
    )
    if args.format == "json":
        (out_dir / "report.json").write_text(render_json(report), encoding="utf-8")
    else:
        (out_dir / "report.tsv").write_text(render_tsv(report), encoding="utf-8")
    print(summary_line(corpus))
    return EXIT_OK


def _hyp_seed(seed: int, index: int) -> int:
    # Offset the channel stream away from the generator stream.
    from .synth import child_seed

    return child_seed(seed ^ 0x5DEECE66D, index)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"score": _cmd_score, "align": _cmd_align, "simulate": _cmd_simulate}
    try:
        return handlers[args.command](args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except PairingError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PAIRING
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE


def run() -> None:
    sys.exit(main())
