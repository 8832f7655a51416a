"""How the metrics respond to recognizer noise, on synthetic data.

Simulates two system styles over the same generated corpus: one that removes
every disfluency before the noise channel (e2e_perfect) and one that echoes
the full disfluent reference (verbatim). Sweeping the substitution rate
shows FER tracking recognition quality while DER stays pinned at the
system's disfluency behavior. Run with:

    python demos/simulation_study.py
"""

from disfleval import (
    ChannelRates,
    DisfluencyRates,
    SimulationMode,
    aggregate,
    child_seed,
    gen_corpus,
    score_corpus,
    simulate_system,
)

RATES = DisfluencyRates(
    p_repetition=0.08, p_correction=0.05, p_restart=0.02, p_filler=0.06, max_span=2
)


def corpus_metrics(refs, mode, noise, seed):
    pairs = [
        (ref, simulate_system(ref, mode, noise, child_seed(seed, k)))
        for k, ref in enumerate(refs)
    ]
    corpus = aggregate(score_corpus(pairs))
    return corpus.fer, corpus.der, corpus.wer_fluent


def fmt(x):
    return f"{'n/a':>6}" if x is None else f"{float(x):6.3f}"


def main() -> None:
    refs = gen_corpus(seed=11, size=500, vocab_size=40, length_range=(5, 12), rates=RATES)
    print(f"{len(refs)} synthetic utterances, "
          f"{sum(r.n_disfluent for r in refs)} disfluent tokens, "
          f"{sum(len(r.repairs) for r in refs)} repair structures")
    print()
    header = f"{'p_sub':>6} | {'FER':>6} {'DER':>6} {'WER_fl':>6} | {'FER':>6} {'DER':>6} {'WER_fl':>6}"
    print(f"{'':6} | {'e2e_perfect':^20} | {'verbatim':^20}")
    print(header)
    print("-" * len(header))
    for p_sub in (0.0, 0.02, 0.05, 0.1, 0.2):
        noise = ChannelRates(p_sub=p_sub)
        e2e = corpus_metrics(refs, SimulationMode.E2E_PERFECT, noise, seed=1)
        verbatim = corpus_metrics(refs, SimulationMode.VERBATIM, noise, seed=1)
        print(
            f"{p_sub:6.2f} | {fmt(e2e[0])} {fmt(e2e[1])} {fmt(e2e[2])} "
            f"| {fmt(verbatim[0])} {fmt(verbatim[1])} {fmt(verbatim[2])}"
        )
    print()
    print("The perfect-removal system keeps DER at 0 no matter how noisy the")
    print("channel gets, while the verbatim system stays at DER 1.0; FER and the")
    print("fluent-subsequence WER grow with the substitution rate for both.")


if __name__ == "__main__":
    main()
