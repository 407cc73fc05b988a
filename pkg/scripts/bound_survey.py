#!/usr/bin/env python3
"""How close do lifted representatives come to their bounds?

For every class of length n (from the atlas) and for the random corpus,
record |det B|, the lifted last entry y_n against 2^n, and the tightest
internal ratio y_n / y_i against 2^(n-i+1). Prints one JSON line per n.
"""
import argparse
import json
from fractions import Fraction

from spectra.canon import vertex_of
from spectra.sampling import spectrum_corpus
from spectra.search import enumerate_classes


def survey(n: int, spectra) -> dict:
    max_det = max_last = 0
    worst_internal = Fraction(0)
    for x in spectra:
        _, cert = vertex_of(x)
        d = abs(cert.basis_det)
        y = [d * c for c in cert.point.coords]
        max_det = max(max_det, d)
        max_last = max(max_last, int(y[-1]))
        for i in range(1, n):
            worst_internal = max(worst_internal, y[-1] / (2 ** (n - i + 1) * y[i - 1]))
    return {
        "n": n,
        "samples": len(spectra),
        "max_abs_det": max_det,
        "max_last_entry": max_last,
        "last_entry_bound": 2 ** n,
        "max_internal_ratio": str(worst_internal),  # <= 1 when the internal bound holds
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=5, help="exhaust every class up to this n")
    ap.add_argument("--corpus-n", type=int, default=8, help="random corpus up to this n")
    ap.add_argument("--count", type=int, default=1000)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        witnesses = [r.canonical_witness.to_spectrum() for r in enumerate_classes(n).records]
        print(json.dumps({"source": "atlas", **survey(n, witnesses)}))
    for n in range(1, args.corpus_n + 1):
        print(json.dumps({"source": "corpus", **survey(n, spectrum_corpus(n, args.count))}))


if __name__ == "__main__":
    main()
