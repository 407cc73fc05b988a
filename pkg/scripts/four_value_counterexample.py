#!/usr/bin/env python3
"""Scan integer spectra of length 4 (t_4 <= 16) for 4-value failures.

Prints the first failure in (t_4, then lexicographic) order, followed by
the total number of failures found.
"""
from itertools import combinations

from spectra import IntegralSpectrum, four_value_check


def main() -> None:
    first, failures = None, 0
    for t4 in range(4, 17):
        for head in combinations(range(1, t4), 3):
            x = IntegralSpectrum(head + (t4,))
            report = four_value_check(x)
            if report is not True:
                failures += 1
                if first is None:
                    first = (x, report)
    if first is None:
        print("no failures")
        return
    x, report = first
    print(f"first failure: {x}")
    print(f"  triangles {report.first} and {report.second} share a side with no completion")
    print(f"  values {[tuple(str(v) for v in t) for t in report.values]}")
    print(f"failures with t_4 <= 16: {failures}")


if __name__ == "__main__":
    main()
