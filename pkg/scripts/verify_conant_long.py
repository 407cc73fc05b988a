#!/usr/bin/env python3
"""Long Conant verification runs (n = 6 or 7) with checkpointing.

Interrupt at any time; rerunning with the same --checkpoint resumes. The
report goes to stdout as JSON and the atlas to --out.

    python scripts/verify_conant_long.py --n 7 --jobs 8 \
        --checkpoint runs/n7.ckpt --out runs/n7.atlas.jsonl
"""
import argparse
import json
import logging
import sys

from spectra.search import verify_conant


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, required=True, choices=range(1, 8))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--checkpoint", required=True)
    ap.add_argument("--out", required=True)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(asctime)s %(message)s")

    report = verify_conant(args.n, jobs=args.jobs, checkpoint_path=args.checkpoint)
    report.atlas.write(args.out)
    print(json.dumps(report.to_json()))
    if report.no_witness:
        bad = [r for r in report.atlas.records if r.conant_witness is None]
        logging.error("%d classes lack a representative in Conant's box; first: %s",
                      len(bad), bad[0].profile.triples)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
