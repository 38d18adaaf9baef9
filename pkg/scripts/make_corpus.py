#!/usr/bin/env python3
"""Generate a synthetic planted-keyword gold corpus as a CSV.

Handy for demos and pipeline smoke tests:

    python scripts/make_corpus.py --out gold.csv --docs 1200 --noise 0.05
"""

from __future__ import annotations

import argparse

from emoclf.corpus import write_gold_corpus
from emoclf.synth import DEFAULT_KEYWORDS, generate_planted_corpus

EXTRA_KEYWORDS = {
    "joy": DEFAULT_KEYWORDS,
    "anger": ("grumblex", "snarlit", "vexopod", "irktron", "fumeply"),
    "fear": ("dreadix", "shiverel", "qualmor", "frightex", "tremblo"),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="gold CSV to write")
    parser.add_argument("--docs", type=int, default=1200)
    parser.add_argument(
        "--emotions",
        default="joy",
        help="comma-separated subset of " + ",".join(EXTRA_KEYWORDS),
    )
    parser.add_argument("--noise", type=float, default=0.05,
                        help="label flip probability")
    parser.add_argument("--positive-rate", type=float, default=0.5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    emotions = [name.strip() for name in args.emotions.split(",") if name.strip()]
    unknown = [name for name in emotions if name not in EXTRA_KEYWORDS]
    if unknown:
        parser.error(f"no keyword set for {unknown}; choose from {sorted(EXTRA_KEYWORDS)}")

    docs = generate_planted_corpus(
        args.docs,
        {name: EXTRA_KEYWORDS[name] for name in emotions},
        positive_rate=args.positive_rate,
        noise=args.noise,
        seed=args.seed,
    )
    write_gold_corpus(args.out, docs, emotions)
    print(f"wrote {len(docs)} documents x {len(emotions)} emotion(s) to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
