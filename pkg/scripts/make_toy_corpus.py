#!/usr/bin/env python3
"""Generate a synthetic toy corpus JSONL for quick experiments."""

import argparse

from factorsum.corpus import save_corpus
from factorsum.toy import make_toy_corpus


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", help="output JSONL path")
    parser.add_argument("--n-docs", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    docs = make_toy_corpus(n_docs=args.n_docs, seed=args.seed)
    save_corpus(docs, args.out)
    print(f"wrote {len(docs)} documents to {args.out}")


if __name__ == "__main__":
    main()
