#!/usr/bin/env python3
"""Generate a synthetic vocabulary / corpus / judgements triple for experiments.

The generated world has per-topic term subtrees hanging off a shared root,
documents mixing topic-core and peripheral terms, and graded relevance
judgements, so every relatedness method has signal to find.
"""

from __future__ import annotations

import argparse
from pathlib import Path

from vocabrel.benchmark import write_judgements
from vocabrel.model import serialize_corpus, serialize_vocabulary
from vocabrel.synthdata import SynthConfig, make_benchmark_data


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", required=True, help="directory for the three output files")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--topics", type=int, default=SynthConfig.n_topics)
    parser.add_argument("--docs-per-topic", type=int, default=SynthConfig.docs_per_topic)
    args = parser.parse_args()

    config = SynthConfig(
        n_topics=args.topics, docs_per_topic=args.docs_per_topic, seed=args.seed
    )
    vocab, corpus, judgements = make_benchmark_data(config)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    serialize_vocabulary(vocab, out / "vocab.jsonl")
    serialize_corpus(corpus, out / "corpus.jsonl")
    write_judgements(judgements, out / "judgements.tsv")
    print(
        f"wrote {len(vocab.terms)} terms, {len(corpus.documents)} documents, "
        f"{len(judgements)} judgements to {out}"
    )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
