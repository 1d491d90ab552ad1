"""Seeded synthetic vocabulary, corpus and judgements for benchmarks and tests.

The generated world has one root term and ``n_topics`` disjoint subtrees
hanging off it.  Every topic gets ``docs_per_topic`` documents; a document
is indexed with a fixed per-topic core (so same-topic documents always
overlap) plus a random draw from the rest of the subtree.  Judgements mark
a topic's own documents relevant and a draw of other topics' documents not
relevant, which gives well-separated same-topic and separate-topic pair
populations by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .benchmark import Level, RelevanceJudgement, stable_sample
from .model import Annotation, Corpus, Document, Term, Vocabulary


@dataclass(frozen=True)
class SynthConfig:
    n_topics: int = 3
    docs_per_topic: int = 20
    terms_per_topic: int = 30
    terms_per_doc: int = 10
    core_terms: int = 5
    n_qualifiers: int = 4
    majors_per_doc: int = 2
    possibly_relevant_per_topic: int = 2
    seed: int = 0

    def validate(self) -> None:
        if self.n_topics < 2:
            raise ValueError("need at least 2 topics to form separate-topic pairs")
        if not self.core_terms <= self.terms_per_doc <= self.terms_per_topic:
            raise ValueError("need core_terms <= terms_per_doc <= terms_per_topic")
        if self.majors_per_doc > self.terms_per_doc:
            raise ValueError("majors_per_doc exceeds terms_per_doc")


def make_benchmark_data(
    config: SynthConfig = SynthConfig(),
) -> tuple[Vocabulary, Corpus, list[RelevanceJudgement]]:
    config.validate()
    rng = random.Random(config.seed)

    terms: dict[str, Term] = {"ROOT": Term(id="ROOT", label="root", parents=frozenset())}
    qualifiers = {f"Q{i:02d}": f"qualifier {i}" for i in range(config.n_qualifiers)}
    topic_terms: dict[str, list[str]] = {}
    for k in range(config.n_topics):
        topic = f"T{k}"
        terms[topic] = Term(id=topic, label=f"topic {k} head", parents=frozenset({"ROOT"}))
        members: list[str] = []
        for i in range(config.terms_per_topic):
            tid = f"{topic}.{i:03d}"
            # chain the first few off the head, then attach to random members
            # to get varying depths; occasional double parent makes it a DAG
            if i < 3 or not members:
                parents = {topic}
            else:
                parents = {members[int(rng.random() * len(members))]}
                if rng.random() < 0.15:
                    parents.add(topic)
            terms[tid] = Term(id=tid, label=f"term {tid}", parents=frozenset(parents))
            members.append(tid)
        topic_terms[topic] = members

    documents: dict[str, Document] = {}
    doc_topics: dict[str, str] = {}
    qual_ids = sorted(qualifiers)
    for k in range(config.n_topics):
        topic = f"T{k}"
        members = topic_terms[topic]
        core = members[: config.core_terms]
        tail_pool = members[config.core_terms :]
        for d in range(config.docs_per_topic):
            doc_id = f"{topic}D{d:03d}"
            extra = stable_sample(tail_pool, config.terms_per_doc - config.core_terms, rng)
            doc_terms = sorted(core + extra)
            majors = set(stable_sample(doc_terms, config.majors_per_doc, rng))
            annotations = []
            for t in doc_terms:
                quals = frozenset()
                if rng.random() < 0.3:
                    quals = frozenset({qual_ids[int(rng.random() * len(qual_ids))]})
                annotations.append(Annotation(term=t, is_major=t in majors, qualifiers=quals))
            documents[doc_id] = Document(id=doc_id, annotations=tuple(annotations))
            doc_topics[doc_id] = topic

    judgements: list[RelevanceJudgement] = []
    all_docs = sorted(documents)
    for k in range(config.n_topics):
        topic = f"T{k}"
        own = [d for d in all_docs if doc_topics[d] == topic]
        others = [d for d in all_docs if doc_topics[d] != topic]
        for d in own:
            judgements.append(RelevanceJudgement(topic, d, Level.RELEVANT))
        negatives = stable_sample(others, min(len(others), config.docs_per_topic), rng)
        for d in sorted(negatives):
            judgements.append(RelevanceJudgement(topic, d, Level.NOT_RELEVANT))
        # a couple of possibly-relevant entries so filtering has work to do
        maybes = [d for d in sorted(others) if d not in set(negatives)]
        for d in maybes[: config.possibly_relevant_per_topic]:
            judgements.append(RelevanceJudgement(topic, d, Level.POSSIBLY_RELEVANT))

    vocab = Vocabulary(terms=terms, qualifiers=qualifiers)
    corpus = Corpus(documents=documents)
    return vocab, corpus, sorted(judgements)


__all__ = ["SynthConfig", "make_benchmark_data"]
