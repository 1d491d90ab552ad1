"""Benchmark harness: relevance judgements, effect sizes, classification test.

Protocol, given per-topic relevance judgements over a corpus:

* keep topics where (possibly relevant + relevant) / judged >= min_frac,
  then drop the possibly-relevant documents;
* within each topic, pair the judged documents: both relevant -> same-topic
  pair, exactly one relevant -> separate-topic pair, neither -> excluded
  (a document pair judged under two topics contributes to both);
* Cliff's delta between the two score populations measures separation;
* a sampled nearest-set classification (50 iterations per topic of 10
  relevant + 10 not-relevant seeds, remaining judged documents classified
  by the larger of the two max-similarities, ties -> not relevant) yields a
  confusion matrix summarized by Matthews' phi.

All sampling derives from one integer seed via per-(topic, iteration)
SHA-256 substreams, so results do not depend on worker count or on Python's
hash randomization.
"""

from __future__ import annotations

import concurrent.futures
import csv
import enum
import hashlib
import logging
import math
import random
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import MissingDataError, ParseError, VocabrelError
from .infocontent import FreqTable, information_content, descendant_closure, term_frequencies
from .model import Corpus, Vocabulary, _iter_lines, _open_out
from .relatedness import MethodConfig, Scorer
from .termgraph import SimMatrix, build_ic_weighted_graph, build_unweighted_graph, similarity_matrix

log = logging.getLogger(__name__)

DEFAULT_MIN_TOPIC_FRAC = 0.10
DEFAULT_ITERATIONS = 50
DEFAULT_SAMPLE_SIZE = 10


class Level(enum.IntEnum):
    NOT_RELEVANT = 0
    POSSIBLY_RELEVANT = 1
    RELEVANT = 2


class RelevanceJudgement(NamedTuple):
    topic: str
    doc: str
    level: Level


def ingest_judgements(source) -> list[RelevanceJudgement]:
    """Parse ``topic<TAB>doc<TAB>level`` lines; duplicates keep the highest level."""
    path = source if isinstance(source, str) else None
    best: dict[tuple[str, str], Level] = {}
    for lineno, raw in enumerate(_iter_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected topic<TAB>doc<TAB>level", path=path, line=lineno)
        topic, doc, level_s = parts
        if not topic or not doc:
            raise ParseError("empty topic or document id", path=path, line=lineno)
        try:
            level = Level(int(level_s))
        except ValueError:
            raise ParseError(
                f"relevance level must be 0, 1 or 2, got {level_s!r}", path=path, line=lineno
            ) from None
        key = (topic, doc)
        if key not in best or level > best[key]:
            best[key] = level
    return [RelevanceJudgement(t, d, lv) for (t, d), lv in sorted(best.items())]


def write_judgements(judgements: Iterable[RelevanceJudgement], dest) -> None:
    with _open_out(dest) as fh:
        fh.write("#judgements topic<TAB>doc<TAB>level\n")
        for j in sorted(judgements):
            fh.write(f"{j.topic}\t{j.doc}\t{int(j.level)}\n")


def filter_topics(
    judgements: Sequence[RelevanceJudgement],
    min_frac: float = DEFAULT_MIN_TOPIC_FRAC,
) -> tuple[list[RelevanceJudgement], list[str]]:
    """Drop low-signal topics, then drop possibly-relevant judgements.

    A topic survives when (relevant + possibly relevant) / judged >= min_frac.
    Returns (surviving judgements without level-1 entries, dropped topics).
    """
    by_topic: dict[str, list[RelevanceJudgement]] = {}
    for j in judgements:
        by_topic.setdefault(j.topic, []).append(j)
    kept: list[RelevanceJudgement] = []
    dropped: list[str] = []
    for topic in sorted(by_topic):
        rows = by_topic[topic]
        positive = sum(1 for j in rows if j.level != Level.NOT_RELEVANT)
        if positive / len(rows) >= min_frac:
            kept.extend(j for j in rows if j.level != Level.POSSIBLY_RELEVANT)
        else:
            dropped.append(topic)
    return sorted(kept), dropped


@dataclass(frozen=True)
class TopicPairSet:
    """Document pairs keyed by (topic, doc_a, doc_b) with doc_a < doc_b."""

    same_topic: tuple[tuple[str, str, str], ...]
    separate_topic: tuple[tuple[str, str, str], ...]

    @property
    def n_pairs(self) -> int:
        return len(self.same_topic) + len(self.separate_topic)


def build_pairs(judgements: Sequence[RelevanceJudgement]) -> TopicPairSet:
    """All within-topic pairs of judged documents, split by shared relevance."""
    by_topic: dict[str, dict[str, Level]] = {}
    for j in judgements:
        by_topic.setdefault(j.topic, {})[j.doc] = j.level
    same: list[tuple[str, str, str]] = []
    separate: list[tuple[str, str, str]] = []
    for topic in sorted(by_topic):
        levels = by_topic[topic]
        docs = sorted(levels)
        for i, a in enumerate(docs):
            rel_a = levels[a] == Level.RELEVANT
            for b in docs[i + 1 :]:
                rel_b = levels[b] == Level.RELEVANT
                if rel_a and rel_b:
                    same.append((topic, a, b))
                elif rel_a or rel_b:
                    separate.append((topic, a, b))
    return TopicPairSet(same_topic=tuple(same), separate_topic=tuple(separate))


def cliffs_delta(xs: Sequence[float], ys: Sequence[float]) -> float:
    """P(x > y) - P(x < y) over all cross pairs, via sorted ranks."""
    if not xs or not ys:
        raise ValueError("cliffs_delta needs two non-empty samples")
    ys_sorted = sorted(ys)
    m = len(ys_sorted)
    total = 0
    for x in xs:
        total += bisect_left(ys_sorted, x) - (m - bisect_right(ys_sorted, x))
    return total / (len(xs) * m)


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __add__(self, other: "Confusion") -> "Confusion":
        return Confusion(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


def mcc(conf: Confusion) -> float:
    """Matthews correlation; 0.0 (with a warning) when any margin is empty."""
    tp, fp, tn, fn = conf.tp, conf.fp, conf.tn, conf.fn
    denom_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom_sq == 0:
        log.warning("degenerate confusion matrix %s, reporting phi = 0", conf)
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom_sq)


def skewness(xs: Sequence[float]) -> float:
    """Population skewness g1 = m3 / m2^(3/2)."""
    arr = np.asarray(xs, dtype=float)
    if arr.size < 3:
        raise ValueError(f"skewness needs at least 3 values, got {arr.size}")
    centered = arr - arr.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        raise ValueError("skewness undefined for a constant sample")
    m3 = float(np.mean(centered**3))
    return m3 / m2**1.5


def ccc(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Concordance correlation (population moments): rho * C_b."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size or x.size < 2:
        raise ValueError("ccc needs two equal-length samples of >= 2 values")
    mx, my = float(x.mean()), float(y.mean())
    sx = float(np.sqrt(np.mean((x - mx) ** 2)))
    sy = float(np.sqrt(np.mean((y - my) ** 2)))
    if sx == 0.0 or sy == 0.0:
        raise ValueError("ccc undefined for a constant sample")
    rho = float(np.mean((x - mx) * (y - my))) / (sx * sy)
    c_b = 2.0 / (sy / sx + sx / sy + (my - mx) ** 2 / (sx * sy))
    return rho * c_b


def derive_substream_seed(seed: int, topic: str, iteration: int) -> int:
    """Stable 64-bit seed for one (topic, iteration) sampling task."""
    digest = hashlib.sha256(f"{seed}|{topic}|{iteration}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def stable_sample(pool: Sequence[str], k: int, rng: random.Random) -> list[str]:
    """Sample k items without replacement using only rng.random().

    Partial Fisher-Yates over a copy; unlike random.sample this does not
    depend on CPython's getrandbits sequence, so the draw is reproducible
    from the documented rng.random() stream alone.
    """
    if k > len(pool):
        raise ValueError(f"cannot sample {k} from {len(pool)} items")
    items = list(pool)
    n = len(items)
    for i in range(k):
        j = i + int(rng.random() * (n - i))
        if j >= n:  # guard the (measure-zero) rng.random() == 1.0 edge
            j = n - 1
        items[i], items[j] = items[j], items[i]
    return items[:k]


ScoreFn = Callable[[str, str], float]


def _classify_task(
    topic: str,
    iteration: int,
    relevant: Sequence[str],
    not_relevant: Sequence[str],
    levels: dict[str, Level],
    docs: Sequence[str],
    score_fn: ScoreFn,
    sample_size: int,
    seed: int,
) -> Confusion:
    rng = random.Random(derive_substream_seed(seed, topic, iteration))
    seeds_rel = stable_sample(relevant, sample_size, rng)
    seeds_not = stable_sample(not_relevant, sample_size, rng)
    sampled = set(seeds_rel) | set(seeds_not)
    tp = fp = tn = fn = 0
    for doc in docs:
        if doc in sampled:
            continue
        best_rel = max(score_fn(doc, s) for s in seeds_rel)
        best_not = max(score_fn(doc, s) for s in seeds_not)
        predicted = best_rel > best_not  # tie -> not relevant
        actual = levels[doc] == Level.RELEVANT
        if predicted and actual:
            tp += 1
        elif predicted:
            fp += 1
        elif actual:
            fn += 1
        else:
            tn += 1
    return Confusion(tp, fp, tn, fn)


def classification_test(
    judgements: Sequence[RelevanceJudgement],
    score_fn: ScoreFn,
    iterations: int = DEFAULT_ITERATIONS,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    workers: int = 1,
) -> Confusion:
    """Sampled max-similarity classification over all topics.

    Every topic must hold at least ``sample_size`` relevant and
    ``sample_size`` not-relevant documents; a smaller topic is an error
    rather than a silent skip, so accuracy numbers stay comparable.
    """
    if iterations < 1 or sample_size < 1:
        raise ValueError("iterations and sample_size must be positive")
    by_topic: dict[str, dict[str, Level]] = {}
    for j in judgements:
        if j.level == Level.POSSIBLY_RELEVANT:
            raise ValueError("classification_test expects filtered judgements (levels 0/2 only)")
        by_topic.setdefault(j.topic, {})[j.doc] = j.level
    tasks: list[tuple] = []
    for topic in sorted(by_topic):
        levels = by_topic[topic]
        docs = sorted(levels)
        relevant = [d for d in docs if levels[d] == Level.RELEVANT]
        not_relevant = [d for d in docs if levels[d] == Level.NOT_RELEVANT]
        if len(relevant) < sample_size or len(not_relevant) < sample_size:
            raise VocabrelError(
                f"topic {topic!r} is too small to sample: "
                f"{len(relevant)} relevant / {len(not_relevant)} not relevant, "
                f"need {sample_size} of each"
            )
        for it in range(iterations):
            tasks.append((topic, it, relevant, not_relevant, levels, docs))

    def run(task) -> Confusion:
        topic, it, relevant, not_relevant, levels, docs = task
        return _classify_task(
            topic, it, relevant, not_relevant, levels, docs, score_fn, sample_size, seed
        )

    confusion = Confusion()
    if workers <= 1:
        for task in tasks:
            confusion = confusion + run(task)
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(run, tasks):
                confusion = confusion + part
    return confusion


class ScoreSource:
    """Memoized symmetric document-id scorer over a corpus."""

    def __init__(self, corpus: Corpus, scorer: Scorer):
        self.corpus = corpus
        self.scorer = scorer
        self._memo: dict[tuple[str, str], float] = {}

    def __call__(self, id_a: str, id_b: str) -> float:
        key = (id_a, id_b) if id_a <= id_b else (id_b, id_a)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        doc_a = self.corpus.documents.get(key[0])
        doc_b = self.corpus.documents.get(key[1])
        if doc_a is None or doc_b is None:
            missing = key[0] if doc_a is None else key[1]
            raise MissingDataError(f"judged document {missing!r} is not in the corpus")
        value = self.scorer.score(doc_a, doc_b)
        self._memo[key] = value
        return value


@dataclass(frozen=True)
class BenchResult:
    """One benchmark cell: configuration plus separation and accuracy stats."""

    config: MethodConfig
    delta: float = math.nan
    phi: float = math.nan
    mean_same: float = math.nan
    mean_separate: float = math.nan
    skew_same: float = math.nan
    skew_separate: float = math.nan
    n_same: int = 0
    n_separate: int = 0
    n_errors: int = 0
    n_classifications: int = 0
    note: str = ""


def _score_population(
    triples: Sequence[tuple[str, str, str]],
    source: ScoreSource,
    workers: int,
    errors: list[str],
) -> list[float]:
    def score_one(triple: tuple[str, str, str]) -> float | str:
        topic, a, b = triple
        try:
            return source(a, b)
        except VocabrelError as exc:
            return f"{topic}/{a}/{b}: {exc}"

    results: Iterable[float | str]
    if workers <= 1:
        results = map(score_one, triples)
    else:
        chunk = max(1, (len(triples) + workers * 4 - 1) // (workers * 4))
        split = [triples[i : i + chunk] for i in range(0, len(triples), chunk)]
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            batches = pool.map(lambda part: [score_one(t) for t in part], split)
            results = (r for batch in batches for r in batch)
    scores: list[float] = []
    for r in results:
        if isinstance(r, str):
            errors.append(r)
        else:
            scores.append(r)
    return scores


def run_benchmark(
    corpus: Corpus,
    judgements: Sequence[RelevanceJudgement],
    scorer: Scorer,
    iterations: int = DEFAULT_ITERATIONS,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    workers: int = 1,
    dump: tuple[list[float], list[float]] | None = None,
) -> BenchResult:
    """Run both protocols for one configuration over filtered judgements.

    Pairs whose score raises (empty document, no major terms) are dropped
    from the populations and counted in n_errors; the classification test
    treats a scoring failure as fatal since every comparison needs a value.
    If ``dump`` is given its two lists receive the same/separate populations.
    """
    pairs = build_pairs(judgements)
    source = ScoreSource(corpus, scorer)
    errors: list[str] = []
    same_scores = _score_population(pairs.same_topic, source, workers, errors)
    sep_scores = _score_population(pairs.separate_topic, source, workers, errors)
    for msg in errors[:10]:
        log.warning("pair skipped: %s", msg)
    if len(errors) > 10:
        log.warning("... and %d more skipped pairs", len(errors) - 10)
    if dump is not None:
        dump[0].extend(same_scores)
        dump[1].extend(sep_scores)
    if not same_scores or not sep_scores:
        raise VocabrelError(
            "benchmark needs both pair populations; got "
            f"{len(same_scores)} same-topic and {len(sep_scores)} separate-topic scores"
        )
    delta = cliffs_delta(same_scores, sep_scores)

    def skew_or_nan(scores: list[float]) -> float:
        try:
            return skewness(scores)
        except ValueError:
            return math.nan

    confusion = classification_test(
        judgements, source, iterations=iterations, sample_size=sample_size,
        seed=seed, workers=workers,
    )
    return BenchResult(
        config=scorer.config,
        delta=delta,
        phi=mcc(confusion),
        mean_same=float(np.mean(same_scores)),
        mean_separate=float(np.mean(sep_scores)),
        skew_same=skew_or_nan(same_scores),
        skew_separate=skew_or_nan(sep_scores),
        n_same=len(same_scores),
        n_separate=len(sep_scores),
        n_errors=len(errors),
        n_classifications=confusion.total,
    )


@dataclass
class ArtifactSet:
    """Shared inputs for a sweep: IC table and lazily built similarity matrices."""

    vocab: Vocabulary
    corpus: Corpus | None = None
    freq: FreqTable | None = None
    eps: float = 1e-4
    _ic: object = field(default=None, repr=False)
    _graphs: dict = field(default_factory=dict, repr=False)
    _matrices: dict = field(default_factory=dict, repr=False)

    def ic_table(self):
        if self._ic is None:
            if self.freq is not None:
                freq = self.freq
            elif self.corpus is not None:
                freq = term_frequencies(self.corpus, self.vocab)
            else:
                raise VocabrelError("information content needs term frequencies or a corpus")
            self._ic = information_content(freq, descendant_closure(self.vocab), self.vocab)
        return self._ic

    def graph(self, kind: str):
        if kind not in self._graphs:
            if kind == "g1":
                self._graphs[kind] = build_unweighted_graph(self.vocab)
            elif kind == "dic":
                self._graphs[kind] = build_ic_weighted_graph(self.vocab, self.ic_table())
            else:
                raise VocabrelError(f"unknown graph kind {kind!r}")
        return self._graphs[kind]

    def matrix(self, kind: str, lam: float) -> SimMatrix:
        key = (kind, lam, self.eps)
        if key not in self._matrices:
            restrict = self.corpus.term_ids() if self.corpus is not None else None
            self._matrices[key] = similarity_matrix(
                self.graph(kind), lam=lam, eps=self.eps, restrict=restrict
            )
        return self._matrices[key]

    def scorer(self, config: MethodConfig) -> Scorer:
        config.validate()
        ic = self.ic_table() if config.uses_ic else None
        matrix = None
        if config.uses_graph:
            assert config.graph is not None and config.lam is not None
            matrix = self.matrix(config.graph, config.lam)
        return Scorer(config=config, ic=ic, matrix=matrix)


def parameter_sweep(
    configs: Sequence[MethodConfig],
    artifacts: ArtifactSet,
    judgements: Sequence[RelevanceJudgement],
    iterations: int = DEFAULT_ITERATIONS,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = 0,
    workers: int = 1,
) -> list[BenchResult]:
    """Benchmark every configuration, reusing IC tables and matrices.

    A failing cell is reported with NaN statistics and an explanatory note;
    the sweep continues.
    """
    if artifacts.corpus is None:
        raise VocabrelError("parameter_sweep needs a corpus")
    results: list[BenchResult] = []
    for config in configs:
        try:
            scorer = artifacts.scorer(config)
            results.append(
                run_benchmark(
                    artifacts.corpus, judgements, scorer,
                    iterations=iterations, sample_size=sample_size,
                    seed=seed, workers=workers,
                )
            )
        except VocabrelError as exc:
            log.warning("sweep cell %s failed: %s", config.tag(), exc)
            results.append(BenchResult(config=config, note=str(exc)))
    return results


CSV_FIELDS = [
    "method", "vector", "graph", "w", "lambda", "slim",
    "delta", "phi", "mean_same", "mean_sep", "skew_same", "skew_sep", "n_errors",
]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_results_csv(results: Sequence[BenchResult], dest) -> None:
    """Fixed-column CSV, one row per benchmark cell; '.' marks inapplicable fields.

    The file starts with the column header; run provenance (seed, inputs,
    failure notes) belongs in the accompanying manifest, not in extra columns.
    """
    with _open_out(dest) as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in results:
            cfg = r.config
            in_table = dict(pair.split("=", 1) for pair in cfg.tag().split(" "))
            writer.writerow(
                {
                    "method": cfg.method_label,
                    "vector": in_table["vector"]
                    + ("+q" if cfg.qualifiers and in_table["vector"] != "." else ""),
                    "graph": in_table["graph"],
                    "w": in_table["w"],
                    "lambda": in_table["lambda"],
                    "slim": in_table["slim"],
                    "delta": _fmt(r.delta),
                    "phi": _fmt(r.phi),
                    "mean_same": _fmt(r.mean_same),
                    "mean_sep": _fmt(r.mean_separate),
                    "skew_same": _fmt(r.skew_same),
                    "skew_sep": _fmt(r.skew_separate),
                    "n_errors": r.n_errors,
                }
            )


def write_distributions(
    same: Sequence[float], separate: Sequence[float], dest, header_tag: str = ""
) -> None:
    """Dump score populations as ``group<TAB>score`` lines for external analysis."""
    with _open_out(dest) as fh:
        fh.write(f"#distributions {header_tag}\n".rstrip() + "\n")
        for s in same:
            fh.write(f"same\t{s:.17g}\n")
        for s in separate:
            fh.write(f"separate\t{s:.17g}\n")


__all__ = [
    "Level",
    "RelevanceJudgement",
    "ingest_judgements",
    "write_judgements",
    "filter_topics",
    "TopicPairSet",
    "build_pairs",
    "cliffs_delta",
    "Confusion",
    "mcc",
    "skewness",
    "ccc",
    "derive_substream_seed",
    "stable_sample",
    "classification_test",
    "ScoreSource",
    "BenchResult",
    "run_benchmark",
    "ArtifactSet",
    "parameter_sweep",
    "CSV_FIELDS",
    "write_results_csv",
    "write_distributions",
]
