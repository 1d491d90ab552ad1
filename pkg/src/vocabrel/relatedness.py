"""Relatedness measures between indexed documents.

Three families:

* Salton's cosine over binary, IC-weighted, or qualifier-augmented vectors.
* Soft cosine x'Sy / sqrt(x'Sx) sqrt(y'Sy) with S a sparse term similarity
  matrix (implicit unit diagonal).  With S = I it reduces bitwise to
  Salton's cosine on the same vectors.
* Maximum term similarities (mts): for each term of one document take the
  best similarity against the other document's terms, then average both
  directions with major terms weighted by w.  The raw-distance variant
  aggregates negated shortest-path distances instead of similarities.

Scores are reported as computed, without clamping: the cosine of nonnegative
vectors lands in [0, 1] up to float rounding, and raw-distance scores are
legitimately negative.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .docvectors import QualifiedTermVector, TermVector, document_vector
from .errors import (
    ConfigError,
    EmptyDocumentError,
    NoMajorTermsError,
    NonPositiveQuadraticFormError,
    VocabrelError,
)
from .infocontent import ICTable
from .model import Corpus, Document
from .termgraph import SimMatrix

METHODS = ("salton", "soft", "mts")

SimFn = Callable[[str, str], float]


class RelatednessScore(NamedTuple):
    value: float
    method: str
    params: str = ""


def _sparse_dot(x: TermVector, y: TermVector) -> float:
    # fixed iteration order (sorted shared keys) so x.y == y.x bitwise and
    # the soft cosine with a diagonal S reproduces this sum exactly
    total = 0.0
    for key in sorted(x.keys() & y.keys()):
        total += x[key] * y[key]
    return total


def _split(vec: TermVector | QualifiedTermVector) -> tuple[TermVector, dict]:
    if isinstance(vec, QualifiedTermVector):
        return dict(vec.term_part), dict(vec.qual_part)
    return vec, {}


def _salton_value(x: TermVector | QualifiedTermVector, y: TermVector | QualifiedTermVector) -> float:
    xt, xq = _split(x)
    yt, yq = _split(y)
    nx = _sparse_dot(xt, xt) + _sparse_dot(xq, xq)
    ny = _sparse_dot(yt, yt) + _sparse_dot(yq, yq)
    if nx == 0.0 or ny == 0.0:
        raise EmptyDocumentError("cosine of a zero vector")
    dot = _sparse_dot(xt, yt) + _sparse_dot(xq, yq)
    return dot / (math.sqrt(nx) * math.sqrt(ny))


def salton_cosine(
    x: TermVector | QualifiedTermVector, y: TermVector | QualifiedTermVector
) -> RelatednessScore:
    """Cosine similarity of two sparse vectors."""
    return RelatednessScore(_salton_value(x, y), "salton")


def _quadratic_form(x: TermVector, y: TermVector, matrix: SimMatrix) -> float:
    total = 0.0
    for i in sorted(x):
        xi = x[i]
        for j in sorted(y):
            s = matrix.sim(i, j)
            if s != 0.0:
                total += s * xi * y[j]
    return total


def _soft_value(
    x: TermVector,
    y: TermVector,
    matrix: SimMatrix,
    qx: float | None = None,
    qy: float | None = None,
) -> float:
    if not x or not y:
        raise EmptyDocumentError("soft cosine of an empty vector")
    # canonical argument order keeps the float sum, and hence the result,
    # identical under argument swap
    if sorted(y) < sorted(x):
        x, y = y, x
        qx, qy = qy, qx
    if qx is None:
        qx = _quadratic_form(x, x, matrix)
    if qy is None:
        qy = _quadratic_form(y, y, matrix)
    if qx <= 0.0 or qy <= 0.0:
        raise NonPositiveQuadraticFormError(
            f"non-positive quadratic form (x'Sx={qx!r}, y'Sy={qy!r})"
        )
    return _quadratic_form(x, y, matrix) / (math.sqrt(qx) * math.sqrt(qy))


def soft_cosine(x: TermVector, y: TermVector, matrix: SimMatrix) -> RelatednessScore:
    """Soft cosine with term-to-term similarities from ``matrix``.

    Takes plain term vectors only; qualifier-augmented vectors have no
    similarity entries for qualifier dimensions.
    """
    if isinstance(x, QualifiedTermVector) or isinstance(y, QualifiedTermVector):
        raise ConfigError("soft cosine is not defined for qualifier-augmented vectors")
    return RelatednessScore(_soft_value(x, y, matrix), "soft")


def _mts_terms(doc: Document, slim: bool) -> list[tuple[str, bool]]:
    if doc.is_empty:
        raise EmptyDocumentError(f"empty document {doc.id!r}")
    pairs = [(a.term, a.is_major) for a in doc.annotations]
    if slim:
        pairs = [(t, m) for t, m in pairs if m]
        if not pairs:
            raise NoMajorTermsError(f"document {doc.id!r} has no major terms")
    return pairs


def _mts_side(
    terms: Sequence[tuple[str, bool]],
    other: Sequence[tuple[str, bool]],
    sim: SimFn,
    w: float,
) -> tuple[float, float]:
    num = 0.0
    den = 0.0
    for t, major in terms:
        best = max(sim(t, u) for u, _ in other)
        weight = w if major else 1.0
        num += weight * best
        den += weight
    return num, den


def _mts_value(doc_a: Document, doc_b: Document, sim: SimFn, w: float, slim: bool) -> float:
    if w < 1:
        raise ValueError(f"major weight must be >= 1, got {w}")
    if doc_b.id < doc_a.id:
        doc_a, doc_b = doc_b, doc_a
    ta = _mts_terms(doc_a, slim)
    tb = _mts_terms(doc_b, slim)
    num_a, den_a = _mts_side(ta, tb, sim, w)
    num_b, den_b = _mts_side(tb, ta, sim, w)
    return (num_a + num_b) / (den_a + den_b)


def mts(
    doc_a: Document,
    doc_b: Document,
    sim: SimFn,
    w: float = 1.0,
    slim: bool = False,
) -> RelatednessScore:
    """Average of per-term best similarities, major terms weighted by w."""
    return RelatednessScore(_mts_value(doc_a, doc_b, sim, w, slim), "mts")


def matrix_sim_fn(matrix: SimMatrix) -> SimFn:
    """Similarity lookup backed by a materialized SimMatrix."""
    return matrix.sim


def matrix_distance_fn(matrix: SimMatrix) -> SimFn:
    """Negated shortest-path distances recovered from a SimMatrix.

    Stored similarity s corresponds to distance -lambda*ln(s).  Pairs beyond
    the matrix horizon (absent entries, including disconnected pairs) count
    as the cutoff distance: -lambda*ln(eps) when eps > 0, otherwise one more
    than the largest materialized distance.
    """
    lam = matrix.lam
    if matrix.eps > 0.0:
        cutoff = -lam * math.log(matrix.eps)
    else:
        longest = max((-lam * math.log(s) for s in matrix.entries.values()), default=0.0)
        cutoff = longest + 1.0

    def neg_distance(a: str, b: str) -> float:
        if a == b:
            return 0.0
        s = matrix.sim(a, b)
        if s <= 0.0:
            return -cutoff
        return -min(cutoff, -lam * math.log(s))

    return neg_distance


@dataclass(frozen=True)
class MethodConfig:
    """Full parameterization of one relatedness method."""

    method: str
    vector: str = "binary"
    qualifiers: bool = False
    graph: str | None = None
    w: float = 1.0
    lam: float | None = None
    eps: float = 1e-4
    slim: bool = False
    raw_distance: bool = False

    @property
    def method_label(self) -> str:
        if self.method == "mts" and self.raw_distance:
            return "mts-rawdist"
        return self.method

    @property
    def uses_ic(self) -> bool:
        return (self.method in ("salton", "soft") and self.vector == "ic") or self.graph == "dic"

    @property
    def uses_graph(self) -> bool:
        return self.method in ("soft", "mts")

    def validate(self) -> None:
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.w < 1:
            raise ConfigError(f"major weight must be >= 1, got {self.w}")
        if self.method in ("salton", "soft"):
            if self.vector not in ("binary", "ic"):
                raise ConfigError(f"unknown vector kind {self.vector!r}")
            if self.slim:
                raise ConfigError("slim applies to mts only")
            if self.raw_distance:
                raise ConfigError("raw-distance applies to mts only")
        if self.method == "salton" and self.graph is not None:
            raise ConfigError("salton does not use a term graph")
        if self.method == "salton" and self.lam is not None:
            raise ConfigError("salton does not use lambda")
        if self.method == "soft" and self.qualifiers:
            raise ConfigError("soft cosine does not support qualifier-augmented vectors")
        if self.method == "mts" and self.qualifiers:
            raise ConfigError("mts does not use vectors, qualifiers do not apply")
        if self.uses_graph:
            if self.graph not in ("g1", "dic"):
                raise ConfigError(f"method {self.method!r} needs graph g1 or dic, got {self.graph!r}")
            if self.lam is None or self.lam <= 0:
                raise ConfigError(f"method {self.method!r} needs lambda > 0, got {self.lam}")
            if not 0.0 <= self.eps < 1.0:
                raise ConfigError(f"eps must be in [0, 1), got {self.eps}")

    def tag(self) -> str:
        """Key=value rendering of every parameter, for output headers."""
        fields = [
            ("method", self.method_label),
            ("vector", self.vector if self.method in ("salton", "soft") else "."),
            ("qualifiers", str(self.qualifiers).lower() if self.method == "salton" else "."),
            ("graph", self.graph if self.uses_graph else "."),
            ("w", f"{self.w:g}"),
            ("lambda", f"{self.lam:g}" if self.uses_graph and self.lam is not None else "."),
            ("eps", f"{self.eps:g}" if self.uses_graph else "."),
            ("slim", str(self.slim).lower() if self.method == "mts" else "."),
        ]
        return " ".join(f"{k}={v}" for k, v in fields)


@dataclass
class Scorer:
    """Applies one configured method to document pairs, caching per-document work."""

    config: MethodConfig
    ic: ICTable | None = None
    matrix: SimMatrix | None = None
    _vectors: dict[str, TermVector | QualifiedTermVector] = field(default_factory=dict, repr=False)
    _qforms: dict[str, float] = field(default_factory=dict, repr=False)
    _sim_fn: SimFn | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        cfg = self.config
        cfg.validate()
        if cfg.uses_ic and self.ic is None:
            raise ConfigError(f"configuration {cfg.tag()!r} needs an IC table")
        if cfg.uses_graph and self.matrix is None:
            raise ConfigError(f"configuration {cfg.tag()!r} needs a similarity matrix")
        if self.matrix is not None:
            if cfg.raw_distance:
                self._sim_fn = matrix_distance_fn(self.matrix)
            else:
                self._sim_fn = self.matrix.sim

    def _vector(self, doc: Document) -> TermVector | QualifiedTermVector:
        vec = self._vectors.get(doc.id)
        if vec is None:
            cfg = self.config
            vec = document_vector(
                doc,
                use_ic=cfg.vector == "ic",
                ic=self.ic,
                w=cfg.w,
                qualifiers=cfg.qualifiers,
            )
            self._vectors[doc.id] = vec
        return vec

    def _qform(self, doc_id: str, vec: TermVector) -> float:
        q = self._qforms.get(doc_id)
        if q is None:
            assert self.matrix is not None
            q = _quadratic_form(vec, vec, self.matrix)
            self._qforms[doc_id] = q
        return q

    def score(self, doc_a: Document, doc_b: Document) -> float:
        cfg = self.config
        if cfg.method == "salton":
            return _salton_value(self._vector(doc_a), self._vector(doc_b))
        if cfg.method == "soft":
            assert self.matrix is not None
            x = self._vector(doc_a)
            y = self._vector(doc_b)
            try:
                return _soft_value(
                    x, y, self.matrix, self._qform(doc_a.id, x), self._qform(doc_b.id, y)
                )
            except NonPositiveQuadraticFormError as exc:
                raise NonPositiveQuadraticFormError(
                    f"documents {doc_a.id!r}, {doc_b.id!r}: {exc}"
                ) from None
        assert self._sim_fn is not None
        return _mts_value(doc_a, doc_b, self._sim_fn, cfg.w, cfg.slim)


PairScore = tuple[str, str, RelatednessScore]
PairError = tuple[str, str, str]


def _score_chunk(
    chunk: Sequence[tuple[str, str]], corpus: Corpus, scorer: Scorer, params: str
) -> list[tuple[str, str, RelatednessScore | None, str | None]]:
    out: list[tuple[str, str, RelatednessScore | None, str | None]] = []
    method = scorer.config.method_label
    for id_a, id_b in chunk:
        doc_a = corpus.documents.get(id_a)
        doc_b = corpus.documents.get(id_b)
        if doc_a is None or doc_b is None:
            missing = id_a if doc_a is None else id_b
            out.append((id_a, id_b, None, f"unknown document {missing!r}"))
            continue
        try:
            value = scorer.score(doc_a, doc_b)
        except VocabrelError as exc:
            out.append((id_a, id_b, None, str(exc)))
            continue
        out.append((id_a, id_b, RelatednessScore(value, method, params), None))
    return out


def pairwise_scores(
    corpus: Corpus,
    pairs: Sequence[tuple[str, str]],
    scorer: Scorer,
    errors: list[PairError] | None = None,
    workers: int = 1,
) -> Iterator[PairScore]:
    """Score pairs in input order; failing pairs go to ``errors`` and are skipped.

    The output is identical for any worker count: chunks are mapped in order
    and each pair's score depends only on that pair.
    """
    params = scorer.config.tag()
    if workers <= 1 or len(pairs) < 2:
        chunks: Iterable[Sequence[tuple[str, str]]] = [pairs]
        results = (_score_chunk(c, corpus, scorer, params) for c in chunks)
        for batch in results:
            yield from _drain(batch, errors)
        return
    chunk_size = max(1, (len(pairs) + workers * 4 - 1) // (workers * 4))
    split = [pairs[i : i + chunk_size] for i in range(0, len(pairs), chunk_size)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(lambda c: _score_chunk(c, corpus, scorer, params), split):
            yield from _drain(batch, errors)


def _drain(
    batch: Sequence[tuple[str, str, RelatednessScore | None, str | None]],
    errors: list[PairError] | None,
) -> Iterator[PairScore]:
    for id_a, id_b, score, err in batch:
        if score is None:
            if errors is not None:
                errors.append((id_a, id_b, err or "error"))
            continue
        yield (id_a, id_b, score)


def write_scores(dest, tag: str, results: Iterable[PairScore]) -> int:
    """Write ``doc_a<TAB>doc_b<TAB>score`` lines under a ``#method ...`` header."""
    from .model import _open_out

    if tag.startswith("method="):
        tag = tag[len("method=") :]
    n = 0
    with _open_out(dest) as fh:
        fh.write(f"#method {tag}\n")
        for id_a, id_b, score in results:
            fh.write(f"{id_a}\t{id_b}\t{score.value:.17g}\n")
            n += 1
    return n


def read_scores(source) -> tuple[str, list[tuple[str, str, float]]]:
    """Inverse of write_scores; returns (header tag, rows)."""
    from .errors import ParseError
    from .model import _iter_lines

    header = ""
    rows: list[tuple[str, str, float]] = []
    path = source if isinstance(source, str) else None
    for lineno, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#"):
            if lineno == 1 and line.startswith("#method "):
                header = line[len("#method ") :].strip()
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected doc_a<TAB>doc_b<TAB>score", path=path, line=lineno)
        try:
            rows.append((parts[0], parts[1], float(parts[2])))
        except ValueError:
            raise ParseError(f"bad score {parts[2]!r}", path=path, line=lineno) from None
    return header, rows


__all__ = [
    "METHODS",
    "RelatednessScore",
    "MethodConfig",
    "Scorer",
    "salton_cosine",
    "soft_cosine",
    "mts",
    "matrix_sim_fn",
    "matrix_distance_fn",
    "pairwise_scores",
    "write_scores",
    "read_scores",
]
