"""Sparse vector representations of documents.

Three representations: the binary indicator vector, the IC-weighted vector
(minor term -> ic(t), major term -> ic(t) * w), and the qualifier-augmented
vector that adds one indicator dimension per (term, qualifier) pair present
in the document.  Vectors are sparse maps; entries exist exactly for the
document's annotated terms (an entry can be 0.0 in the degenerate case of a
term whose IC is 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import EmptyDocumentError, MissingDataError
from .infocontent import ICTable
from .model import Document, QualifierId, TermId

TermVector = dict[TermId, float]


@dataclass(frozen=True)
class QualifiedTermVector:
    """Term weights plus indicator entries for (term, qualifier) pairs."""

    term_part: Mapping[TermId, float]
    qual_part: Mapping[tuple[TermId, QualifierId], float]


def _require_nonempty(doc: Document) -> None:
    if doc.is_empty:
        raise EmptyDocumentError(f"empty document {doc.id!r}")


def binary_vector(doc: Document) -> TermVector:
    """Indicator vector: weight 1 on each annotated term, major status ignored."""
    _require_nonempty(doc)
    return {a.term: 1.0 for a in doc.annotations}


def ic_weighted_vector(doc: Document, ic: ICTable, w: float) -> TermVector:
    """IC weights with major terms scaled by ``w`` (>= 1)."""
    _require_nonempty(doc)
    if w < 1:
        raise ValueError(f"major weight must be >= 1, got {w}")
    table = ic.ic
    vec: TermVector = {}
    for a in doc.annotations:
        if a.term not in table:
            raise MissingDataError(f"no IC value for term {a.term!r} (document {doc.id!r})")
        vec[a.term] = table[a.term] * w if a.is_major else table[a.term]
    return vec


def _major_weighted_vector(doc: Document, w: float) -> TermVector:
    # the "no IC" variant: indicator scaled by w on major terms
    _require_nonempty(doc)
    if w < 1:
        raise ValueError(f"major weight must be >= 1, got {w}")
    return {a.term: (w if a.is_major else 1.0) for a in doc.annotations}


def _qual_indicators(doc: Document) -> dict[tuple[TermId, QualifierId], float]:
    # unweighted indicators; major status does not scale qualifier entries
    return {
        (a.term, q): 1.0
        for a in doc.annotations
        for q in a.qualifiers
    }


def qualified_vector(doc: Document, ic: ICTable, w: float) -> QualifiedTermVector:
    """IC-weighted term part plus an indicator per (term, qualifier) pair."""
    return QualifiedTermVector(
        term_part=ic_weighted_vector(doc, ic, w),
        qual_part=_qual_indicators(doc),
    )


def document_vector(
    doc: Document,
    use_ic: bool = False,
    ic: ICTable | None = None,
    w: float = 1.0,
    qualifiers: bool = False,
) -> TermVector | QualifiedTermVector:
    """Build the representation selected by the method configuration.

    ``use_ic=False`` gives the indicator vector with major terms scaled by
    ``w`` (plain binary when w == 1); ``use_ic=True`` needs an ICTable.
    ``qualifiers=True`` wraps either into a QualifiedTermVector.
    """
    if use_ic:
        if ic is None:
            raise MissingDataError("IC-weighted vectors need an ICTable")
        term_part = ic_weighted_vector(doc, ic, w)
    else:
        term_part = _major_weighted_vector(doc, w)
    if qualifiers:
        return QualifiedTermVector(term_part=term_part, qual_part=_qual_indicators(doc))
    return term_part


__all__ = [
    "TermVector",
    "QualifiedTermVector",
    "binary_vector",
    "ic_weighted_vector",
    "qualified_vector",
    "document_vector",
]
