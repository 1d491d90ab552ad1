"""Relatedness between documents indexed with a hierarchical controlled vocabulary.

Three measure families (Salton's cosine, soft cosine, maximum term
similarities) over three vector representations (binary, IC/major-weighted,
qualifier-augmented), plus a benchmark harness (Cliff's delta and an
MCC classification test) for comparing their accuracy.
"""

__version__ = "0.1.0"
