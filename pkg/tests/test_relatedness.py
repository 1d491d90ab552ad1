import io
import math
import random

import pytest
from hypothesis import given, strategies as st

from vocabrel.docvectors import document_vector, ic_weighted_vector
from vocabrel.errors import (
    ConfigError,
    EmptyDocumentError,
    NoMajorTermsError,
    NonPositiveQuadraticFormError,
)
from vocabrel.infocontent import ICTable
from vocabrel.model import Document
from vocabrel.relatedness import (
    MethodConfig,
    Scorer,
    matrix_distance_fn,
    matrix_sim_fn,
    mts,
    pairwise_scores,
    read_scores,
    salton_cosine,
    soft_cosine,
    write_scores,
)
from vocabrel.termgraph import SimMatrix

import oracles
from util import dict_sim, make_corpus, make_doc


def identity_matrix(n: int = 0) -> SimMatrix:
    return SimMatrix(kind="g1", lam=1.0, eps=0.5, n=n, entries={})


def sim_matrix(entries: dict, lam: float = 1.0, eps: float = 1e-4) -> SimMatrix:
    keyed = {}
    for (a, b), s in entries.items():
        keyed[(a, b) if a < b else (b, a)] = s
    return SimMatrix(kind="g1", lam=lam, eps=eps, n=0, entries=keyed)


TERM_POOL = [f"t{i}" for i in range(1, 13)]


def test_salton_fixture():
    value = salton_cosine({"t1": 1.0, "t2": 1.0}, {"t1": 1.0, "t3": 1.0}).value
    assert value == pytest.approx(0.5, abs=1e-12)


def test_salton_empty_vector_rejected():
    with pytest.raises(EmptyDocumentError):
        salton_cosine({}, {"t1": 1.0})


def test_soft_fixture():
    matrix = sim_matrix({("t1", "t2"): 0.5})
    assert soft_cosine({"t1": 1.0}, {"t2": 1.0}, matrix).value == pytest.approx(
        0.5, abs=1e-15
    )


def test_soft_with_identity_matrix_is_salton():
    rng = random.Random(3)
    for _ in range(200):
        x = oracles.random_term_vector(rng, TERM_POOL)
        y = oracles.random_term_vector(rng, TERM_POOL)
        assert soft_cosine(x, y, identity_matrix()).value == salton_cosine(x, y).value


def test_soft_guard_raises_not_clamps():
    # an out-of-range off-diagonal entry makes x'Sx negative for a mixed
    # vector; real matrices keep s <= 1 but the guard must not rely on that
    matrix = sim_matrix({("t1", "t2"): 1.5})
    x = {"t1": 1.0, "t2": -1.0}
    with pytest.raises(NonPositiveQuadraticFormError):
        soft_cosine(x, x, matrix)


def test_mts_fixture():
    p_a = make_doc("a", ["t1", "t2"])
    p_b = make_doc("b", ["t1", "t3"])
    sim = dict_sim({("t2", "t3"): 0.4, ("t2", "t1"): 0.1, ("t1", "t3"): 0.2})
    assert mts(p_a, p_b, sim).value == pytest.approx(0.7, abs=1e-15)


def test_mts_fixture_weighted():
    p_a = make_doc("a", ["t1", "t2"], majors=["t1"])
    p_b = make_doc("b", ["t1", "t3"])
    sim = dict_sim({("t2", "t3"): 0.4, ("t2", "t1"): 0.1, ("t1", "t3"): 0.2})
    assert mts(p_a, p_b, sim, w=2.0).value == pytest.approx(0.76, abs=1e-15)


def test_mts_rejects_w_below_one():
    doc = make_doc("a", ["t1"])
    with pytest.raises(ValueError):
        mts(doc, doc, dict_sim({}), w=0.9)


def test_mts_slim_uses_major_terms_only():
    p_a = make_doc("a", ["t1", "t2"], majors=["t1"])
    p_b = make_doc("b", ["t1", "t3"], majors=["t3"])
    sim = dict_sim({("t1", "t3"): 0.2})
    assert mts(p_a, p_b, sim, slim=True).value == pytest.approx(0.2, abs=1e-15)
    with pytest.raises(NoMajorTermsError):
        mts(p_a, make_doc("c", ["t4"]), sim, slim=True)


def test_mts_self_relatedness_is_one():
    doc = make_doc("a", ["t1", "t2", "t3"], majors=["t2"])
    sim = dict_sim({("t1", "t2"): 0.3})
    assert mts(doc, doc, sim).value == 1.0
    assert mts(doc, doc, sim, w=7.0).value == 1.0


def test_mts_superset_never_decreases():
    # adding to P_b a term already in P_a raises that term's best match to 1
    rng = random.Random(11)
    sim_table = {
        (a, b): rng.random() * 0.8
        for i, a in enumerate(TERM_POOL)
        for b in TERM_POOL[i + 1 :]
    }
    sim = dict_sim(sim_table)
    for _ in range(100):
        terms_a = rng.sample(TERM_POOL, 4)
        terms_b = rng.sample(TERM_POOL, 3)
        extra = rng.choice(terms_a)
        if extra in terms_b:
            continue
        p_a = make_doc("a", terms_a)
        p_b = make_doc("b", terms_b)
        p_b_plus = make_doc("b", terms_b + [extra])
        assert mts(p_a, p_b_plus, sim).value >= mts(p_a, p_b, sim).value - 1e-12


@given(st.integers(0, 10_000))
def test_mts_matches_naive_oracle(seed):
    rng = random.Random(seed)
    sim_table = {
        (a, b): rng.random()
        for i, a in enumerate(TERM_POOL)
        for b in TERM_POOL[i + 1 :]
    }
    sim = dict_sim(sim_table)
    terms_a = rng.sample(TERM_POOL, rng.randint(1, 5))
    terms_b = rng.sample(TERM_POOL, rng.randint(1, 5))
    p_a = make_doc("a", terms_a, majors=rng.sample(terms_a, rng.randint(0, len(terms_a))))
    p_b = make_doc("b", terms_b, majors=rng.sample(terms_b, rng.randint(0, len(terms_b))))
    for w in (1.0, 2.0, 16.0):
        expected = oracles.naive_mts(
            [(a.term, a.is_major) for a in p_a.annotations],
            [(b.term, b.is_major) for b in p_b.annotations],
            sim,
            w,
        )
        assert mts(p_a, p_b, sim, w=w).value == pytest.approx(expected, abs=1e-12)


@given(st.integers(0, 10_000))
def test_symmetry_is_bitwise(seed):
    rng = random.Random(seed)
    entries = {
        (a, b): rng.random() * 0.9
        for i, a in enumerate(TERM_POOL)
        for b in TERM_POOL[i + 1 :]
        if rng.random() < 0.4
    }
    matrix = sim_matrix(entries)
    x = oracles.random_term_vector(rng, TERM_POOL)
    y = oracles.random_term_vector(rng, TERM_POOL)
    assert salton_cosine(x, y).value == salton_cosine(y, x).value
    assert soft_cosine(x, y, matrix).value == soft_cosine(y, x, matrix).value
    terms_a = sorted(x)
    terms_b = sorted(y)
    p_a = make_doc("a", terms_a, majors=terms_a[:1])
    p_b = make_doc("b", terms_b, majors=terms_b[:1])
    sim = matrix_sim_fn(matrix)
    assert mts(p_a, p_b, sim, w=3.0).value == mts(p_b, p_a, sim, w=3.0).value


def test_ic_rescaling_leaves_cosine_unchanged(ic_fixture):
    _, table = ic_fixture
    doc_a = make_doc("a", ["r", "c1"], majors=["c1"])
    doc_b = make_doc("b", ["r", "c2"])
    base = salton_cosine(
        ic_weighted_vector(doc_a, table, 2.0), ic_weighted_vector(doc_b, table, 2.0)
    ).value
    for c in (0.1, 3.0, 1e6):
        scaled = ICTable(
            ic={t: v * c for t, v in table.ic.items()},
            aggregate=table.aggregate,
            denominator=table.denominator,
        )
        value = salton_cosine(
            ic_weighted_vector(doc_a, scaled, 2.0), ic_weighted_vector(doc_b, scaled, 2.0)
        ).value
        assert value == pytest.approx(base, abs=1e-12)


def test_salton_qualified_vectors_share_qualifier_dimensions(ic_fixture):
    _, table = ic_fixture
    doc_a = make_doc("a", ["c1"], qualifiers={"c1": ["q1"]})
    doc_b = make_doc("b", ["c1"], qualifiers={"c1": ["q1"]})
    doc_c = make_doc("c", ["c1"], qualifiers={"c1": ["q2"]})
    vec = lambda d: document_vector(d, use_ic=True, ic=table, qualifiers=True)
    same_qual = salton_cosine(vec(doc_a), vec(doc_b)).value
    diff_qual = salton_cosine(vec(doc_a), vec(doc_c)).value
    assert same_qual == pytest.approx(1.0, abs=1e-12)
    assert diff_qual < same_qual


def test_matrix_distance_fn_recovers_distances():
    matrix = sim_matrix({("t1", "t2"): math.exp(-2.0)}, lam=1.0, eps=0.01)
    neg = matrix_distance_fn(matrix)
    assert neg("t1", "t1") == 0.0
    assert neg("t1", "t2") == pytest.approx(-2.0, abs=1e-12)
    # absent pair saturates at the eps horizon -lam*ln(eps)
    assert neg("t1", "t9") == pytest.approx(math.log(0.01), abs=1e-12)


def test_matrix_distance_fn_eps_zero_cutoff():
    matrix = sim_matrix({("t1", "t2"): math.exp(-3.0)}, lam=1.0, eps=0.0)
    neg = matrix_distance_fn(matrix)
    assert neg("t1", "t9") == pytest.approx(-4.0, abs=1e-12)  # longest + 1


def test_method_config_validation():
    MethodConfig("salton", vector="ic", w=2).validate()
    MethodConfig("soft", vector="binary", graph="g1", lam=1.0).validate()
    MethodConfig("mts", graph="dic", lam=2.0, slim=True).validate()
    for bad in (
        MethodConfig("nope"),
        MethodConfig("salton", w=0.5),
        MethodConfig("salton", lam=1.0),
        MethodConfig("salton", graph="g1"),
        MethodConfig("soft", graph="g1"),  # missing lambda
        MethodConfig("soft", graph="g3", lam=1.0),
        MethodConfig("soft", graph="g1", lam=1.0, qualifiers=True),
        MethodConfig("mts", graph="g1", lam=1.0, qualifiers=True),
        MethodConfig("mts", graph="g1", lam=1.0, eps=1.5),
    ):
        with pytest.raises(ConfigError):
            bad.validate()


def test_method_config_tag_marks_inapplicable_fields():
    tag = MethodConfig("salton", vector="ic", w=2).tag()
    assert tag == "method=salton vector=ic qualifiers=false graph=. w=2 lambda=. eps=. slim=."
    raw = MethodConfig("mts", graph="dic", lam=2.0, raw_distance=True)
    assert raw.method_label == "mts-rawdist"
    assert "method=mts-rawdist" in raw.tag()


def test_scorer_reports_document_ids_on_guard_error():
    matrix = sim_matrix({("t1", "t2"): 1.5})
    corpus = make_corpus(make_doc("bad1", ["t1", "t2"]), make_doc("bad2", ["t1"]))
    scorer = Scorer(
        config=MethodConfig("soft", vector="binary", graph="g1", lam=1.0), matrix=matrix
    )
    # force a negative-ish quadratic form via a crafted vector cache
    scorer._vectors["bad1"] = {"t1": 1.0, "t2": -1.0}
    with pytest.raises(NonPositiveQuadraticFormError) as err:
        scorer.score(corpus.documents["bad1"], corpus.documents["bad2"])
    assert "bad1" in str(err.value) and "bad2" in str(err.value)


def test_pairwise_scores_order_and_worker_independence():
    docs = [make_doc(f"d{i}", [f"t{1 + i % 4}", f"t{1 + (i * 2) % 5}"]) for i in range(9)]
    corpus = make_corpus(*docs)
    ids = sorted(corpus.documents)
    pairs = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1 :]]
    scorer = Scorer(config=MethodConfig("salton"))
    single = list(pairwise_scores(corpus, pairs, scorer, workers=1))
    multi = list(pairwise_scores(corpus, pairs, scorer, workers=5))
    assert single == multi
    assert [(a, b) for a, b, _ in single] == pairs


def test_pairwise_scores_collects_errors():
    corpus = make_corpus(make_doc("d1", ["t1"]), Document(id="empty", annotations=()))
    scorer = Scorer(config=MethodConfig("salton"))
    errors: list = []
    results = list(
        pairwise_scores(corpus, [("d1", "empty"), ("d1", "d1")], scorer, errors=errors)
    )
    assert len(results) == 1 and results[0][:2] == ("d1", "d1")
    assert len(errors) == 1 and errors[0][:2] == ("d1", "empty")


def test_scores_round_trip():
    corpus = make_corpus(make_doc("d1", ["t1", "t2"]), make_doc("d2", ["t2"]))
    scorer = Scorer(config=MethodConfig("salton"))
    results = list(pairwise_scores(corpus, [("d1", "d2")], scorer))
    buf = io.StringIO()
    n = write_scores(buf, scorer.config.tag(), results)
    text = buf.getvalue()
    assert n == 1
    assert text.startswith("#method salton ")
    header, rows = read_scores(io.StringIO(text))
    assert header.startswith("salton ")
    assert rows == [("d1", "d2", results[0][2].value)]
