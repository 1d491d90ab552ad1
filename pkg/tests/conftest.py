from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from vocabrel.benchmark import write_judgements
from vocabrel.model import serialize_corpus, serialize_vocabulary
from vocabrel.synthdata import SynthConfig, make_benchmark_data

from util import ic_for, make_vocab

settings.register_profile(
    "ci", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture
def ic_fixture():
    """Root with two leaf children; counts 1/2/3 give aggregates 6/2/3."""
    vocab = make_vocab({"r": set(), "c1": {"r"}, "c2": {"r"}})
    table = ic_for(vocab, {"r": 1, "c1": 2, "c2": 3})
    return vocab, table


@pytest.fixture
def chain_vocab():
    return make_vocab({"r": set(), "c": {"r"}, "g": {"c"}})


@pytest.fixture
def diamond_vocab():
    return make_vocab({"r": set(), "a": {"r"}, "b": {"r"}, "g": {"a", "b"}})


@pytest.fixture(scope="session")
def synth_world():
    return make_benchmark_data(SynthConfig(seed=7))


@pytest.fixture(scope="session")
def synth_files(tmp_path_factory, synth_world):
    """The synthetic world serialized to disk for CLI-level tests."""
    vocab, corpus, judgements = synth_world
    root = tmp_path_factory.mktemp("synth")
    paths = {
        "vocab": str(root / "vocab.jsonl"),
        "corpus": str(root / "corpus.jsonl"),
        "judgements": str(root / "judgements.tsv"),
    }
    serialize_vocabulary(vocab, paths["vocab"])
    serialize_corpus(corpus, paths["corpus"])
    write_judgements(judgements, paths["judgements"])
    return paths
