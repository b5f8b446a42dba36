import pytest

from fermient.corpus import build_corpus


@pytest.fixture(scope="session")
def corpus():
    """Full reproducible corpus (named states + 200 seeded randoms)."""
    return build_corpus(seed=1, n_random=200)


@pytest.fixture(scope="session")
def corpus_lite(corpus):
    """Named entries plus a thin slice of the randoms, for pricier loops."""
    named = [e for e in corpus if e.kind != "random"]
    randoms = [e for e in corpus if e.kind == "random"]
    return named + randoms[::25]
