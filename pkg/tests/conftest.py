import pytest

from symlat import TripleStore, build_store, make_synthetic


@pytest.fixture
def tiny_store() -> TripleStore:
    """Twelve entries on five entities, two of them diagonal."""
    triples = [
        (0, 1, 0.5), (0, 2, 0.1), (0, 3, 0.9), (0, 4, 0.2),
        (1, 2, 0.7), (1, 3, 0.3), (1, 4, 0.8),
        (2, 3, 0.4), (2, 4, 0.6),
        (3, 4, 1.0), (0, 0, 0.25), (2, 2, 0.75),
    ]
    return build_store(triples, n=5)


@pytest.fixture
def small_synthetic():
    """Noise-free rank-2 store on 40 entities, plus its exact factors."""
    return make_synthetic(n=40, true_rank=2, density=0.6, noise=0.0, seed=11)
