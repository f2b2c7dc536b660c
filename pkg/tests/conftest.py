import pytest

from zleig.mx import generate_mx
from zleig.posets import chain_block_poset, validate_poset
from zleig.stochastic import generate_stochastic_mx, parse_dfac

GENERAL_POSETS = {
    "min_first": ({(2, 3), (2, 1)}, 3),
    "empty3": (set(), 3),
    "empty4": (set(), 4),
    "chain12_n3": ({(1, 2)}, 3),
    "chain13_n4": ({(1, 3)}, 4),
    "total5": ({(i, j) for i in range(1, 6) for j in range(i + 1, 6)}, 5),
    "vee_n4": ({(1, 3), (2, 3)}, 4),
}

GENERAL_BLOCKS = [[2], [3], [2, 2], [5], [2, 3]]

STOCHASTIC_DFACS = [[2], [3], [5], [8], [13], [21], [34], [55], [8, 2], [2, 13], [3, 8], [5, 5]]


def build_corpus():
    """The mixed general/stochastic solver corpus (20 matrices, n <= 55)."""
    corpus = []
    for name, (rels, n) in GENERAL_POSETS.items():
        corpus.append((f"poset:{name}", generate_mx(validate_poset(rels, n))))
    for blocks in GENERAL_BLOCKS:
        corpus.append((f"blocks:{blocks}", generate_mx(chain_block_poset(blocks))))
    for dfac in STOCHASTIC_DFACS:
        corpus.append((f"dfac:{dfac}", generate_stochastic_mx(parse_dfac(dfac))))
    assert len(corpus) >= 20
    assert all(mx.n <= 55 for _, mx in corpus)
    return corpus


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()
