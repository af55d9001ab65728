import numpy as np
import pytest

from ncmatch.graphs import HyperGraph
from ncmatch.samplers import word_sample_from_words

# the two-word instance used throughout: words "abaca" / "bbaca" as ints
FIG_WORDS = ((1, 2, 1, 3, 1), (2, 2, 1, 3, 1))
FIG_EDGES = [
    (1, 3), (1, 5), (2, 1), (2, 2), (3, 3), (3, 5), (4, 4), (5, 3), (5, 5),
]


@pytest.fixture
def fig_graph() -> HyperGraph:
    return word_sample_from_words(FIG_WORDS, k=3).graph


def make_graph(dims, edges) -> HyperGraph:
    return HyperGraph.from_edges(dims, np.asarray(edges, dtype=np.int64).reshape(-1, len(dims)))
