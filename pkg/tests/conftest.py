# Copyright 2026 qfern contributors
#
# Redistribution and use in source and binary forms, with or without
# modification, are permitted provided that the following conditions are met:
#
# 1. Redistributions of source code must retain the above copyright notice, this
# list of conditions and the following disclaimer.
#
# 2. Redistributions in binary form must reproduce the above copyright notice,
# this list of conditions and the following disclaimer in the documentation
# and/or other materials provided with the distribution.
#
# 3. Neither the name of the copyright holder nor the names of its contributors
# may be used to endorse or promote products derived from this software without
# specific prior written permission.
#
# THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
# AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
# IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE ARE
# DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE LIABLE
# FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR CONSEQUENTIAL
# DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF SUBSTITUTE GOODS OR
# SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS INTERRUPTION) HOWEVER
# CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN CONTRACT, STRICT LIABILITY,
# OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE) ARISING IN ANY WAY OUT OF THE USE
# OF THIS SOFTWARE, EVEN IF ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.

import random
from typing import Callable

import networkx as nx
import numpy as np
import pytest

from qfern.core import WeightedGraph

GraphFactory = Callable[..., WeightedGraph]


@pytest.fixture(autouse=True)
def set_random_seed():
    random.seed(42)
    yield


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def random_connected(rng: np.random.Generator) -> GraphFactory:
    """Factory for connected G(n, p) graphs, optionally with weights in [0.5, 1.5)."""

    def factory(n: int, p: float = 0.4, weighted: bool = False) -> WeightedGraph:
        while True:
            graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2**31)))
            if nx.is_connected(graph):
                break
        if weighted:
            for u, v in graph.edges():
                graph[u][v]["weight"] = float(rng.uniform(0.5, 1.5))
        return WeightedGraph.from_networkx(graph)

    return factory


@pytest.fixture
def k2() -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.complete_graph(2))


@pytest.fixture
def p3() -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.path_graph(3))


@pytest.fixture
def barbell4() -> WeightedGraph:
    """Two K₄ joined by the bridge (3, 4)."""
    return WeightedGraph.from_networkx(nx.barbell_graph(4, 0))


@pytest.fixture
def barbell5() -> WeightedGraph:
    return WeightedGraph.from_networkx(nx.barbell_graph(5, 0))
