import random
from typing import Dict, List, Tuple

import pytest

from reeb_vineyard import ReebGraph, genericity


def edge_graph(low: float = 0.0, high: float = 1.0) -> ReebGraph:
    return ReebGraph({"v1": low, "v2": high}, [("v1", "v2")])


def loop_graph() -> ReebGraph:
    return ReebGraph(
        {"a": 0, "b": 1, "c": 3, "d": 4},
        [("a", "b"), ("b", "c"), ("b", "c"), ("c", "d")],
    )


def branch_graph() -> ReebGraph:
    return ReebGraph(
        {"m0": 0, "m2": 2, "f3": 3, "top": 5},
        [("m0", "f3"), ("m2", "f3"), ("f3", "top")],
    )


def nested_graph() -> ReebGraph:
    return ReebGraph(
        {"n0": 0, "n1": 1, "n2": 2, "n3": 3, "n4": 4, "n5": 5},
        [
            ("n0", "n1"),
            ("n1", "n2"),
            ("n2", "n3"),
            ("n2", "n3"),
            ("n3", "n4"),
            ("n1", "n4"),
            ("n4", "n5"),
        ],
    )


@pytest.fixture
def edge() -> ReebGraph:
    return edge_graph()


@pytest.fixture
def g2() -> ReebGraph:
    return loop_graph()


@pytest.fixture
def g4() -> ReebGraph:
    return branch_graph()


@pytest.fixture
def g5() -> ReebGraph:
    return nested_graph()


def _split(
    values: Dict[str, float],
    edges: List[Tuple[str, str]],
    rng: random.Random,
    name: str,
    index: int,
    low_bound: float = -float("inf"),
) -> str:
    """辺 index を内部の点で 2 本に分け、新しい頂点 ID を返す"""
    u, w = edges.pop(index)
    if values[u] > values[w]:
        u, w = w, u
    start = max(values[u], low_bound)
    values[name] = rng.uniform(start, values[w])
    edges += [(u, name), (name, w)]
    return name


def random_morse_graph(rng: random.Random, max_vertices: int = 12) -> ReebGraph:
    """値が [0, 10] にある連結で生成的な Morse 型の Reeb グラフ

    1 本の辺から始め、葉の追加（新しい極小か極大）と弦の追加（ループ）を
    繰り返す。どちらの操作も頂点を 2 個増やす。
    """
    while True:
        values = {"p0": rng.uniform(0, 3), "p1": rng.uniform(7, 10)}
        edges = [("p0", "p1")]
        counter = 2
        while len(values) + 2 <= max_vertices and rng.random() < 0.8:
            if rng.random() < 0.5:
                joint = _split(values, edges, rng, f"p{counter}", rng.randrange(len(edges)))
                leaf = f"p{counter + 1}"
                if rng.random() < 0.5:
                    values[leaf] = rng.uniform(0, values[joint])
                else:
                    values[leaf] = rng.uniform(values[joint], 10)
                edges.append((joint, leaf))
            else:
                first = _split(values, edges, rng, f"p{counter}", rng.randrange(len(edges)))
                above = [
                    i for i, (u, w) in enumerate(edges) if max(values[u], values[w]) > values[first]
                ]
                second = _split(
                    values, edges, rng, f"p{counter + 1}", rng.choice(above), values[first]
                )
                edges.append((first, second))
            counter += 2
        graph = ReebGraph(values, edges)
        if all(genericity(graph, 1e-6)):
            return graph


def random_multigraph(rng: random.Random, max_vertices: int = 10) -> ReebGraph:
    """次数に制限のない小さな Reeb グラフ（非連結もありうる、値は相異なる整数）"""
    n = rng.randint(2, max_vertices)
    names = [f"q{i}" for i in range(n)]
    values = dict(zip(names, map(float, rng.sample(range(3 * n), n))))
    edges: List[Tuple[str, str]] = []
    for _ in range(rng.randint(1, 2 * n)):
        u, w = rng.sample(names, 2)
        edges.append((u, w))
    touched = {end for e in edges for end in e}
    for v in names:
        if v not in touched:
            edges.append((v, rng.choice([u for u in names if u != v])))
    return ReebGraph(values, edges)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)
