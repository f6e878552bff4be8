"""Reeb グラフの拡張パーシステンス図を計算するモジュール

組合せ的なペアリング規則による高速な計算と、拡張フィルトレーションの
境界行列を GF(2) 上で簡約するオラクルの 2 通りを提供する。
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from .config import resolve_tolerance
from .errors import DiagramError, NotADownForkError, PersistenceDivergenceError
from .reeb_graph import ReebGraph, classify, require_valid

logger = logging.getLogger(__name__)


class PairKind(Enum):
    """拡張パーシステンス図の 4 つの部分図"""

    EXT0 = "ext0"  # 成分の (最小, 最大)
    ORD0 = "ord0"  # (極小, 通常の下向き分岐)
    REL1 = "rel1"  # (通常の上向き分岐, 極大)
    EXT1 = "ext1"  # (本質的な上向き分岐, 本質的な下向き分岐)


KIND_ORDER: Tuple[PairKind, ...] = (
    PairKind.EXT0,
    PairKind.ORD0,
    PairKind.REL1,
    PairKind.EXT1,
)


@dataclass(frozen=True)
class PersistencePair:
    """種別付きのペア (low, high)。low < high を常に満たす"""

    kind: PairKind
    low: float
    high: float
    low_vertex: Optional[str] = field(default=None, compare=False)
    high_vertex: Optional[str] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.low) and math.isfinite(self.high)):
            raise DiagramError("persistence pair coordinates must be finite")
        if not self.low < self.high:
            raise DiagramError(
                f"{self.kind.value} pair needs low < high, got ({self.low}, {self.high})"
            )

    @property
    def persistence(self) -> float:
        return self.high - self.low

    @property
    def diagonal_distance(self) -> float:
        """対角線までの L∞ 距離"""
        return (self.high - self.low) / 2


def _pair_key(pair: PersistencePair) -> Tuple[int, float, float]:
    return (KIND_ORDER.index(pair.kind), pair.low, pair.high)


@dataclass(frozen=True)
class ExtendedDiagram:
    """PersistencePair の多重集合。種別順・座標順に正規化して保持する"""

    pairs: Tuple[PersistencePair, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs, key=_pair_key)))

    @classmethod
    def from_tuples(
        cls, items: Iterable[Tuple[Union[PairKind, str], float, float]]
    ) -> "ExtendedDiagram":
        """(種別, low, high) の列から図を作る

        Args:
            items (Iterable[Tuple[PairKind | str, float, float]]): 種別は
                PairKind か "ext0" などの文字列。

        Returns:
            ExtendedDiagram: 作成した図
        """
        return cls(
            tuple(
                PersistencePair(PairKind(kind), float(low), float(high))
                for kind, low, high in items
            )
        )

    def __iter__(self) -> Iterator[PersistencePair]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def of_kind(self, kind: PairKind) -> "ExtendedDiagram":
        return ExtendedDiagram(tuple(p for p in self.pairs if p.kind is kind))

    def points(self, kind: PairKind) -> List[Tuple[float, float]]:
        return [(p.low, p.high) for p in self.pairs if p.kind is kind]

    def counts(self) -> Dict[PairKind, int]:
        return {kind: sum(1 for p in self.pairs if p.kind is kind) for kind in KIND_ORDER}

    def kinds(self) -> List[PairKind]:
        return [kind for kind in KIND_ORDER if any(p.kind is kind for p in self.pairs)]


def diagram_equal(
    d1: ExtendedDiagram, d2: ExtendedDiagram, tol: Optional[float] = None
) -> bool:
    """種別ごとに、各座標の差が tol 以下となる 1 対 1 対応があるかを判定する

    まずソート順で対応させ、合わなければ許容誤差内の点同士を結んだ
    二部グラフの完全マッチングを探す。
    """
    tol = resolve_tolerance(tol)
    for kind in KIND_ORDER:
        left = d1.points(kind)
        right = d2.points(kind)
        if len(left) != len(right):
            return False
        if not all(_close(a, b, tol) for a, b in zip(left, right)):
            if not _matched_within(left, right, tol):
                return False
    return True


def _close(a: Tuple[float, float], b: Tuple[float, float], tol: float) -> bool:
    return abs(a[0] - b[0]) <= tol and abs(a[1] - b[1]) <= tol


def _matched_within(
    left: List[Tuple[float, float]], right: List[Tuple[float, float]], tol: float
) -> bool:
    graph = nx.Graph()
    top = [("L", i) for i in range(len(left))]
    graph.add_nodes_from(top, bipartite=0)
    graph.add_nodes_from((("R", j) for j in range(len(right))), bipartite=1)
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            if _close(a, b, tol):
                graph.add_edge(("L", i), ("R", j))
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    return len(matching) // 2 == len(left)


def total_persistence(diagram: ExtendedDiagram, kind: Optional[PairKind] = None) -> float:
    """high − low の総和（kind を指定するとその部分図のみ）"""
    return sum(p.persistence for p in diagram if kind is None or p.kind is kind)


# 組合せ的ペアリング


def _ext0_pairs(graph: ReebGraph) -> List[PersistencePair]:
    pairs = []
    for component in nx.connected_components(graph.nx_graph):
        low = min(component, key=graph.sweep_key)
        high = max(component, key=graph.sweep_key)
        pairs.append(
            PersistencePair(PairKind.EXT0, graph.value(low), graph.value(high), low, high)
        )
    return pairs


def _merge_sweep(graph: ReebGraph, ascending: bool) -> List[PersistencePair]:
    """部分レベル集合（または優レベル集合）の成分の併合を追い、エルダー規則でペアを作る

    上昇掃引では下向き分岐が若い成分の最小値と組になり Ord0 を、
    下降掃引では上向き分岐が若い成分の最大値と組になり Rel1 を与える。
    """
    order = sorted(graph.vertices, key=graph.sweep_key, reverse=not ascending)
    rank = {v: i for i, v in enumerate(order)}
    uf: UnionFind = UnionFind()
    oldest: Dict[str, str] = {}
    pairs = []
    for v in order:
        uf[v]
        neighbours = graph.lower_neighbors(v) if ascending else graph.upper_neighbors(v)
        roots = sorted({uf[u] for u in neighbours}, key=lambda r: rank[oldest[r]])
        elder = oldest[roots[0]] if roots else v
        for root in roots[1:]:
            young = oldest[root]
            if ascending:
                pair = PersistencePair(
                    PairKind.ORD0, graph.value(young), graph.value(v), young, v
                )
            else:
                pair = PersistencePair(
                    PairKind.REL1, graph.value(v), graph.value(young), v, young
                )
            pairs.append(pair)
        uf.union(v, *roots)
        oldest[uf[v]] = elder
    return pairs


def ext1_partners(graph: ReebGraph, downfork: str) -> List[Tuple[str, float]]:
    """本質的な下向き分岐の Ext1 の相手（上向き分岐）を求める

    開部分レベル集合 f⁻¹((−∞, f(v))) の上で、辺の重みを下端の値とした
    最大全域森を作り、下側の枝どうしの最大ボトルネック値を求める。
    枝が 3 本以上ある場合は、枝を頂点とするボトルネック値の完全グラフの
    最大全域森の各辺が 1 つずつ Ext1 ペアを与える。

    Args:
        graph (ReebGraph): 有効なグラフ
        downfork (str): 下向き分岐の頂点 ID

    Returns:
        List[Tuple[str, float]]: (相手の頂点 ID, 値) の列。値の降順。
            通常の分岐なら空。

    Raises:
        NotADownForkError: 頂点が下向き分岐でない場合
    """
    if not classify(graph, downfork).is_down_fork:
        raise NotADownForkError(f"{downfork} is not a down fork")

    order = sorted(graph.vertices, key=graph.sweep_key)
    rank = {v: i for i, v in enumerate(order)}
    top = rank[downfork]

    sublevel = nx.Graph()
    sublevel.add_nodes_from(v for v in order if rank[v] < top)
    for _, lower, upper in graph.oriented_edges():
        if rank[upper] < top:
            sublevel.add_edge(lower, upper, weight=rank[lower])
    forest = nx.maximum_spanning_tree(sublevel, weight="weight")
    tree_of = {v: i for i, tree in enumerate(nx.connected_components(forest)) for v in tree}

    def bottleneck(a: str, b: str) -> Optional[int]:
        if a == b:
            return rank[a]
        if tree_of[a] != tree_of[b]:
            return None
        path = nx.shortest_path(forest, a, b)
        return min(forest[x][y]["weight"] for x, y in zip(path, path[1:]))

    branches = graph.lower_neighbors(downfork)
    clique = nx.Graph()
    clique.add_nodes_from(range(len(branches)))
    for i in range(len(branches)):
        for j in range(i + 1, len(branches)):
            weight = bottleneck(branches[i], branches[j])
            if weight is not None:
                clique.add_edge(i, j, weight=weight)

    spanning = nx.maximum_spanning_tree(clique, weight="weight")
    partners = sorted(
        (order[d["weight"]] for _, _, d in spanning.edges(data=True)),
        key=lambda v: rank[v],
        reverse=True,
    )
    return [(v, graph.value(v)) for v in partners]


def ext1_partner(graph: ReebGraph, downfork: str) -> Optional[float]:
    """下向き分岐の Ext1 相手の値。通常の分岐なら None"""
    partners = ext1_partners(graph, downfork)
    return partners[0][1] if partners else None


def extended_diagram(
    graph: ReebGraph, tol: Optional[float] = None, verify: bool = False
) -> ExtendedDiagram:
    """組合せ的ペアリング規則で拡張パーシステンス図を計算する

    Args:
        graph (ReebGraph): 有効なグラフ
        tol (float, optional): 検証に使う許容誤差。デフォルトは設定値。
        verify (bool, optional): True なら行列簡約オラクルと照合する。
            デフォルトは False。

    Returns:
        ExtendedDiagram: 計算した図

    Raises:
        InvalidGraphError: グラフが無効な場合
        PersistenceDivergenceError: verify=True でオラクルと一致しない場合
    """
    require_valid(graph, tol)
    pairs = _ext0_pairs(graph)
    pairs += _merge_sweep(graph, ascending=True)
    pairs += _merge_sweep(graph, ascending=False)
    for v in sorted(graph.vertices, key=graph.sweep_key):
        if not classify(graph, v).is_down_fork:
            continue
        for partner, value in ext1_partners(graph, v):
            pairs.append(PersistencePair(PairKind.EXT1, value, graph.value(v), partner, v))
    diagram = ExtendedDiagram(tuple(pairs))

    if verify:
        oracle = extended_diagram_oracle(graph, tol)
        if diagram != oracle:
            logger.warning("組合せ的ペアリングがオラクルと一致しません: %s", graph)
            raise PersistenceDivergenceError(
                "combinatorial pairing disagrees with matrix reduction"
            )
    return diagram


# 行列簡約オラクル


@dataclass(frozen=True)
class _Cell:
    tag: str  # "cone", "vertex", "edge", "cone_edge", "cone_triangle"
    value: float
    vertex: Optional[str]


def extended_diagram_oracle(graph: ReebGraph, tol: Optional[float] = None) -> ExtendedDiagram:
    """拡張フィルトレーションの境界行列を GF(2) 上で簡約して図を求める

    錐頂点 w を最初に置き、上昇パスで頂点とその下側の辺を、下降パスで
    錐辺 w*v と v を下端とする辺の錐三角形 w*e を加える。
    """
    require_valid(graph, tol)
    order = sorted(graph.vertices, key=graph.sweep_key)
    lower_edges: Dict[str, List[Tuple[int, str]]] = {v: [] for v in order}
    upper_edges: Dict[str, List[Tuple[int, str]]] = {v: [] for v in order}
    for index, lower, upper in graph.oriented_edges():
        lower_edges[upper].append((index, lower))
        upper_edges[lower].append((index, upper))

    cells: List[_Cell] = [_Cell("cone", -math.inf, None)]
    boundaries: List[List[int]] = [[]]
    vertex_cell: Dict[str, int] = {}
    edge_cell: Dict[int, int] = {}
    cone_edge_cell: Dict[str, int] = {}

    def add(cell: _Cell, boundary: List[int]) -> int:
        cells.append(cell)
        boundaries.append(boundary)
        return len(cells) - 1

    # 上昇パス
    for v in order:
        vertex_cell[v] = add(_Cell("vertex", graph.value(v), v), [])
        for index, lower in lower_edges[v]:
            edge_cell[index] = add(
                _Cell("edge", graph.value(v), v), [vertex_cell[lower], vertex_cell[v]]
            )
    # 下降パス（錐）
    for v in reversed(order):
        cone_edge_cell[v] = add(_Cell("cone_edge", graph.value(v), v), [0, vertex_cell[v]])
        for index, upper in upper_edges[v]:
            add(
                _Cell("cone_triangle", graph.value(v), v),
                [edge_cell[index], cone_edge_cell[v], cone_edge_cell[upper]],
            )

    size = len(cells)
    matrix = np.zeros((size, size), dtype=np.uint8, order="F")
    for column, rows in enumerate(boundaries):
        matrix[rows, column] = 1

    pivot_column: Dict[int, int] = {}
    pairs: List[PersistencePair] = []
    for column in range(size):
        reduced = matrix[:, column]
        nonzero = np.flatnonzero(reduced)
        while nonzero.size and int(nonzero[-1]) in pivot_column:
            reduced ^= matrix[:, pivot_column[int(nonzero[-1])]]
            nonzero = np.flatnonzero(reduced)
        if not nonzero.size:
            continue
        birth = int(nonzero[-1])
        pivot_column[birth] = column
        pair = _classify_cells(cells[birth], cells[column])
        if pair is not None:
            pairs.append(pair)
    return ExtendedDiagram(tuple(pairs))


def _classify_cells(birth: _Cell, death: _Cell) -> Optional[PersistencePair]:
    if birth.value == death.value:
        return None
    if birth.tag == "vertex" and death.tag == "edge":
        kind = PairKind.ORD0
    elif birth.tag == "vertex" and death.tag == "cone_edge":
        kind = PairKind.EXT0
    elif birth.tag == "edge" and death.tag == "cone_triangle":
        return PersistencePair(PairKind.EXT1, death.value, birth.value, death.vertex, birth.vertex)
    elif birth.tag == "cone_edge" and death.tag == "cone_triangle":
        return PersistencePair(PairKind.REL1, death.value, birth.value, death.vertex, birth.vertex)
    else:
        raise PersistenceDivergenceError(f"unexpected pairing {birth.tag} -> {death.tag}")
    return PersistencePair(kind, birth.value, death.value, birth.vertex, death.vertex)
