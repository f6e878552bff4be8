"""Reeb グラフのデータモデル・検証・頂点分類・帯成分を扱うモジュール"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum, auto
from functools import cached_property
from types import MappingProxyType
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Tuple,
    Union,
)

import networkx as nx
from networkx.utils import UnionFind

from .config import resolve_tolerance
from .errors import InvalidGraphError, ParameterError, UnknownVertexError

logger = logging.getLogger(__name__)

# 帯の要素: ("v", 頂点ID) または ("e", 辺の番号)
Element = Tuple[str, Union[str, int]]


class ReebGraph:
    """関数値付きの有限マルチグラフとして表した Reeb グラフ

    頂点 ID は空白を含まない文字列。辺は順序なしの頂点対で、同じ対を
    複数回与えると多重辺になる。インスタンスは不変として扱う。
    """

    def __init__(
        self,
        values: Optional[Mapping[str, float]] = None,
        edges: Iterable[Tuple[str, str]] = (),
    ) -> None:
        """Reeb グラフを初期化します。

        Args:
            values (Mapping[str, float], optional): 頂点 ID から関数値への対応。
                デフォルトは空。
            edges (Iterable[Tuple[str, str]], optional): 辺の列。多重度は
                繰り返しで表す。デフォルトは空。
        """
        self._values: Mapping[str, float] = MappingProxyType(
            {str(v): float(x) for v, x in (values or {}).items()}
        )
        self._edges: Tuple[Tuple[str, str], ...] = tuple(
            (str(u), str(w)) for u, w in edges
        )

    @property
    def values(self) -> Mapping[str, float]:
        return self._values

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        return self._edges

    @property
    def vertices(self) -> List[str]:
        return list(self._values)

    @property
    def num_vertices(self) -> int:
        return len(self._values)

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def is_empty(self) -> bool:
        return not self._values and not self._edges

    def __contains__(self, vertex: object) -> bool:
        return vertex in self._values

    def value(self, vertex: str) -> float:
        """頂点の関数値を返す

        Raises:
            UnknownVertexError: 頂点が存在しない場合
        """
        try:
            return self._values[vertex]
        except KeyError:
            raise UnknownVertexError(vertex) from None

    def sweep_key(self, vertex: str) -> Tuple[float, str]:
        """掃引順のキー（値、同値なら ID）"""
        return (self.value(vertex), vertex)

    @cached_property
    def _incidence(self) -> Dict[str, Tuple[List[str], List[str]]]:
        # 頂点ごとの (下側の隣接頂点, 上側の隣接頂点)、多重度込み
        incidence: Dict[str, Tuple[List[str], List[str]]] = {
            v: ([], []) for v in self._values
        }
        for _, lower, upper in self.oriented_edges():
            incidence[upper][0].append(lower)
            incidence[lower][1].append(upper)
        return incidence

    def lower_neighbors(self, vertex: str) -> List[str]:
        self.value(vertex)
        return list(self._incidence[vertex][0])

    def upper_neighbors(self, vertex: str) -> List[str]:
        self.value(vertex)
        return list(self._incidence[vertex][1])

    def oriented_edges(self) -> List[Tuple[int, str, str]]:
        """(辺番号, 下端, 上端) の一覧を返す

        端点が存在しない辺と水平な辺は含めない。
        """
        oriented = []
        for index, (u, w) in enumerate(self._edges):
            if u not in self._values or w not in self._values:
                continue
            fu, fw = self._values[u], self._values[w]
            if fu < fw:
                oriented.append((index, u, w))
            elif fw < fu:
                oriented.append((index, w, u))
        return oriented

    @cached_property
    def nx_graph(self) -> nx.MultiGraph:
        """networkx の MultiGraph 表現（辺のキーは辺番号）"""
        graph = nx.MultiGraph()
        for v, x in self._values.items():
            graph.add_node(v, value=x)
        for index, (u, w) in enumerate(self._edges):
            if u in self._values and w in self._values:
                graph.add_edge(u, w, key=index)
        return graph

    def _edge_multiset(self) -> List[Tuple[str, str]]:
        return sorted(tuple(sorted(edge)) for edge in self._edges)  # type: ignore[misc]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReebGraph):
            return NotImplemented
        return (
            dict(self._values) == dict(other._values)
            and self._edge_multiset() == other._edge_multiset()
        )

    def __repr__(self) -> str:
        return f"ReebGraph(vertices={self.num_vertices}, edges={self.num_edges})"


@dataclass(frozen=True)
class ValidationReport:
    """validate の結果。violations が空なら有効"""

    violations: Tuple[str, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations


class VertexTag(Enum):
    """次数の組から決まる頂点のタグ"""

    LOCAL_MIN = auto()  # 下次数 0
    LOCAL_MAX = auto()  # 上次数 0
    UP_FORK = auto()  # 上次数 2 以上
    DOWN_FORK = auto()  # 下次数 2 以上
    REGULAR = auto()  # (1, 1)


MORSE_TYPES = frozenset({(0, 1), (1, 2), (2, 1), (1, 0)})


@dataclass(frozen=True)
class VertexClass:
    """頂点の (下次数, 上次数) と派生タグ"""

    down_degree: int
    up_degree: int

    @property
    def tags(self) -> FrozenSet[VertexTag]:
        tags = set()
        if self.down_degree == 0:
            tags.add(VertexTag.LOCAL_MIN)
        if self.up_degree == 0:
            tags.add(VertexTag.LOCAL_MAX)
        if self.up_degree >= 2:
            tags.add(VertexTag.UP_FORK)
        if self.down_degree >= 2:
            tags.add(VertexTag.DOWN_FORK)
        if (self.down_degree, self.up_degree) == (1, 1):
            tags.add(VertexTag.REGULAR)
        return frozenset(tags)

    @property
    def is_local_min(self) -> bool:
        return self.down_degree == 0

    @property
    def is_local_max(self) -> bool:
        return self.up_degree == 0

    @property
    def is_up_fork(self) -> bool:
        return self.up_degree >= 2

    @property
    def is_down_fork(self) -> bool:
        return self.down_degree >= 2

    @property
    def is_regular(self) -> bool:
        return self.down_degree == 1 and self.up_degree == 1

    @property
    def is_morse(self) -> bool:
        return (self.down_degree, self.up_degree) in MORSE_TYPES


class Genericity(NamedTuple):
    function_generic: bool
    morse_generic: bool


class Betti(NamedTuple):
    b0: int
    b1: int


@dataclass(frozen=True)
class BandPartition:
    """f⁻¹([low, high]) の連結成分への要素の分割"""

    low: float
    high: float
    labels: Mapping[Element, int]
    count: int
    source: ReebGraph = field(repr=False, compare=False)

    def components(self) -> List[List[Element]]:
        """ラベル順に成分の要素リストを返す"""
        grouped: List[List[Element]] = [[] for _ in range(self.count)]
        for element, label in sorted(self.labels.items()):
            grouped[label].append(element)
        return grouped

    def vertices_of(self, label: int) -> List[str]:
        return [str(e[1]) for e in self.components()[label] if e[0] == "v"]


def validate(graph: ReebGraph, tol: Optional[float] = None) -> ValidationReport:
    """Reeb グラフの定義を満たすか検査する

    Args:
        graph (ReebGraph): 検査するグラフ
        tol (float, optional): 水平辺判定の許容誤差。デフォルトは設定値。

    Returns:
        ValidationReport: 違反の一覧（空なら有効）
    """
    tol = resolve_tolerance(tol)
    violations: List[str] = []
    values = graph.values
    for v, x in values.items():
        if not math.isfinite(x):
            violations.append(f"non-finite value at vertex {v}")

    for u, w in graph.edges:
        missing = [end for end in (u, w) if end not in values]
        for end in dict.fromkeys(missing):
            violations.append(f"unknown endpoint {end}")
        if u == w:
            violations.append(f"self-loop at {u}")
        elif not missing and abs(values[u] - values[w]) <= tol:
            violations.append(f"equal adjacent values on edge {u}-{w}")

    touched = {end for edge in graph.edges for end in edge}
    for v in values:
        if v not in touched:
            violations.append(f"isolated vertex {v}")
    return ValidationReport(tuple(violations))


def require_valid(graph: ReebGraph, tol: Optional[float] = None) -> None:
    """無効なグラフなら InvalidGraphError を送出する"""
    report = validate(graph, tol)
    if not report.is_valid:
        raise InvalidGraphError(report)


def classify(graph: ReebGraph, vertex: str) -> VertexClass:
    """頂点の上下次数を多重度込みで数えて分類する"""
    return VertexClass(
        down_degree=len(graph.lower_neighbors(vertex)),
        up_degree=len(graph.upper_neighbors(vertex)),
    )


def genericity(graph: ReebGraph, tol: Optional[float] = None) -> Genericity:
    """関数値の相異性と Morse 型の判定"""
    tol = resolve_tolerance(tol)
    ordered = sorted(graph.values.values())
    function_generic = all(b - a > tol for a, b in zip(ordered, ordered[1:]))
    morse_generic = all(classify(graph, v).is_morse for v in graph.vertices)
    return Genericity(function_generic, morse_generic)


def suppress_regular(graph: ReebGraph) -> ReebGraph:
    """(1, 1) 頂点を取り除き、両側の辺を 1 本につなぐ

    正則頂点を消しても他の頂点の次数は変わらないので、元のグラフで
    正則な頂点をまとめて除き、正則頂点の鎖を 1 本の辺に置き換える。
    """
    regular = {v for v in graph.vertices if classify(graph, v).is_regular}
    if not regular:
        return graph

    values = {v: x for v, x in graph.values.items() if v not in regular}
    edges: List[Tuple[str, str]] = []
    for _, lower, upper in graph.oriented_edges():
        if lower in regular:
            continue
        # 鎖を上へたどる
        while upper in regular:
            upper = graph.upper_neighbors(upper)[0]
        edges.append((lower, upper))
    logger.debug("正則頂点を %d 個除去しました", len(regular))
    return ReebGraph(values, edges)


def betti(graph: ReebGraph) -> Betti:
    """(β0, β1) を返す。β1 はオイラー数から求める"""
    b0 = nx.number_connected_components(graph.nx_graph)
    b1 = graph.nx_graph.number_of_edges() - graph.num_vertices + b0
    return Betti(b0, b1)


def band_components(
    graph: ReebGraph, low: float, high: float, tol: Optional[float] = None
) -> BandPartition:
    """f⁻¹([low, high]) の連結成分を union-find で求める

    帯の要素は値が区間に入る頂点と、値域が区間と交わる辺。辺はその
    端点の値が区間に入るときだけ端点と結合する。区間の端は許容誤差
    込みの閉区間として扱う。

    Args:
        graph (ReebGraph): 対象のグラフ
        low (float): 区間の下端
        high (float): 区間の上端
        tol (float, optional): 許容誤差。デフォルトは設定値。

    Returns:
        BandPartition: 要素から成分ラベルへの対応

    Raises:
        ParameterError: low > high の場合
    """
    tol = resolve_tolerance(tol)
    if low > high + tol:
        raise ParameterError(f"empty band: {low} > {high}")

    values = graph.values

    def inside(vertex: str) -> bool:
        return low - tol <= values[vertex] <= high + tol

    uf: UnionFind = UnionFind()
    for v in values:
        if inside(v):
            uf[("v", v)]
    for index, lower, upper in graph.oriented_edges():
        if values[lower] > high + tol or values[upper] < low - tol:
            continue
        element: Element = ("e", index)
        uf[element]
        for end in (lower, upper):
            if inside(end):
                uf.union(element, ("v", end))

    groups = sorted((sorted(group) for group in uf.to_sets()), key=lambda g: g[0])
    labels = {element: label for label, group in enumerate(groups) for element in group}
    return BandPartition(low, high, MappingProxyType(labels), len(groups), graph)


def band_inclusion(
    graph: ReebGraph,
    inner: BandPartition,
    outer: BandPartition,
    tol: Optional[float] = None,
) -> Dict[int, int]:
    """内側の帯の成分を、それを含む外側の帯の成分へ写す

    Raises:
        ParameterError: 区間が入れ子でない、または別のグラフの分割の場合
    """
    tol = resolve_tolerance(tol)
    if inner.low < outer.low - tol or inner.high > outer.high + tol:
        raise ParameterError(
            f"band [{inner.low}, {inner.high}] is not inside [{outer.low}, {outer.high}]"
        )
    for partition in (inner, outer):
        if partition.source is not graph and partition.source != graph:
            raise ParameterError("band partition was computed on a different graph")

    mapping: Dict[int, int] = {}
    for element, label in inner.labels.items():
        target = outer.labels.get(element)
        if target is None:
            raise ParameterError(f"element {element} missing from the outer band")
        mapping.setdefault(label, target)
    return mapping


def canonical_order(graph: ReebGraph) -> List[str]:
    """(値, 次数, 隣接値の多重集合, ID) の順に頂点を並べる"""

    def key(v: str) -> Tuple[float, Tuple[int, int], Tuple[float, ...], str]:
        lower = graph.lower_neighbors(v)
        upper = graph.upper_neighbors(v)
        neighbours = tuple(sorted(graph.value(u) for u in lower + upper))
        return (graph.value(v), (len(lower), len(upper)), neighbours, v)

    return sorted(graph.vertices, key=key)


def relabel_canonical(graph: ReebGraph, prefix: str = "v") -> ReebGraph:
    """正準順に頂点 ID を prefix0, prefix1, ... へ付け替える"""
    names = {v: f"{prefix}{i}" for i, v in enumerate(canonical_order(graph))}
    values = {names[v]: graph.value(v) for v in names}
    edges = sorted(
        (names[lower], names[upper]) for _, lower, upper in graph.oriented_edges()
    )
    return ReebGraph(values, edges)


def isomorphic(g1: ReebGraph, g2: ReebGraph, tol: Optional[float] = None) -> bool:
    """ID の付け替えを除いて構造が等しいかを判定する"""
    tol = resolve_tolerance(tol)
    if (g1.num_vertices, g1.num_edges) != (g2.num_vertices, g2.num_edges):
        return False
    if any(abs(a - b) > tol for a, b in zip(sorted(g1.values.values()), sorted(g2.values.values()))):
        return False
    return nx.is_isomorphic(
        g1.nx_graph,
        g2.nx_graph,
        node_match=lambda a, b: abs(a["value"] - b["value"]) <= tol,
    )
