"""ε 平滑化、τ 切り詰め、およびその合成を組合せ的に計算するモジュール"""

import logging
import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Tuple

from .config import resolve_tolerance
from .errors import DiagramMismatchError, ParameterError
from .persistence import ExtendedDiagram, extended_diagram
from .reeb_graph import (
    ReebGraph,
    band_components,
    band_inclusion,
    genericity,
    relabel_canonical,
    require_valid,
    suppress_regular,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransportParams:
    """平滑化幅 ε と切り詰め量 τ の組"""

    epsilon: float
    tau: float = 0.0

    def check(self, tol: Optional[float] = None) -> None:
        """0 ≤ τ ≤ 2ε を満たさなければ ParameterError を送出する"""
        tol = resolve_tolerance(tol)
        if not (math.isfinite(self.epsilon) and math.isfinite(self.tau)):
            raise ParameterError("epsilon and tau must be finite")
        if self.epsilon < -tol:
            raise ParameterError(f"epsilon must be non-negative, got {self.epsilon}")
        if self.tau < -tol:
            raise ParameterError(f"tau must be non-negative, got {self.tau}")
        if self.tau > 2 * self.epsilon + tol:
            raise ParameterError(
                f"tau must not exceed 2*epsilon, got tau={self.tau}, epsilon={self.epsilon}"
            )

    def is_strict(self, tol: Optional[float] = None) -> bool:
        """τ < 2ε が許容誤差を超えて成り立つか"""
        return 2 * self.epsilon - self.tau > resolve_tolerance(tol)

    def scaled(self, t: float) -> "TransportParams":
        return TransportParams(t * self.epsilon, t * self.tau)


@dataclass(frozen=True)
class ReachTable:
    """各頂点から単調な道で到達できる最大値 up と最小値 down"""

    up: Mapping[str, float]
    down: Mapping[str, float]


def reach_table(graph: ReebGraph) -> ReachTable:
    """動的計画法で up_reach と down_reach を求める"""
    order = sorted(graph.vertices, key=graph.sweep_key)
    up: Dict[str, float] = {}
    for v in reversed(order):
        up[v] = max((up[u] for u in graph.upper_neighbors(v)), default=graph.value(v))
    down: Dict[str, float] = {}
    for v in order:
        down[v] = min((down[u] for u in graph.lower_neighbors(v)), default=graph.value(v))
    return ReachTable(MappingProxyType(up), MappingProxyType(down))


def _dedupe_levels(levels: List[float], tol: float) -> List[float]:
    kept: List[float] = []
    for level in sorted(levels):
        if not kept or level - kept[-1] > tol:
            kept.append(level)
    return kept


def _attach(
    lower: List[str], upper: List[str]
) -> List[Tuple[str, str]]:
    if len(lower) <= 1 or len(upper) <= 1:
        return [(a, b) for a in lower for b in upper]
    logger.warning(
        "隣接サンプル間の成分が両側で複数あります (%d, %d)。全域木で接続します",
        len(lower),
        len(upper),
    )
    return [(lower[0], b) for b in upper] + [(a, upper[0]) for a in lower[1:]]


def smooth(graph: ReebGraph, epsilon: float, tol: Optional[float] = None) -> ReebGraph:
    """ε 平滑化 S_ε を区間窓の掃引で計算する

    臨界値 a_i から候補レベル {a_i ± ε} を作り、隣接する候補の中点を
    挟んだ各サンプル b で f⁻¹([b−ε, b+ε]) の成分を節点とする。隣接する
    サンプル b < b' の節点は f⁻¹([b−ε, b'+ε]) の同じ成分に含まれるとき
    辺で結ぶ。最後に正則頂点を除き、頂点 ID を正準順に付け直す。

    Args:
        graph (ReebGraph): 有効なグラフ
        epsilon (float): 平滑化幅（0 以上）
        tol (float, optional): 許容誤差。デフォルトは設定値。

    Returns:
        ReebGraph: 平滑化したグラフ

    Raises:
        ParameterError: epsilon が負の場合
        InvalidGraphError: グラフが無効な場合
    """
    tol = resolve_tolerance(tol)
    require_valid(graph, tol)
    if not math.isfinite(epsilon) or epsilon < -tol:
        raise ParameterError(f"epsilon must be non-negative, got {epsilon}")
    if epsilon <= tol:
        return suppress_regular(graph)
    if graph.is_empty():
        return ReebGraph()

    levels = _dedupe_levels(
        [x + shift for x in graph.values.values() for shift in (-epsilon, epsilon)], tol
    )
    samples: List[float] = []
    for b, following in zip(levels, levels[1:]):
        samples += [b, (b + following) / 2]
    samples.append(levels[-1])

    partitions = [band_components(graph, s - epsilon, s + epsilon, tol) for s in samples]
    values: Dict[str, float] = {}
    for k, (s, partition) in enumerate(zip(samples, partitions)):
        for label in range(partition.count):
            values[f"s{k}.{label}"] = s

    edges: List[Tuple[str, str]] = []
    for k in range(len(samples) - 1):
        union = band_components(graph, samples[k] - epsilon, samples[k + 1] + epsilon, tol)
        below = band_inclusion(graph, partitions[k], union, tol)
        above = band_inclusion(graph, partitions[k + 1], union, tol)
        for target in range(union.count):
            lower = [f"s{k}.{a}" for a, t in sorted(below.items()) if t == target]
            upper = [f"s{k + 1}.{b}" for b, t in sorted(above.items()) if t == target]
            edges += _attach(lower, upper)

    logger.debug("平滑化: サンプル %d 個、節点 %d 個", len(samples), len(values))
    return relabel_canonical(suppress_regular(ReebGraph(values, edges)))


def truncate(graph: ReebGraph, tau: float, tol: Optional[float] = None) -> ReebGraph:
    """高さ τ の単調な上り道と下り道を両方持つ点だけを残す

    辺 (u, w)（u が下端）上の高さ h の点は
    down_reach(u) + τ ≤ h ≤ up_reach(w) − τ のとき残る。切り口には
    辺番号と値から作った ID の頂点を置く。全体が消えれば空グラフを返す。

    Args:
        graph (ReebGraph): 有効なグラフ
        tau (float): 切り詰め量（0 以上）
        tol (float, optional): 許容誤差。デフォルトは設定値。

    Returns:
        ReebGraph: 切り詰めたグラフ（正則頂点なし）
    """
    tol = resolve_tolerance(tol)
    require_valid(graph, tol)
    if not math.isfinite(tau) or tau < -tol:
        raise ParameterError(f"tau must be non-negative, got {tau}")
    if tau <= tol:
        return suppress_regular(graph)

    reach = reach_table(graph)
    values: Dict[str, float] = {}
    edges: List[Tuple[str, str]] = []
    for index, lower, upper in graph.oriented_edges():
        start = reach.down[lower] + tau
        stop = reach.up[upper] - tau
        if start <= graph.value(lower) + tol:
            bottom, bottom_value = lower, graph.value(lower)
        else:
            bottom, bottom_value = f"e{index}@{start!r}", start
        if stop >= graph.value(upper) - tol:
            top, top_value = upper, graph.value(upper)
        else:
            top, top_value = f"e{index}@{stop!r}", stop
        if top_value - bottom_value <= tol:
            continue
        values[bottom] = bottom_value
        values[top] = top_value
        edges.append((bottom, top))

    logger.debug("切り詰め: 辺 %d 本中 %d 本が残りました", graph.num_edges, len(edges))
    return suppress_regular(ReebGraph(values, edges))


def truncated_smooth(
    graph: ReebGraph, params: TransportParams, tol: Optional[float] = None
) -> ReebGraph:
    """切り詰め付き平滑化 T^τ S_ε"""
    tol = resolve_tolerance(tol)
    params.check(tol)
    if params.epsilon <= tol and params.tau <= tol:
        require_valid(graph, tol)
        return suppress_regular(graph)
    smoothed = smooth(graph, params.epsilon, tol)
    return relabel_canonical(truncate(smoothed, params.tau, tol))


def predict_critical_values(
    diagram: ExtendedDiagram, params: TransportParams, tol: Optional[float] = None
) -> List[float]:
    """輸送後も残るペアの座標を集め、S_ε^τ の臨界値を予測する"""
    from .transport import transport

    moved = transport(diagram, params, tol)
    return sorted(x for pair in moved for x in (pair.low, pair.high))


def genericity_guard(
    graph: ReebGraph, epsilon: float, tol: Optional[float] = None
) -> List[Tuple[float, float]]:
    """|a_i − a_j| = 2ε となる臨界値の組を列挙する（空なら問題なし）"""
    tol = resolve_tolerance(tol)
    ordered = sorted(graph.values.values())
    return [
        (a, b)
        for i, a in enumerate(ordered)
        for b in ordered[i + 1 :]
        if abs((b - a) - 2 * epsilon) <= tol
    ]


def level_point_count(graph: ReebGraph, level: float, tol: Optional[float] = None) -> int:
    """値 level にある点の数（その値の頂点と、level を真に横切る辺）"""
    tol = resolve_tolerance(tol)
    at_level = sum(1 for x in graph.values.values() if abs(x - level) <= tol)
    crossing = sum(
        1
        for _, lower, upper in graph.oriented_edges()
        if graph.value(lower) < level - tol and graph.value(upper) > level + tol
    )
    return at_level + crossing


def vertex_correspondence(
    graph: ReebGraph, epsilon: float, tol: Optional[float] = None
) -> Dict[str, str]:
    """平滑化で生き残る臨界頂点と smooth(G, ε) の頂点の対応を返す

    図の由来頂点を輸送先の座標で smooth(G, ε) の頂点に対応づける。
    生成的なグラフでガードが通る ε のときだけ全単射になる。

    Raises:
        ParameterError: グラフが生成的でない、またはガードが通らない場合
        DiagramMismatchError: 予測した値の頂点が見つからない場合
    """
    from .transport import transport_point

    tol = resolve_tolerance(tol)
    if not all(genericity(graph, tol)):
        raise ParameterError("vertex correspondence needs a generic graph")
    if genericity_guard(graph, epsilon, tol):
        raise ParameterError(f"genericity guard fails at epsilon={epsilon}")

    smoothed = smooth(graph, epsilon, tol)
    by_value = sorted((x, v) for v, x in smoothed.values.items())

    def locate(value: float) -> str:
        for x, v in by_value:
            if abs(x - value) <= tol:
                return v
        raise DiagramMismatchError(None, f"no vertex of the smoothed graph at {value!r}")

    params = TransportParams(epsilon, 0.0)
    mapping: Dict[str, str] = {}
    for pair in extended_diagram(graph, tol):
        moved = transport_point(pair, params, tol)
        if moved is None:
            continue
        for source, target in ((pair.low_vertex, moved.low), (pair.high_vertex, moved.high)):
            if source is not None:
                mapping[source] = locate(target)
    return mapping
