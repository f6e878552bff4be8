"""パーシステンス図の輸送写像、種別を保つボトルネック距離、シフト最適性を扱うモジュール"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .config import resolve_tolerance
from .errors import DiagramError
from .persistence import KIND_ORDER, ExtendedDiagram, PairKind, PersistencePair
from .smoothing import TransportParams

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShiftVector:
    """単一種別の図に加える平行移動 (dx, dy)"""

    dx: float
    dy: float

    @property
    def magnitude(self) -> float:
        return max(abs(self.dx), abs(self.dy))

    def scaled(self, t: float) -> "ShiftVector":
        return ShiftVector(t * self.dx, t * self.dy)


@dataclass(frozen=True)
class Assignment:
    """マッチングの 1 組。片側が None なら対角線との対応"""

    kind: PairKind
    left: Optional[PersistencePair]
    right: Optional[PersistencePair]
    cost: float


@dataclass(frozen=True)
class Matching:
    assignments: Tuple[Assignment, ...] = ()

    @property
    def cost(self) -> float:
        return max((a.cost for a in self.assignments), default=0.0)

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass(frozen=True)
class BottleneckResult:
    distance: float
    matching: Matching


def shift_vectors(params: TransportParams) -> Dict[PairKind, ShiftVector]:
    """輸送写像が各種別に与える平行移動"""
    eps, tau = params.epsilon, params.tau
    return {
        PairKind.EXT0: ShiftVector(-eps + tau, eps - tau),
        PairKind.ORD0: ShiftVector(-eps + tau, -eps),
        PairKind.REL1: ShiftVector(eps, eps - tau),
        PairKind.EXT1: ShiftVector(eps, -eps),
    }


def _moved(pair: PersistencePair, low: float, high: float, tol: float) -> Optional[PersistencePair]:
    # 対角線上または反対側へ移った点は消える
    if high - low <= tol:
        return None
    return PersistencePair(pair.kind, low, high, pair.low_vertex, pair.high_vertex)


def transport_point(
    pair: PersistencePair, params: TransportParams, tol: Optional[float] = None
) -> Optional[PersistencePair]:
    """1 点を輸送する。消える場合は None

    Ext0 → (a−ε+τ, b+ε−τ)、Ord0 → (a−ε+τ, b−ε)、
    Rel1 → (a+ε, b+ε−τ)、Ext1 → (a+ε, b−ε)。
    """
    tol = resolve_tolerance(tol)
    params.check(tol)
    eps, tau = params.epsilon, params.tau
    a, b = pair.low, pair.high
    if pair.kind is PairKind.EXT0:
        return _moved(pair, (a - eps) + tau, (b + eps) - tau, tol)
    if pair.kind is PairKind.ORD0:
        return _moved(pair, (a - eps) + tau, b - eps, tol)
    if pair.kind is PairKind.REL1:
        return _moved(pair, a + eps, (b + eps) - tau, tol)
    return _moved(pair, a + eps, b - eps, tol)


def transport(
    diagram: ExtendedDiagram, params: TransportParams, tol: Optional[float] = None
) -> ExtendedDiagram:
    """図全体を輸送し、消えた点を除く"""
    moved = (transport_point(pair, params, tol) for pair in diagram)
    return ExtendedDiagram(tuple(p for p in moved if p is not None))


def linf(a: PersistencePair, b: PersistencePair) -> float:
    return max(abs(a.low - b.low), abs(a.high - b.high))


def _perfect_matching(
    left: Sequence[PersistencePair], right: Sequence[PersistencePair], radius: float
) -> Optional[Dict[Tuple[str, int], Tuple[str, int]]]:
    """半径 radius 以下の対応だけで完全マッチングが作れるかを調べる

    左側は左の点と右の点の対角線コピー、右側は右の点と左の点の
    対角線コピー。対角線コピー同士は常に結べる。
    """
    graph = nx.Graph()
    top = [("L", i) for i in range(len(left))] + [("LD", j) for j in range(len(right))]
    bottom = [("R", j) for j in range(len(right))] + [("RD", i) for i in range(len(left))]
    graph.add_nodes_from(top, bipartite=0)
    graph.add_nodes_from(bottom, bipartite=1)
    for i, a in enumerate(left):
        if a.diagonal_distance <= radius:
            graph.add_edge(("L", i), ("RD", i))
        for j, b in enumerate(right):
            if linf(a, b) <= radius:
                graph.add_edge(("L", i), ("R", j))
    for j, b in enumerate(right):
        if b.diagonal_distance <= radius:
            graph.add_edge(("LD", j), ("R", j))
        for i in range(len(left)):
            graph.add_edge(("LD", j), ("RD", i))

    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    if len(matching) // 2 < len(top):
        return None
    return matching


def _kind_bottleneck(
    kind: PairKind, left: List[PersistencePair], right: List[PersistencePair]
) -> Tuple[float, List[Assignment]]:
    if not left and not right:
        return 0.0, []
    candidates = {0.0}
    candidates.update(a.diagonal_distance for a in left)
    candidates.update(b.diagonal_distance for b in right)
    candidates.update(linf(a, b) for a in left for b in right)
    ordered = sorted(candidates)

    # 最大の候補ではすべて対角線に送れるので必ず実行可能
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching(left, right, ordered[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    matching = _perfect_matching(left, right, ordered[lo])
    assert matching is not None

    assignments: List[Assignment] = []
    for i, a in enumerate(left):
        side, j = matching[("L", i)]
        if side == "R":
            assignments.append(Assignment(kind, a, right[j], linf(a, right[j])))
        else:
            assignments.append(Assignment(kind, a, None, a.diagonal_distance))
    for j, b in enumerate(right):
        side, _ = matching[("R", j)]
        if side == "LD":
            assignments.append(Assignment(kind, None, b, b.diagonal_distance))
    return ordered[lo], assignments


def bottleneck(d1: ExtendedDiagram, d2: ExtendedDiagram) -> BottleneckResult:
    """同じ種別の点どうしだけを対応させるボトルネック距離

    種別ごとに、点間の L∞ 距離と対角線距離を候補として二分探索し、
    Hopcroft–Karp 法で完全マッチングの有無を判定する。

    Returns:
        BottleneckResult: 距離と、それを達成するマッチング
    """
    distance = 0.0
    assignments: List[Assignment] = []
    for kind in KIND_ORDER:
        value, chosen = _kind_bottleneck(kind, list(d1.of_kind(kind)), list(d2.of_kind(kind)))
        distance = max(distance, value)
        assignments += chosen
    return BottleneckResult(distance, Matching(tuple(assignments)))


def _single_kind(diagram: ExtendedDiagram) -> Optional[PairKind]:
    kinds = diagram.kinds()
    if len(kinds) > 1:
        raise DiagramError("expected a single-kind diagram, got " + ", ".join(k.value for k in kinds))
    return kinds[0] if kinds else None


def shift_bound(diagram: ExtendedDiagram) -> float:
    """シフトが最適マッチングになる大きさの上限 ½·min(対角距離, 他点との L∞)"""
    _single_kind(diagram)
    points = list(diagram)
    if not points:
        return math.inf
    best = math.inf
    for i, x in enumerate(points):
        nearest = min((linf(x, y) for j, y in enumerate(points) if j != i), default=math.inf)
        best = min(best, x.diagonal_distance, nearest)
    return best / 2


def shift_diagram(
    diagram: ExtendedDiagram, shift: ShiftVector, tol: Optional[float] = None
) -> Tuple[ExtendedDiagram, Matching]:
    """各点を shift だけ平行移動し、移動前後を結ぶマッチング ω も返す

    対角線に達した点は消え、ω では対角線に対応させる。
    """
    tol = resolve_tolerance(tol)
    kind = _single_kind(diagram)
    moved: List[PersistencePair] = []
    assignments: List[Assignment] = []
    for pair in diagram:
        image = _moved(pair, pair.low + shift.dx, pair.high + shift.dy, tol)
        if image is None:
            assignments.append(Assignment(pair.kind, pair, None, pair.diagonal_distance))
        else:
            moved.append(image)
            assignments.append(Assignment(pair.kind, pair, image, linf(pair, image)))
    logger.debug("シフト %s (%s): %d 点中 %d 点が残りました", shift, kind, len(diagram), len(moved))
    return ExtendedDiagram(tuple(moved)), Matching(tuple(assignments))
