"""ヴィンヤードのパラメータ復元・許容性判定・実現・補間を行うモジュール"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .config import get_verify_factor, resolve_tolerance
from .errors import DiagramMismatchError, NotAdmissibleError, ParameterError
from .persistence import ExtendedDiagram, PairKind, diagram_equal, extended_diagram
from .reeb_graph import ReebGraph
from .smoothing import TransportParams, truncated_smooth
from .transport import transport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Vineyard:
    """図の列 D_0 … D_N と、任意で各ステップの (ε, τ)"""

    diagrams: Tuple[ExtendedDiagram, ...]
    params: Optional[Tuple[TransportParams, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "diagrams", tuple(self.diagrams))
        if self.params is not None:
            object.__setattr__(self, "params", tuple(self.params))
            if len(self.params) != max(len(self.diagrams) - 1, 0):
                raise ParameterError(
                    f"{len(self.diagrams)} diagrams need {len(self.diagrams) - 1} params, "
                    f"got {len(self.params)}"
                )

    def steps(self) -> List[Tuple[ExtendedDiagram, ExtendedDiagram]]:
        return list(zip(self.diagrams, self.diagrams[1:]))


@dataclass(frozen=True)
class Realization:
    """図の列を実現する Reeb グラフの列 R_0 … R_N と使ったパラメータ"""

    graphs: Tuple[ReebGraph, ...]
    params: Tuple[TransportParams, ...]


@dataclass(frozen=True)
class PathSample:
    time: float
    graph: ReebGraph
    diagram: ExtendedDiagram


def _dedupe(values: Iterable[float], tol: float) -> List[float]:
    kept: List[float] = []
    for value in sorted(values):
        if not kept or value - kept[-1] > tol:
            kept.append(value)
    return kept


def _cross(
    d_from: ExtendedDiagram, d_to: ExtendedDiagram, kind: PairKind
) -> List[Tuple[float, float, float, float]]:
    return [
        (a_low, a_high, b_low, b_high)
        for a_low, a_high in d_from.points(kind)
        for b_low, b_high in d_to.points(kind)
    ]


def _underdetermined_candidates(
    d_from: ExtendedDiagram,
    d_to: ExtendedDiagram,
    ext0_shifts: List[float],
    tol: float,
) -> List[TransportParams]:
    """輸送先が Ext0 だけのとき、直線 ε − τ = c 上で最小の厳密な ε を選ぶ

    c は残った Ext0 のずれ（すべて消えた場合は最も長い Ext0 が消える値）。
    消えた Ext1 は ε ≥ (b−a)/2、消えた Ord0/Rel1 は τ ≥ b−a を要求し、
    厳密性 τ < 2ε は ε > −c と同値。
    """
    margin = 4 * tol if tol > 0 else 1e-12
    if d_to:
        shifts = _dedupe(ext0_shifts, tol)
    else:
        widest = max((high - low for low, high in d_from.points(PairKind.EXT0)), default=0.0)
        shifts = [-widest / 2 - margin] if widest > 0 else [0.0]

    ext1_bound = max(
        ((high - low) / 2 + margin for low, high in d_from.points(PairKind.EXT1)), default=0.0
    )
    tau_bound = max(
        (
            high - low + margin
            for kind in (PairKind.ORD0, PairKind.REL1)
            for low, high in d_from.points(kind)
        ),
        default=0.0,
    )
    found: List[TransportParams] = []
    for c in shifts:
        eps = max(0.0, c, -c + margin, ext1_bound, tau_bound + c)
        found.append(TransportParams(eps, eps - c))
    return found


def recover_params(
    d_from: ExtendedDiagram, d_to: ExtendedDiagram, tol: Optional[float] = None
) -> List[TransportParams]:
    """transport(d_from, (ε, τ)) = d_to となる (ε, τ) を候補生成と検証で求める

    ε の候補は Ext1/Rel1 の low の差、Ext1/Ord0 の high の差、Ext1 の
    消滅境界、0、および Ext0 のずれ c = ε − τ と τ 単独の候補の和。
    各 ε について τ の候補を作り、0 ≤ τ ≤ 2ε のものを輸送して照合する。
    輸送先が Ext0 だけのときは直線 ε − τ = c 上の最小の厳密な組も加える。

    Args:
        d_from (ExtendedDiagram): 輸送元の図
        d_to (ExtendedDiagram): 輸送先の図
        tol (float, optional): 照合の許容誤差。デフォルトは設定値。

    Returns:
        List[TransportParams]: 検証済みの候補（ε, τ の昇順）。空なら 1 ステップでは到達不能。
    """
    tol = resolve_tolerance(tol)
    ext0 = _cross(d_from, d_to, PairKind.EXT0)
    ord0 = _cross(d_from, d_to, PairKind.ORD0)
    rel1 = _cross(d_from, d_to, PairKind.REL1)
    ext1 = _cross(d_from, d_to, PairKind.EXT1)

    epsilons = [0.0]
    epsilons += [b_low - a_low for a_low, _, b_low, _ in ext1 + rel1]
    epsilons += [a_high - b_high for _, a_high, _, b_high in ext1 + ord0]
    epsilons += [(high - low) / 2 for low, high in d_from.points(PairKind.EXT1)]

    # ε に依らない τ の候補（Ord0/Rel1 の消滅境界）
    fixed_taus = [0.0]
    fixed_taus += [
        high - low
        for kind in (PairKind.ORD0, PairKind.REL1)
        for low, high in d_from.points(kind)
    ]
    ext0_shifts = [b_high - a_high for _, a_high, _, b_high in ext0]
    ext0_shifts += [a_low - b_low for a_low, _, b_low, _ in ext0]
    epsilons += [tau + c for tau in fixed_taus for c in ext0_shifts]

    def taus_for(eps: float) -> List[float]:
        taus = list(fixed_taus)
        taus += [eps + (b_low - a_low) for a_low, _, b_low, _ in ord0 + ext0]
        taus += [eps - (b_high - a_high) for _, a_high, _, b_high in ext0 + rel1]
        taus += [(high - low) / 2 + eps for low, high in d_from.points(PairKind.EXT0)]
        return taus

    candidates: List[TransportParams] = []
    for eps in _dedupe(epsilons, tol):
        if eps < -tol:
            continue
        eps = max(eps, 0.0)
        for tau in _dedupe(taus_for(eps), tol):
            if tau < -tol or tau > 2 * eps + tol:
                continue
            candidates.append(TransportParams(eps, min(max(tau, 0.0), 2 * eps)))

    if all(p.kind is PairKind.EXT0 for p in d_to):
        candidates += _underdetermined_candidates(d_from, d_to, ext0_shifts, tol)

    verified: List[TransportParams] = []
    for params in sorted(candidates, key=lambda p: (p.epsilon, p.tau)):
        if verified and (
            abs(params.epsilon - verified[-1].epsilon) <= tol
            and abs(params.tau - verified[-1].tau) <= tol
        ):
            continue
        if diagram_equal(transport(d_from, params, tol), d_to, tol):
            verified.append(params)
    logger.debug("候補 %d 個中 %d 個を検証しました", len(candidates), len(verified))
    return verified


def _acceptable(params: TransportParams, allow_identity: bool, tol: float) -> bool:
    if params.is_strict(tol):
        return True
    return allow_identity and params.epsilon <= tol and params.tau <= tol


def _step_candidates(
    vineyard: Vineyard, step: int, allow_identity: bool, tol: float
) -> List[TransportParams]:
    d_from, d_to = vineyard.diagrams[step], vineyard.diagrams[step + 1]
    if vineyard.params is not None:
        given = vineyard.params[step]
        if not _acceptable(given, allow_identity, tol):
            raise NotAdmissibleError(step, f"params {given} violate tau < 2*epsilon")
        if not diagram_equal(transport(d_from, given, tol), d_to, tol):
            raise NotAdmissibleError(step, f"params {given} do not transport the diagram")
        return [given]
    return [p for p in recover_params(d_from, d_to, tol) if _acceptable(p, allow_identity, tol)]


def is_admissible(
    vineyard: Vineyard, allow_identity: bool = False, tol: Optional[float] = None
) -> Optional[List[TransportParams]]:
    """各ステップに τ < 2ε を満たす (ε, τ) があるかを判定する

    Args:
        vineyard (Vineyard): 判定する列
        allow_identity (bool, optional): True なら恒等ステップ (0, 0) も認める。
            デフォルトは False。
        tol (float, optional): 許容誤差。デフォルトは設定値。

    Returns:
        Optional[List[TransportParams]]: 各ステップの最小 ε の候補。許容でなければ None。
    """
    tol = resolve_tolerance(tol)
    chosen: List[TransportParams] = []
    for step in range(len(vineyard.diagrams) - 1):
        try:
            candidates = _step_candidates(vineyard, step, allow_identity, tol)
        except NotAdmissibleError as exc:
            logger.info("%s", exc)
            return None
        if not candidates:
            logger.info("ステップ %d は許容ではありません", step)
            return None
        chosen.append(candidates[0])
    return chosen


def realize(
    r0: ReebGraph,
    vineyard: Vineyard,
    tol: Optional[float] = None,
    allow_identity: bool = False,
) -> Realization:
    """初期グラフから切り詰め付き平滑化を繰り返して図の列を実現する

    各ステップで検証済みの候補を ε の小さい順に試し、得られたグラフの
    図が次の図と一致したものを採用する。照合の許容誤差は設定値の
    REEB_VERIFY_FACTOR 倍（既定 10 倍）。

    Raises:
        DiagramMismatchError: 初期図が一致しない、または実現した図が一致しない場合
        NotAdmissibleError: あるステップに許容なパラメータがない場合（step はそのステップ番号）
    """
    tol = resolve_tolerance(tol)
    verify_tol = tol * get_verify_factor()
    if not vineyard.diagrams:
        raise ParameterError("vineyard has no diagrams")
    if not diagram_equal(extended_diagram(r0, tol), vineyard.diagrams[0], verify_tol):
        raise DiagramMismatchError(None, "initial diagram mismatch")

    graphs = [r0]
    chosen: List[TransportParams] = []
    for step in range(len(vineyard.diagrams) - 1):
        candidates = _step_candidates(vineyard, step, allow_identity, tol)
        if not candidates:
            raise NotAdmissibleError(step)
        target = vineyard.diagrams[step + 1]
        for params in candidates:
            graph = truncated_smooth(graphs[-1], params, tol)
            if diagram_equal(extended_diagram(graph, tol), target, verify_tol):
                break
            logger.debug("ステップ %d: 候補 %s は図が一致しません", step, params)
        else:
            raise DiagramMismatchError(step, "realized diagram does not match the vineyard")
        logger.debug("ステップ %d: ε=%r, τ=%r を採用", step, params.epsilon, params.tau)
        graphs.append(graph)
        chosen.append(params)
    return Realization(tuple(graphs), tuple(chosen))


def _check_time(t: float) -> None:
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"t must lie in [0, 1], got {t}")


def interpolate(
    r: ReebGraph, params: TransportParams, t: float, tol: Optional[float] = None
) -> ReebGraph:
    """区間内の時刻 t のグラフ S_{tε}^{tτ}(r)"""
    _check_time(t)
    params.check(tol)
    return truncated_smooth(r, params.scaled(t), tol)


def interpolate_diagram(
    diagram: ExtendedDiagram, params: TransportParams, t: float, tol: Optional[float] = None
) -> ExtendedDiagram:
    """図の空間での線形な道 transport(D, (tε, tτ))"""
    _check_time(t)
    return transport(diagram, params.scaled(t), tol)


def sample_path(
    realization: Realization, steps_per_segment: int, tol: Optional[float] = None
) -> List[PathSample]:
    """各区間を等間隔に steps_per_segment 分割してグラフと図を並べる

    区間の境界の時刻は 1 回だけ含める。
    """
    if steps_per_segment < 1:
        raise ParameterError("steps_per_segment must be at least 1")
    graphs: Sequence[ReebGraph] = realization.graphs
    if not graphs:
        return []

    samples: List[PathSample] = []
    for i, params in enumerate(realization.params):
        for j in range(steps_per_segment):
            t = j / steps_per_segment
            graph = graphs[i] if j == 0 else interpolate(graphs[i], params, t, tol)
            samples.append(PathSample(i + t, graph, extended_diagram(graph, tol)))
    last = graphs[len(realization.params)]
    samples.append(
        PathSample(float(len(realization.params)), last, extended_diagram(last, tol))
    )
    return samples
