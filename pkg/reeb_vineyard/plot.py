"""パーシステンス図と Reeb グラフを決定的な SVG として描画するモジュール"""

import io
from collections import Counter
from typing import Dict, List, Tuple, Union

import matplotlib

matplotlib.use("Agg")

from matplotlib.collections import LineCollection  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402

from .persistence import KIND_ORDER, ExtendedDiagram, PairKind  # noqa: E402
from .reeb_graph import ReebGraph, canonical_order  # noqa: E402

MARKERS: Dict[PairKind, str] = {
    PairKind.EXT0: "o",
    PairKind.ORD0: "s",
    PairKind.REL1: "^",
    PairKind.EXT1: "D",
}

# 同じ入力から同じバイト列を得るための設定
_SVG_RC = {"svg.hashsalt": "reeb-vineyard", "svg.fonttype": "none"}
_LAYOUT_ROUNDS = 4


def _to_svg(figure: Figure) -> str:
    buffer = io.BytesIO()
    figure.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue().decode("utf-8")


def plot_diagram(diagram: ExtendedDiagram) -> str:
    """図を散布図（種別ごとにマーカーを変える）と対角線で描く

    Args:
        diagram (ExtendedDiagram): 描画する図

    Returns:
        str: SVG テキスト
    """
    with matplotlib.rc_context(_SVG_RC):
        figure = Figure(figsize=(4.5, 4.5))
        axes = figure.add_subplot()
        coords = [x for pair in diagram for x in (pair.low, pair.high)]
        low, high = (min(coords), max(coords)) if coords else (0.0, 1.0)
        pad = 0.05 * (high - low) or 0.5
        low, high = low - pad, high + pad

        axes.plot([low, high], [low, high], color="0.6", linewidth=1, gid="diagonal")
        for kind in KIND_ORDER:
            points = diagram.points(kind)
            if not points:
                continue
            axes.scatter(
                [p[0] for p in points],
                [p[1] for p in points],
                marker=MARKERS[kind],
                label=kind.value,
                gid=f"kind-{kind.value}",
                zorder=3,
            )
        axes.set_xlim(low, high)
        axes.set_ylim(low, high)
        axes.set_xlabel("low")
        axes.set_ylabel("high")
        if len(diagram):
            axes.legend(loc="lower right")
        return _to_svg(figure)


def graph_layout(graph: ReebGraph) -> Dict[str, Tuple[float, float]]:
    """y を関数値、x を正準順から始めた重心反復で決める"""
    order = canonical_order(graph)
    x = {v: float(i) for i, v in enumerate(order)}
    neighbours = {v: graph.lower_neighbors(v) + graph.upper_neighbors(v) for v in order}
    for _ in range(_LAYOUT_ROUNDS):
        x = {
            v: 0.5 * x[v] + 0.5 * sum(x[u] for u in neighbours[v]) / len(neighbours[v])
            if neighbours[v]
            else x[v]
            for v in order
        }
    return {v: (x[v], graph.value(v)) for v in order}


def plot_graph(graph: ReebGraph) -> str:
    """Reeb グラフを y = 関数値で描く。多重辺は折れ線をずらして描く"""
    positions = graph_layout(graph)
    multiplicity = Counter(
        (lower, upper) for _, lower, upper in graph.oriented_edges()
    )
    segments: List[List[Tuple[float, float]]] = []
    for (lower, upper), count in sorted(multiplicity.items()):
        (x0, y0), (x1, y1) = positions[lower], positions[upper]
        for k in range(count):
            offset = 0.3 * (k - (count - 1) / 2)
            segments.append([(x0, y0), ((x0 + x1) / 2 + offset, (y0 + y1) / 2), (x1, y1)])

    with matplotlib.rc_context(_SVG_RC):
        figure = Figure(figsize=(4.5, 6))
        axes = figure.add_subplot()
        axes.add_collection(LineCollection(segments, colors="0.2", linewidths=1.2, gid="reeb-edges"))
        if positions:
            xs = [positions[v][0] for v in positions]
            ys = [positions[v][1] for v in positions]
            axes.scatter(xs, ys, color="tab:red", zorder=3, gid="reeb-vertices")
        axes.autoscale_view()
        axes.set_xticks([])
        axes.set_ylabel("f")
        return _to_svg(figure)


def plot(item: Union[ExtendedDiagram, ReebGraph]) -> str:
    """図またはグラフを SVG テキストにする"""
    if isinstance(item, ReebGraph):
        return plot_graph(item)
    return plot_diagram(item)
