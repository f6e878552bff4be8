"""グラフ・図・ヴィンヤードのテキスト形式の読み書き"""

import math
from typing import List, Optional, Tuple

from .config import resolve_tolerance
from .errors import FileFormatError, InvalidGraphError
from .persistence import ExtendedDiagram, PairKind, PersistencePair
from .reeb_graph import ReebGraph, validate
from .vineyard import Vineyard

VINEYARD_SEPARATOR = "---"

_Line = Tuple[int, List[str]]


def format_value(value: float) -> str:
    """最短で往復できる 10 進表記。整数値は小数点なしで書く"""
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _parse_value(token: str, line: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FileFormatError(line, f"invalid number {token!r}") from None
    if not math.isfinite(value):
        raise FileFormatError(line, f"non-finite value {token!r}")
    return value


def _content_lines(text: str, first_line: int = 1) -> List[_Line]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=first_line):
        content = raw.split("#", 1)[0].strip()
        if content:
            lines.append((number, content.split()))
    return lines


def parse_graph(text: str, strict: bool = True, tol: Optional[float] = None) -> ReebGraph:
    """GraphFile を読み込む

    Args:
        text (str): `v <id> <value>` と `e <id1> <id2>` の行からなるテキスト
        strict (bool, optional): True なら端点・水平辺・自己ループなどを検査する。
            デフォルトは True。
        tol (float, optional): 水平辺判定の許容誤差。デフォルトは設定値。

    Returns:
        ReebGraph: 読み込んだグラフ

    Raises:
        FileFormatError: 書式エラー（行番号付き）
        InvalidGraphError: strict=True で検証に失敗した場合
    """
    tol = resolve_tolerance(tol)
    values = {}
    edges: List[Tuple[str, str]] = []
    edge_lines: List[int] = []
    for line, tokens in _content_lines(text):
        tag = tokens[0]
        if tag not in ("v", "e"):
            raise FileFormatError(line, f"unknown line tag {tag!r}")
        if len(tokens) != 3:
            expected = "v <id> <value>" if tag == "v" else "e <id1> <id2>"
            raise FileFormatError(line, f"expected '{expected}'")
        if tag == "v":
            if tokens[1] in values:
                raise FileFormatError(line, f"duplicate vertex {tokens[1]}")
            values[tokens[1]] = _parse_value(tokens[2], line)
        else:
            edges.append((tokens[1], tokens[2]))
            edge_lines.append(line)

    graph = ReebGraph(values, edges)
    if not strict:
        return graph
    for (u, w), line in zip(edges, edge_lines):
        for end in (u, w):
            if end not in values:
                raise FileFormatError(line, f"unknown endpoint {end}")
        if u == w:
            raise FileFormatError(line, f"self-loop at {u}")
        if abs(values[u] - values[w]) <= tol:
            raise FileFormatError(line, f"equal adjacent values on edge {u}-{w}")
    report = validate(graph, tol)
    if not report.is_valid:
        raise InvalidGraphError(report)
    return graph


def serialize_graph(graph: ReebGraph) -> str:
    """GraphFile として書き出す（頂点は値順、辺は下端を先に書く）"""
    values = graph.values
    lines = [
        f"v {v} {format_value(values[v])}" for v in sorted(values, key=graph.sweep_key)
    ]

    def key(vertex: str) -> Tuple[float, str]:
        return (values.get(vertex, math.inf), vertex)

    ordered = []
    for u, w in graph.edges:
        if key(w) < key(u):
            u, w = w, u
        ordered.append((key(u), key(w), u, w))
    lines += [f"e {u} {w}" for _, _, u, w in sorted(ordered)]
    return "\n".join(lines) + "\n" if lines else ""


def _diagram_from_lines(lines: List[_Line]) -> ExtendedDiagram:
    pairs = []
    for line, tokens in lines:
        if len(tokens) != 3:
            raise FileFormatError(line, "expected '<kind> <low> <high>'")
        try:
            kind = PairKind(tokens[0])
        except ValueError:
            raise FileFormatError(line, f"unknown pair kind {tokens[0]!r}") from None
        low = _parse_value(tokens[1], line)
        high = _parse_value(tokens[2], line)
        if not low < high:
            raise FileFormatError(line, f"low must be below high, got {tokens[1]} {tokens[2]}")
        pairs.append(PersistencePair(kind, low, high))
    return ExtendedDiagram(tuple(pairs))


def parse_diagram(text: str) -> ExtendedDiagram:
    """DiagramFile（`<kind> <low> <high>` の行）を読み込む"""
    return _diagram_from_lines(_content_lines(text))


def serialize_diagram(diagram: ExtendedDiagram) -> str:
    lines = [f"{p.kind.value} {format_value(p.low)} {format_value(p.high)}" for p in diagram]
    return "\n".join(lines) + "\n" if lines else ""


def parse_vineyard(text: str) -> Vineyard:
    """`---` の行で区切った DiagramFile のブロック列を読み込む"""
    blocks: List[List[_Line]] = [[]]
    for number, raw in enumerate(text.splitlines(), start=1):
        if raw.strip() == VINEYARD_SEPARATOR:
            blocks.append([])
            continue
        blocks[-1] += _content_lines(raw, first_line=number)
    return Vineyard(tuple(_diagram_from_lines(block) for block in blocks))


def serialize_vineyard(vineyard: Vineyard) -> str:
    return (VINEYARD_SEPARATOR + "\n").join(serialize_diagram(d) for d in vineyard.diagrams)
