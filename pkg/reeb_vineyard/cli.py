"""Reeb グラフの平滑化とヴィンヤード実現のコマンドラインインターフェース

標準出力には機械可読な結果（GraphFile / DiagramFile / VineyardFile /
距離）だけを書き、診断メッセージは標準エラーに書く。
終了コードは 0 成功、1 入力や許容性などの失敗、2 使い方の誤り。
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .config import get_tolerance
from .errors import ReebVineyardError
from .file_formats import (
    format_value,
    parse_diagram,
    parse_graph,
    parse_vineyard,
    serialize_diagram,
    serialize_graph,
)
from .persistence import extended_diagram
from .plot import plot
from .reeb_graph import betti, genericity, validate
from .smoothing import TransportParams, smooth, truncate, truncated_smooth
from .transport import bottleneck, transport
from .vineyard import interpolate, realize, recover_params, sample_path


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(text: str) -> None:
    sys.stdout.write(text)


def _run_validate(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), strict=False, tol=tol)
    report = validate(graph, tol)
    if report.is_valid:
        _write("valid\n")
        return 0
    for violation in report.violations:
        print(violation, file=sys.stderr)
    return 1


def _run_info(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    b0, b1 = betti(graph)
    function_generic, morse_generic = genericity(graph, tol)
    _write(f"betti {b0} {b1}\n")
    _write(f"generic {str(function_generic).lower()} {str(morse_generic).lower()}\n")
    return 0


def _run_diagram(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    _write(serialize_diagram(extended_diagram(graph, tol)))
    return 0


def _run_smooth(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    if args.tau is None:
        result = smooth(graph, args.epsilon, tol)
    else:
        result = truncated_smooth(graph, TransportParams(args.epsilon, args.tau), tol)
    _write(serialize_graph(result))
    return 0


def _run_truncate(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    _write(serialize_graph(truncate(graph, args.tau, tol)))
    return 0


def _run_transport(args: argparse.Namespace, tol: float) -> int:
    diagram = parse_diagram(_read_text(args.diagram))
    _write(serialize_diagram(transport(diagram, TransportParams(args.epsilon, args.tau), tol)))
    return 0


def _run_bottleneck(args: argparse.Namespace, tol: float) -> int:
    result = bottleneck(parse_diagram(_read_text(args.first)), parse_diagram(_read_text(args.second)))
    _write(format_value(result.distance) + "\n")
    return 0


def _run_recover(args: argparse.Namespace, tol: float) -> int:
    found = recover_params(
        parse_diagram(_read_text(args.first)), parse_diagram(_read_text(args.second)), tol
    )
    if not found:
        print("エラー: 輸送パラメータが見つかりません", file=sys.stderr)
        return 1
    for params in found:
        _write(f"{format_value(params.epsilon)} {format_value(params.tau)}\n")
    return 0


def _run_realize(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    vineyard = parse_vineyard(_read_text(args.vineyard))
    realization = realize(graph, vineyard, tol, allow_identity=args.allow_identity)

    if args.steps is not None:
        samples = sample_path(realization, args.steps, tol)
        blocks = [f"# t={format_value(s.time)}\n" + serialize_diagram(s.diagram) for s in samples]
        _write("---\n".join(blocks))
        return 0

    blocks = [f"# step 0\n{serialize_graph(realization.graphs[0])}"]
    for step, (params, result) in enumerate(
        zip(realization.params, realization.graphs[1:]), start=1
    ):
        header = (
            f"# step {step} epsilon {format_value(params.epsilon)} "
            f"tau {format_value(params.tau)}\n"
        )
        blocks.append(header + serialize_graph(result))
    _write("---\n".join(blocks))
    return 0


def _run_interpolate(args: argparse.Namespace, tol: float) -> int:
    graph = parse_graph(_read_text(args.graph), tol=tol)
    result = interpolate(graph, TransportParams(args.epsilon, args.tau), args.t, tol)
    _write(serialize_graph(result))
    return 0


def _looks_like_graph(text: str) -> bool:
    for raw in text.splitlines():
        content = raw.split("#", 1)[0].split()
        if content:
            return content[0] in ("v", "e")
    return False


def _run_plot(args: argparse.Namespace, tol: float) -> int:
    text = _read_text(args.input)
    item = parse_graph(text, tol=tol) if _looks_like_graph(text) else parse_diagram(text)
    Path(args.out).write_text(plot(item), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    """引数パーサーを組み立てる"""
    parser = argparse.ArgumentParser(
        prog="reeb-vineyard", description="Reeb graph smoothing and vineyard CLI"
    )
    parser.add_argument("--tol", type=float, default=None, help="値比較の許容誤差（既定: REEB_TOL または 1e-9）")
    parser.add_argument("--verbose", "-v", action="store_true", help="デバッグログを標準エラーに出す")

    # サブコマンド側でも --tol を受け付ける（未指定ならグローバル値を上書きしない）
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help=argparse.SUPPRESS)

    subparsers = parser.add_subparsers(dest="command", help="サブコマンド")

    validate_parser = subparsers.add_parser("validate", parents=[common], help="グラフを検証")
    validate_parser.add_argument("graph", help="GraphFile のパス（- で標準入力）")

    info_parser = subparsers.add_parser("info", parents=[common], help="ベッチ数と生成性を表示")
    info_parser.add_argument("graph", help="GraphFile のパス")

    diagram_parser = subparsers.add_parser("diagram", parents=[common], help="拡張パーシステンス図を計算")
    diagram_parser.add_argument("graph", help="GraphFile のパス")

    smooth_parser = subparsers.add_parser("smooth", parents=[common], help="ε 平滑化（--tau で切り詰めも）")
    smooth_parser.add_argument("graph", help="GraphFile のパス")
    smooth_parser.add_argument("--epsilon", type=float, required=True, help="平滑化幅 ε")
    smooth_parser.add_argument("--tau", type=float, default=None, help="切り詰め量 τ（0 ≤ τ ≤ 2ε）")

    truncate_parser = subparsers.add_parser("truncate", parents=[common], help="τ 切り詰め")
    truncate_parser.add_argument("graph", help="GraphFile のパス")
    truncate_parser.add_argument("--tau", type=float, required=True, help="切り詰め量 τ")

    transport_parser = subparsers.add_parser("transport", parents=[common], help="図を輸送")
    transport_parser.add_argument("diagram", help="DiagramFile のパス")
    transport_parser.add_argument("--epsilon", type=float, required=True, help="平滑化幅 ε")
    transport_parser.add_argument("--tau", type=float, required=True, help="切り詰め量 τ")

    bottleneck_parser = subparsers.add_parser("bottleneck", parents=[common], help="ボトルネック距離")
    bottleneck_parser.add_argument("first", help="DiagramFile のパス")
    bottleneck_parser.add_argument("second", help="DiagramFile のパス")

    recover_parser = subparsers.add_parser("recover", parents=[common], help="輸送パラメータを復元")
    recover_parser.add_argument("first", help="輸送元の DiagramFile")
    recover_parser.add_argument("second", help="輸送先の DiagramFile")

    realize_parser = subparsers.add_parser("realize", parents=[common], help="ヴィンヤードを実現")
    realize_parser.add_argument("graph", help="初期グラフの GraphFile")
    realize_parser.add_argument("vineyard", help="VineyardFile のパス")
    realize_parser.add_argument("--steps", type=int, default=None, help="区間あたりのサンプル数（指定時は図の列を出力）")
    realize_parser.add_argument("--allow-identity", action="store_true", help="恒等ステップ (0, 0) を認める")

    interpolate_parser = subparsers.add_parser("interpolate", parents=[common], help="区間内の時刻 t のグラフ")
    interpolate_parser.add_argument("graph", help="GraphFile のパス")
    interpolate_parser.add_argument("--epsilon", type=float, required=True, help="平滑化幅 ε")
    interpolate_parser.add_argument("--tau", type=float, required=True, help="切り詰め量 τ")
    interpolate_parser.add_argument("--t", type=float, required=True, help="時刻 t（0 ≤ t ≤ 1）")

    plot_parser = subparsers.add_parser("plot", parents=[common], help="図またはグラフを SVG に描画")
    plot_parser.add_argument("input", help="DiagramFile または GraphFile のパス")
    plot_parser.add_argument("--out", required=True, help="出力する SVG のパス")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI のメイン関数。終了コードを返す"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    if args.command is None:
        parser.print_help(sys.stderr)
        return 2

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        tol = args.tol if args.tol is not None else get_tolerance()
        if args.command == "validate":
            return _run_validate(args, tol)
        elif args.command == "info":
            return _run_info(args, tol)
        elif args.command == "diagram":
            return _run_diagram(args, tol)
        elif args.command == "smooth":
            return _run_smooth(args, tol)
        elif args.command == "truncate":
            return _run_truncate(args, tol)
        elif args.command == "transport":
            return _run_transport(args, tol)
        elif args.command == "bottleneck":
            return _run_bottleneck(args, tol)
        elif args.command == "recover":
            return _run_recover(args, tol)
        elif args.command == "realize":
            return _run_realize(args, tol)
        elif args.command == "interpolate":
            return _run_interpolate(args, tol)
        elif args.command == "plot":
            return _run_plot(args, tol)
        parser.print_help(sys.stderr)
        return 2
    except ReebVineyardError as exc:
        print(f"エラー: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"エラー: ファイルを読み書きできません: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
