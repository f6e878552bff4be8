from reeb_vineyard import (
    ReebGraph,
    TransportParams,
    Vineyard,
    bottleneck,
    extended_diagram,
    extended_diagram_oracle,
    ext1_partner,
    is_admissible,
    realize,
    recover_params,
    sample_path,
    serialize_diagram,
    serialize_graph,
    smooth,
    transport,
    truncated_smooth,
)


def build_loop_graph() -> ReebGraph:
    """高さ 2 のループを 1 つ持つグラフ（最小 0、最大 4）を作成"""
    return ReebGraph(
        {"a": 0, "b": 1, "c": 3, "d": 4},
        [("a", "b"), ("b", "c"), ("b", "c"), ("c", "d")],
    )


def build_branch_graph() -> ReebGraph:
    """2 つの極小が分岐で合流するグラフを作成"""
    return ReebGraph(
        {"m0": 0, "m2": 2, "f3": 3, "top": 5},
        [("m0", "f3"), ("m2", "f3"), ("f3", "top")],
    )


def build_nested_graph() -> ReebGraph:
    """入れ子のループを持つグラフを作成"""
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


def demonstrate_extended_persistence():
    """拡張パーシステンス図のデモを実行"""
    print("==== 拡張パーシステンス図 ====")
    for name, graph in (
        ("ループ", build_loop_graph()),
        ("分岐", build_branch_graph()),
        ("入れ子ループ", build_nested_graph()),
    ):
        diagram = extended_diagram(graph)
        print(f"{name}:")
        print(serialize_diagram(diagram), end="")
        print("オラクルと一致:", diagram == extended_diagram_oracle(graph))
    nested = build_nested_graph()
    print("n3 の Ext1 相手:", ext1_partner(nested, "n3"))
    print("n4 の Ext1 相手:", ext1_partner(nested, "n4"))
    print()


def demonstrate_smoothing():
    """平滑化と切り詰めのデモを実行"""
    loop = build_loop_graph()
    print("==== ε 平滑化 ====")
    for epsilon in (0.5, 1.2):
        print(f"ε = {epsilon}:")
        print(serialize_graph(smooth(loop, epsilon)), end="")
    print("==== 切り詰め付き平滑化 (ε=1, τ=1.5) ====")
    print(serialize_graph(truncated_smooth(build_branch_graph(), TransportParams(1, 1.5))), end="")
    print()


def demonstrate_transport():
    """図の輸送とパラメータ復元のデモを実行"""
    print("==== 図の輸送 ====")
    diagram = extended_diagram(build_loop_graph())
    params = TransportParams(0.5, 0.3)
    moved = transport(diagram, params)
    print(serialize_diagram(moved), end="")
    print("ボトルネック距離:", bottleneck(diagram, moved).distance)
    print("復元したパラメータ:", recover_params(diagram, moved))
    print()


def demonstrate_vineyard():
    """ヴィンヤードの実現と経路のサンプリングのデモを実行"""
    print("==== ヴィンヤードの実現 ====")
    loop = build_loop_graph()
    first = extended_diagram(loop)
    second = transport(first, TransportParams(0.5, 0))
    third = transport(second, TransportParams(0.6, 0.6))
    vineyard = Vineyard((first, second, third))
    print("許容なパラメータ:", is_admissible(vineyard))

    realization = realize(loop, vineyard)
    for step, graph in enumerate(realization.graphs):
        print(f"ステップ {step}: {sorted(graph.values.values())}")

    print("経路上の図:")
    for sample in sample_path(realization, 2):
        points = [(p.kind.value, p.low, p.high) for p in sample.diagram]
        print(f"  t={sample.time}: {points}")
    print()


def main():
    """メイン関数: 各デモを実行"""
    print("Reeb グラフの平滑化とヴィンヤードのデモを開始します！\n")

    demonstrate_extended_persistence()
    demonstrate_smoothing()
    demonstrate_transport()
    demonstrate_vineyard()


if __name__ == "__main__":
    main()
