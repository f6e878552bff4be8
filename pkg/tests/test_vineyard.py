import random

import pytest
from conftest import edge_graph, random_morse_graph

from reeb_vineyard import (
    DiagramMismatchError,
    ExtendedDiagram,
    NotAdmissibleError,
    PairKind,
    ParameterError,
    TransportParams,
    Vineyard,
    bottleneck,
    diagram_equal,
    extended_diagram,
    genericity_guard,
    interpolate,
    interpolate_diagram,
    is_admissible,
    isomorphic,
    realize,
    recover_params,
    sample_path,
    smooth,
    suppress_regular,
    transport,
    truncated_smooth,
)


def diagram(*items):
    return ExtendedDiagram.from_tuples(items)


def close(p: TransportParams, q: TransportParams, tol: float = 1e-9) -> bool:
    return abs(p.epsilon - q.epsilon) <= tol and abs(p.tau - q.tau) <= tol


def test_vineyard_checks_params_length():
    d = diagram(("ext0", 0, 1))
    with pytest.raises(ParameterError):
        Vineyard((d, d), params=())


def test_recover_smoothing_step():
    found = recover_params(
        diagram(("ext0", 0, 4), ("ext1", 1, 3)),
        diagram(("ext0", -0.5, 4.5), ("ext1", 1.5, 2.5)),
    )
    assert any(close(p, TransportParams(0.5, 0)) for p in found)


def test_recover_truncated_step():
    found = recover_params(
        diagram(("ext0", 0, 4), ("ext1", 1, 3)),
        diagram(("ext0", 0, 4), ("ext1", 1.5, 2.5)),
    )
    assert any(close(p, TransportParams(0.5, 0.5)) for p in found)


def test_recover_identity(g5):
    d = extended_diagram(g5)
    assert close(recover_params(d, d)[0], TransportParams(0, 0))


def test_recover_impossible_step():
    assert recover_params(diagram(("ext0", 0, 1)), diagram(("ext0", 5, 6))) == []


def test_recover_when_truncation_exceeds_smoothing():
    # τ > ε で Ext0 が縮み、Ext1 は消えるので ε − τ しか決まらない
    d_from = diagram(("ext0", 0.0304, 8.8035), ("ext1", 5.1225, 5.5041))
    generating = TransportParams(0.8499, 1.4574)
    d_to = transport(d_from, generating)
    assert d_to.kinds() == [PairKind.EXT0]

    found = recover_params(d_from, d_to)
    assert found
    assert all(diagram_equal(transport(d_from, p), d_to) for p in found)
    chosen = is_admissible(Vineyard((d_from, d_to)))
    assert chosen is not None
    assert chosen[0].is_strict()
    assert chosen[0].epsilon - chosen[0].tau == pytest.approx(-0.6075, abs=1e-8)


@pytest.mark.parametrize(
    "start, params",
    [
        (diagram(("ext0", 0, 1)), TransportParams(1, 1.5)),
        (diagram(("ext0", 0, 4), ("ext1", 1, 3)), TransportParams(2.5, 4.6)),
        (diagram(("ext0", 0, 4), ("ord0", 1, 2), ("rel1", 2.5, 3.5)), TransportParams(3, 5)),
    ],
)
def test_recover_truncation_to_empty(start, params):
    assert transport(start, params) == ExtendedDiagram()
    found = recover_params(start, ExtendedDiagram())
    assert found
    assert all(transport(start, p) == ExtendedDiagram() for p in found)
    assert is_admissible(Vineyard((start, ExtendedDiagram()))) is not None


def test_realize_truncation_to_empty():
    graph = edge_graph()
    realization = realize(graph, Vineyard((diagram(("ext0", 0, 1)), ExtendedDiagram())))
    assert realization.graphs[1].num_vertices == 0
    assert realization.params[0].is_strict()


def test_recovered_params_all_verify(g4):
    d = extended_diagram(g4)
    target = transport(d, TransportParams(0.8, 1.0))
    found = recover_params(d, target)
    assert found
    assert all(diagram_equal(transport(d, p), target) for p in found)


def test_is_admissible_round_trip(g2):
    d = extended_diagram(g2)
    chosen = is_admissible(Vineyard((d, transport(d, TransportParams(0.5, 0.3)))))
    assert chosen is not None
    assert close(chosen[0], TransportParams(0.5, 0.3))


def test_is_admissible_rejects_rigid_translation():
    vineyard = Vineyard((diagram(("ext0", 0, 1)), diagram(("ext0", 5, 6))))
    assert is_admissible(vineyard) is None


def test_identity_step_needs_opt_in(g2):
    d = extended_diagram(g2)
    vineyard = Vineyard((d, d))
    assert is_admissible(vineyard) is None
    assert is_admissible(vineyard, allow_identity=True) == [TransportParams(0, 0)]


def test_realize_loop_vineyard(g2):
    first = extended_diagram(g2)
    second = diagram(("ext0", -0.5, 4.5), ("ext1", 1.5, 2.5))
    third = diagram(("ext0", -0.5, 4.5))
    realization = realize(g2, Vineyard((first, second, third)))

    assert len(realization.graphs) == 3
    assert realization.graphs[0] is g2
    assert isomorphic(realization.graphs[1], smooth(g2, 0.5))
    assert sorted(realization.graphs[2].values.values()) == pytest.approx([-0.5, 4.5])
    assert close(realization.params[0], TransportParams(0.5, 0))
    # 最後のステップは ε − τ = 0 かつ Ext1 が消える最小の ε
    assert close(realization.params[1], TransportParams(0.5, 0.5))


def test_realize_with_given_params(g2):
    first = extended_diagram(g2)
    second = transport(first, TransportParams(0.5, 0))
    third = transport(second, TransportParams(0.6, 0.6))
    params = (TransportParams(0.5, 0), TransportParams(0.6, 0.6))
    realization = realize(g2, Vineyard((first, second, third), params))
    assert realization.params == params
    assert diagram_equal(extended_diagram(realization.graphs[2]), third, 1e-8)


def test_realize_single_diagram():
    graph = edge_graph()
    realization = realize(graph, Vineyard((diagram(("ext0", 0, 1)),)))
    assert realization.graphs == (graph,)
    assert realization.params == ()


def test_realize_initial_mismatch(g2):
    with pytest.raises(DiagramMismatchError, match="initial diagram mismatch"):
        realize(g2, Vineyard((diagram(("ext0", 0, 9)),)))


def test_realize_reports_failing_step(g2):
    d = extended_diagram(g2)
    with pytest.raises(NotAdmissibleError) as excinfo:
        realize(g2, Vineyard((d, transport(d, TransportParams(0.5, 0)), diagram(("ext0", 9, 10)))))
    assert excinfo.value.step == 1


def test_interpolate_midpoint(g2):
    params = TransportParams(0.5, 0)
    halfway = interpolate(g2, params, 0.5)
    assert isomorphic(halfway, smooth(g2, 0.25))
    assert diagram_equal(
        extended_diagram(halfway), diagram(("ext0", -0.25, 4.25), ("ext1", 1.25, 2.75))
    )
    assert interpolate(g2, params, 0) == suppress_regular(g2)
    assert isomorphic(interpolate(g2, params, 1), smooth(g2, 0.5))


def test_interpolate_rejects_time_outside_unit_interval(g2):
    with pytest.raises(ParameterError):
        interpolate(g2, TransportParams(0.5, 0), 1.5)


def test_interpolate_diagram_is_linear(g2):
    d = extended_diagram(g2)
    assert diagram_equal(
        interpolate_diagram(d, TransportParams(0.5, 0.2), 0.5),
        transport(d, TransportParams(0.25, 0.1)),
    )


def test_sample_path(g2):
    first = extended_diagram(g2)
    second = transport(first, TransportParams(0.5, 0))
    third = transport(second, TransportParams(0.6, 0.6))
    params = (TransportParams(0.5, 0), TransportParams(0.6, 0.6))
    realization = realize(g2, Vineyard((first, second, third), params))

    samples = sample_path(realization, 2)
    assert [s.time for s in samples] == [0, 0.5, 1, 1.5, 2]
    ext1 = [
        [x for point in s.diagram.points(PairKind.EXT1) for x in point] for s in samples[:3]
    ]
    assert ext1[0] == [1, 3]
    assert ext1[1] == pytest.approx([1.25, 2.75])
    assert ext1[2] == pytest.approx([1.5, 2.5])

    endpoints = sample_path(realization, 1)
    assert [s.time for s in endpoints] == [0, 1, 2]


def test_sample_path_rejects_zero_steps(g2):
    realization = realize(g2, Vineyard((extended_diagram(g2),)))
    with pytest.raises(ParameterError):
        sample_path(realization, 0)


# 乱択による往復


def random_vineyard(rng: random.Random):
    """ガードが通るように生成した初期グラフ・図の列・生成パラメータ"""
    while True:
        graph = random_morse_graph(rng, max_vertices=10)
        diagrams = [extended_diagram(graph)]
        params = []
        current = graph
        for _ in range(rng.randint(1, 5)):
            epsilon = rng.uniform(0.05, 1.0)
            step = TransportParams(epsilon, rng.uniform(0, 1.8 * epsilon))
            if genericity_guard(current, epsilon, 1e-4):
                break
            moved = transport(diagrams[-1], step)
            if len(moved.of_kind(PairKind.EXT0)) != len(diagrams[-1].of_kind(PairKind.EXT0)):
                break
            if any(p.persistence < 1e-3 for p in moved):
                break
            smoothed = transport(diagrams[-1], TransportParams(epsilon, 0))
            if any(abs(p.persistence - step.tau) < 1e-4 for p in smoothed):
                break
            current = truncated_smooth(current, step)
            assert diagram_equal(extended_diagram(current), moved, 1e-9)
            diagrams.append(moved)
            params.append(step)
        else:
            return graph, Vineyard(tuple(diagrams)), params


def test_realize_round_trip():
    rng = random.Random(17)
    for _ in range(200):
        graph, vineyard, generating = random_vineyard(rng)
        realization = realize(graph, vineyard)
        for realized, expected in zip(realization.graphs, vineyard.diagrams):
            assert diagram_equal(extended_diagram(realized), expected, 1e-8)
        for (d_from, d_to), params in zip(vineyard.steps(), generating):
            found = recover_params(d_from, d_to)
            assert found
            assert all(diagram_equal(transport(d_from, p), d_to, 1e-9) for p in found)
            if d_from.of_kind(PairKind.EXT1) and d_to.of_kind(PairKind.EXT1):
                assert any(close(p, params) for p in found)


def test_vineyard_steps_are_bounded_by_params():
    rng = random.Random(19)
    for _ in range(100):
        _, vineyard, generating = random_vineyard(rng)
        for (d_from, d_to), params in zip(vineyard.steps(), generating):
            bound = max(params.epsilon, abs(params.epsilon - params.tau))
            assert bottleneck(d_from, d_to).distance <= bound + 1e-9


def test_sample_path_midpoints_follow_linear_transport():
    rng = random.Random(41)
    for _ in range(50):
        graph, vineyard, _ = random_vineyard(rng)
        realization = realize(graph, vineyard)
        samples = sample_path(realization, 2)
        for i, params in enumerate(realization.params):
            midpoint = samples[2 * i + 1]
            assert midpoint.time == i + 0.5
            expected = interpolate_diagram(vineyard.diagrams[i], params, 0.5)
            assert diagram_equal(midpoint.diagram, expected, 1e-8)
