import numpy as np
import pytest

from kswitch.constraints import (
    ColoredTriangles,
    ComponentSizes,
    DegreeCorrelation,
    EdgeDelta,
    NoConstraint,
    ProjectionDegrees,
    TriangleCount,
    apply_delta,
    component_size_multiset,
    count_undirected_triangles,
    degree_pair_histogram,
    from_starter,
    projection_degrees,
    triangle_partition_check,
)
from kswitch.engine import RejectReason, propose, try_switch, validate
from kswitch.errors import MissingColorData, NNotDivisibleBy3, NotBipartite
from kswitch.graph import Graph
from kswitch.instances import (
    c0_toy,
    colored_triangle_starter,
    random_bipartite,
    random_simple_graph,
)


def test_projection_degrees_of_toy():
    g = c0_toy()
    # 0,1,2 share node 5; 3 and 4 share node 7
    assert projection_degrees(g, range(5)) == [1, 1, 2, 2, 2]
    c = ProjectionDegrees.from_starter(g)
    assert c.side == (0, 1, 2, 3, 4)
    assert c.check_full(g)


def test_projection_requires_bipartite():
    g = Graph.from_edge_list([(0, 1), (1, 2)])
    with pytest.raises(NotBipartite):
        projection_degrees(g, [0, 1])
    with pytest.raises(ValueError):
        ProjectionDegrees.from_starter(Graph.from_edge_list([(0, 1)], directed=False))


def test_triangle_partition_check():
    g = colored_triangle_starter(9)
    assert triangle_partition_check(g)
    bad = Graph.from_edge_list([(0, 1), (1, 0), (2, 3), (3, 4), (4, 5), (5, 2)], colors="RGBRGB")
    assert not triangle_partition_check(bad)
    with pytest.raises(NNotDivisibleBy3):
        triangle_partition_check(Graph.from_edge_list([(0, 1), (1, 0)], colors="RG"))
    with pytest.raises(MissingColorData):
        triangle_partition_check(Graph.from_edge_list([(0, 1), (1, 2), (2, 0)]))
    with pytest.raises(MissingColorData):
        ColoredTriangles.from_starter(Graph.from_edge_list([(0, 1), (1, 2), (2, 0)]))


def test_colour_classes_must_be_balanced():
    g = Graph.from_edge_list([(0, 1), (1, 2), (2, 0)], colors="RRG")
    assert not triangle_partition_check(g)


def test_degree_pair_histogram():
    g = Graph.from_edge_list([(0, 1), (0, 2), (1, 2)])
    assert degree_pair_histogram(g) == {(1, 0): 1, (2, 0): 1, (2, 1): 1}
    u = Graph.from_edge_list([(0, 1), (0, 2)], directed=False)
    assert degree_pair_histogram(u) == {(1, 2): 2}


def test_triangles_and_components():
    g = Graph.from_edge_list([(0, 1), (1, 2), (0, 2), (2, 3), (4, 5)], directed=False, n_nodes=7)
    assert count_undirected_triangles(g) == 1
    assert component_size_multiset(g) == [1, 2, 4]
    with pytest.raises(ValueError):
        TriangleCount.from_starter(Graph.from_edge_list([(0, 1)]))


def test_registry():
    g = random_simple_graph(6, 8, False, 0)
    assert isinstance(from_starter("none", g), NoConstraint)
    assert from_starter("triangles", g).target == count_undirected_triangles(g)
    with pytest.raises(ValueError):
        from_starter("nope", g)


def test_edge_delta_validation():
    with pytest.raises(ValueError):
        EdgeDelta(((0, 1),), ())
    with pytest.raises(ValueError):
        EdgeDelta(((0, 1),), ((2, 1),))


def test_apply_delta():
    g = Graph.from_edge_list([(0, 1), (2, 3)])
    h = apply_delta(g, EdgeDelta(((0, 1), (2, 3)), ((0, 3), (2, 1))))
    assert h.key() == ((0, 3), (2, 1))
    assert g.key() == ((0, 1), (2, 3))


def _starter_and_constraint(family, rng):
    if family == "c0":
        g = random_bipartite(6, 5, 12, rng)
        return g, ProjectionDegrees.from_starter(g)
    if family == "c1":
        g = colored_triangle_starter(12)
        return g, ColoredTriangles.from_starter(g)
    if family == "c2":
        g = random_simple_graph(12, 30, True, rng)
        return g, DegreeCorrelation.from_starter(g)
    if family == "c2u":
        g = random_simple_graph(12, 24, False, rng)
        return g, DegreeCorrelation.from_starter(g)
    if family == "c3":
        g = random_simple_graph(10, 20, False, rng)
        return g, TriangleCount.from_starter(g)
    if family == "c4":
        g = random_simple_graph(14, 12, False, rng)
        return g, ComponentSizes.from_starter(g)
    g = random_simple_graph(14, 14, True, rng)
    return g, ComponentSizes.from_starter(g)


@pytest.mark.parametrize("family", ["c0", "c1", "c2", "c2u", "c3", "c4", "c4d"])
def test_incremental_matches_full(family):
    rng = np.random.default_rng(sum(map(ord, family)))
    g, c = _starter_and_constraint(family, rng)
    seen = {True: 0, False: 0}
    for _ in range(1500):
        p = propose(g, int(rng.integers(2, 6)), rng)
        out = validate(g, p, NoConstraint())
        if not out.changed:
            continue
        full = c.check_full(apply_delta(g, p.delta()))
        assert c.check_incremental(g, p.delta()) == full
        walk_verdict = validate(g, p, c)
        assert (walk_verdict.reject_reason is not RejectReason.CONSTRAINT_VIOLATED) == full
        seen[full] += 1
        if full:
            try_switch(g, p, c)
            assert c.check_full(g)
    assert seen[True] > 0
