import numpy as np
import pytest

from qstime.graphs import (
    Graph,
    bfs_distances,
    build_cayley,
    build_complete,
    build_cycle,
    build_hypercube,
    build_torus,
    load_edge_list,
    metric_profile,
    parse_graph_spec,
)

FAMILIES = [
    build_cycle(4),
    build_cycle(8),
    build_cycle(9),
    build_complete(2),
    build_complete(5),
    build_hypercube(3),
    build_hypercube(5),
    build_torus(2, 3),
    build_torus(2, 4),
    build_torus(3, 3),
    build_torus(1, 2),
    build_cayley([24], [(1,), (-1,), (5,), (-5,)]),
    build_cayley([4, 4], [(1, 0), (-1, 0), (0, 1), (0, -1)]),
]


def test_torus_1d_is_cycle():
    g = build_torus(1, 4)
    c = build_cycle(4)
    assert g.n == 4 and g.degree == 2
    assert np.array_equal(g.adjacency, c.adjacency)


def test_torus_2d_small():
    g = build_torus(2, 3)
    assert g.n == 9 and g.degree == 4
    assert metric_profile(g).diameter == 2


def test_torus_16_square():
    g = build_torus(2, 16)
    p = metric_profile(g)
    assert g.n == 256
    assert p.diameter == 16
    assert (p.growth_q, p.growth_r) == (2, 1.0)


def test_torus_side2_collapses_parallel_edges():
    g = build_torus(3, 2)
    assert g.n == 8 and g.degree == 3
    h = build_hypercube(3)
    assert np.array_equal(np.sort(g.adjacency, axis=1), h.adjacency)


@pytest.mark.parametrize(
    "dim, side", [(0, 4), (1, 1), (2, 1001)],
)
def test_torus_rejects_bad_parameters(dim, side):
    with pytest.raises(ValueError):
        build_torus(dim, side)


def test_complete_graph():
    g = build_complete(4)
    assert g.n == 4 and g.degree == 3
    assert metric_profile(g).diameter == 1


def test_hypercube():
    g = build_hypercube(3)
    assert g.n == 8 and g.degree == 3
    assert metric_profile(g).diameter == 3


def test_cayley_cycle_isomorphic_to_c8():
    g = build_cayley([8], [(1,), (-1,)])
    c = build_cycle(8)
    assert np.array_equal(g.adjacency, c.adjacency)


def test_cayley_rejects_asymmetric_generators():
    with pytest.raises(ValueError, match="symmetric"):
        build_cayley([5], [(1,)])


def test_cayley_rejects_non_generating_set():
    with pytest.raises(ValueError, match="generate"):
        build_cayley([8], [(2,), (-2,)])


def test_cayley_rejects_identity_generator():
    with pytest.raises(ValueError, match="identity"):
        build_cayley([4], [(0,), (1,), (-1,)])


def test_cycle_profile():
    p = metric_profile(build_cycle(8))
    assert p.diameter == 4
    assert p.ball_volume.tolist() == [1, 3, 5, 7, 8]
    assert (p.growth_q, p.growth_r) == (1, 2.0)


def test_complete_profile_degenerate():
    p = metric_profile(build_complete(4))
    assert p.degenerate
    assert p.growth_q is None and p.growth_r is None


@pytest.mark.parametrize("g", FAMILIES, ids=lambda g: g.family_tag)
def test_families_regular_and_symmetric(g):
    assert g.adjacency.shape == (g.n, g.degree)
    pairs = {(v, int(u)) for v in range(g.n) for u in g.adjacency[v]}
    assert all((u, v) in pairs for v, u in pairs)
    assert not any(v == u for v, u in pairs)


@pytest.mark.parametrize("g", FAMILIES, ids=lambda g: g.family_tag)
def test_profile_origin_independent(g):
    base = metric_profile(g, origin=0)
    rng = np.random.default_rng(7)
    for origin in rng.integers(0, g.n, size=3):
        p = metric_profile(g, origin=int(origin))
        assert p.diameter == base.diameter
        assert np.array_equal(p.ball_volume, base.ball_volume)


@pytest.mark.parametrize("g", FAMILIES, ids=lambda g: g.family_tag)
def test_profile_volume_monotone_reaches_n(g):
    p = metric_profile(g)
    vol = p.ball_volume
    assert vol[0] == 1 and vol[-1] == g.n
    assert np.all(np.diff(vol) >= 0)
    interior = vol[vol < g.n]
    assert np.all(np.diff(interior) > 0)


def test_growth_decomposition_bounds():
    for g in FAMILIES:
        p = metric_profile(g)
        if p.degenerate:
            continue
        d, q, r = p.diameter, p.growth_q, p.growth_r
        assert d**q <= g.n < d ** (q + 1)
        assert 1 <= r < d
        assert np.isclose(d**q * r, g.n)


def test_graph_rejects_asymmetric_adjacency():
    adj = np.array([[1], [2], [0]])  # directed 3-cycle
    with pytest.raises(ValueError, match="symmetric"):
        Graph(n=3, degree=1, adjacency=adj, family_tag="broken")


def test_graph_rejects_disconnected():
    adj = np.array([[1], [0], [3], [2]])
    with pytest.raises(ValueError, match="connected"):
        Graph(n=4, degree=1, adjacency=adj, family_tag="broken")


def test_bfs_distances_on_cycle():
    g = build_cycle(8)
    assert bfs_distances(g, 0).tolist() == [0, 1, 2, 3, 4, 3, 2, 1]


def test_parse_graph_spec_round_trip():
    for spec, n, d in [
        ("torus:d=2,m=16", 256, 4),
        ("cycle:n=8", 8, 2),
        ("hypercube:k=3", 8, 3),
        ("complete:n=5", 5, 4),
        ("cayley:mods=4,4;gens=(1,0),(-1,0),(0,1),(0,-1)", 16, 4),
    ]:
        g = parse_graph_spec(spec)
        assert (g.n, g.degree) == (n, d)


@pytest.mark.parametrize(
    "spec", ["torus", "torus:d=2", "blob:n=3", "cycle:n=x", "cayley:mods=4"],
)
def test_parse_graph_spec_rejects_malformed(spec):
    with pytest.raises(ValueError):
        parse_graph_spec(spec)


def test_edge_list_round_trip(tmp_path):
    g = build_cycle(5)
    lines = ["5 2"]
    seen = set()
    for v in range(g.n):
        for u in g.adjacency[v]:
            if (min(v, u), max(v, u)) not in seen:
                seen.add((min(v, u), max(v, u)))
                lines.append(f"{v} {u}")
    path = tmp_path / "cycle5.edges"
    path.write_text("\n".join(lines) + "\n")
    with pytest.warns(UserWarning, match="transitivity"):
        loaded = load_edge_list(str(path))
    assert np.array_equal(loaded.adjacency, g.adjacency)


def test_edge_list_rejects_irregular(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("3 2\n0 1\n1 2\n")  # path graph, not regular
    with pytest.raises(ValueError, match="regular"):
        load_edge_list(str(path))


def test_edge_list_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.edges"
    path.write_text("nope\n")
    with pytest.raises(ValueError):
        load_edge_list(str(path))
