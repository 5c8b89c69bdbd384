import numpy as np
import pytest
from sympy.combinatorics import Permutation, PermutationGroup

from garland_vanishing.core.errors import (
    CapExceeded,
    IndexOutOfRange,
    InvalidAction,
    NotABijection,
    UnknownVertex,
)
from garland_vanishing.core.group_action import (
    check_switching_sums,
    close_group,
    orbit_data,
    permutation_from_mapping,
    permutation_sign,
    pointwise_stabilizer,
    setwise_stabilizer,
    switching_sums,
    trivial_group,
    verify_action,
)
from garland_vanishing.cli_io.identities import invariant_pair_function
from garland_vanishing.cli_io.utils import parse_group


@pytest.mark.parametrize(
    "complex_name,group_name,order",
    [
        ("triangle", "triangle_c3", 3),
        ("tetrahedron", "tetrahedron_s4", 24),
        ("octahedron", "octahedron_equator", 4),
        ("octahedron", "octahedron_rotations", 24),
        ("torus7", "torus_z7", 7),
        ("bipyramid", "bipyramid_d5", 20),
        ("octahedron", "trivial", 1),
    ],
)
def test_fixture_group_orders(case, complex_name, group_name, order):
    cx, group, _ = case(complex_name, group_name)
    assert group.order == order
    sympy_group = PermutationGroup(
        [Permutation(list(group.elements[i])) for i in group.generators]
        or [Permutation(list(range(group.degree)))]
    )
    assert sympy_group.order() == order
    assert verify_action(cx, group).valid


def test_product_applies_right_factor_first(case):
    _, group, _ = case("octahedron", "octahedron_rotations")
    for i in range(group.order):
        for j in (1, 5, 17):
            g, h = group.elements[i], group.elements[j]
            assert group.elements[group.product(i, j)] == tuple(g[v] for v in h)
        assert group.product(i, group.inverse(i)) == 0


def test_mapping_errors():
    labels = ("a", "b", "c")
    assert permutation_from_mapping(labels, {"a": "b", "b": "a"}) == (1, 0, 2)
    with pytest.raises(NotABijection):
        permutation_from_mapping(labels, {"a": "b"})
    with pytest.raises(UnknownVertex):
        permutation_from_mapping(labels, {"a": "d", "d": "a"})


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        close_group([(1, 2, 0)], 3, cap=2)
    assert close_group([(1, 2, 0)], 3, cap=3).order == 3


def test_permutation_sign():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1


def test_action_must_preserve_simplexes(case, tmp_path):
    cx, _, _ = case("octahedron")
    bad = tmp_path / "bad.json"
    bad.write_text('{"generators": [{"top": "x0", "x0": "top"}]}')
    with pytest.raises(InvalidAction):
        parse_group(str(bad), cx, 100)


def test_tetrahedron_orbits_under_a4(case):
    cx, s4, _ = case("tetrahedron", "tetrahedron_s4")
    a4 = s4.subgroup([i for i, g in enumerate(s4.elements) if permutation_sign(g) == 1])
    assert a4.order == 12
    data = orbit_data(cx, a4, 2)
    assert len(data.unordered_representatives) == 1
    # 24 ordered triangles, each with trivial pointwise stabilizer
    assert len(data.representatives) == 2
    assert all(len(s) == 1 for s in data.stabilizers)
    rep = data.unordered_representatives[0]
    setwise = setwise_stabilizer(a4, rep)
    assert len(setwise) == 3
    assert all(sign == 1 for _, sign in setwise)


def test_transporters_map_representatives(case):
    cx, group, _ = case("octahedron", "octahedron_rotations")
    data = orbit_data(cx, group, 1)
    for sigma in cx.ordered(1):
        rep = data.representatives[data.orbit_of[sigma]]
        assert group.act(data.transporter[sigma], rep) == sigma


def test_octahedron_vertex_stabilizer(case):
    cx, group, _ = case("octahedron", "octahedron_rotations")
    stab = pointwise_stabilizer(group, (cx.index_of("top"),))
    assert len(stab) == 4
    edge = (cx.index_of("top"), cx.index_of("x0"))
    assert len(pointwise_stabilizer(group, edge)) == 1


@pytest.mark.parametrize(
    "complex_name,group_name",
    [("octahedron", "octahedron_rotations"), ("bipyramid", "bipyramid_d5"), ("torus7", "torus_z7")],
)
def test_switching_sums(case, complex_name, group_name):
    cx, group, _ = case(complex_name, group_name)
    rng = np.random.default_rng(3)
    for l, k in [(0, 1), (0, 2), (1, 2)]:
        f = invariant_pair_function(cx, group, l, k, rng)
        lhs, rhs = switching_sums(cx, group, l, k, f)
        assert lhs == pytest.approx(rhs, rel=1e-10)
        assert check_switching_sums(cx, group, l, k, f, rng=rng)


def test_switching_sums_on_random_complexes(random_complex, random_cyclic):
    rng = np.random.default_rng(19)
    instances = []
    for _ in range(8):
        cx = random_complex(rng, max_vertices=9)
        instances.append((cx, trivial_group(len(cx.labels))))
        instances.append(random_cyclic(rng, max_vertices=9))
    for cx, group in instances:
        assert verify_action(cx, group).valid
        for l, k in [(0, 1), (0, 2), (1, 2)]:
            f = invariant_pair_function(cx, group, l, k, rng)
            lhs, rhs = switching_sums(cx, group, l, k, f)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-9)
            assert check_switching_sums(cx, group, l, k, f, rng=rng)


def test_switching_degrees_out_of_range(case):
    cx, group, _ = case("octahedron", "octahedron_rotations")
    f = invariant_pair_function(cx, group, 0, 1, np.random.default_rng(0))
    for l, k in [(1, 1), (2, 1), (0, 3), (-1, 1)]:
        with pytest.raises(IndexOutOfRange):
            check_switching_sums(cx, group, l, k, f)
