import numpy as np
import pytest

from garland_vanishing.core.complex_core import (
    build_complex,
    check_weight_identity,
    face,
    join,
    link,
    weight_identity_residual,
)
from garland_vanishing.core.errors import (
    DuplicateVertexInSimplex,
    IndexOutOfRange,
    JoinNotASimplex,
    LinkEmpty,
    MixedDimension,
    NotDisjoint,
    NotPure,
    UnknownVertex,
)


def test_single_triangle(case):
    cx, _, _ = case("triangle")
    assert cx.dimension == 2
    assert [len(cx.simplexes(k)) for k in range(3)] == [3, 3, 1]
    assert len(cx.ordered(2)) == 6
    assert all(cx.weight(s) == 1 for s in cx.simplexes(0))


def test_octahedron_faces_and_weights(case):
    cx, _, _ = case("octahedron")
    assert [len(cx.simplexes(k)) for k in range(3)] == [6, 12, 8]
    top = cx.index_of("top")
    x0 = cx.index_of("x0")
    assert cx.weight((top,)) == 4
    assert cx.weight((x0, top)) == 2
    assert cx.weight((top, x0)) == 2
    assert not cx.weights_overridden


@pytest.mark.parametrize("name", ["triangle", "tetrahedron", "octahedron", "torus7", "bipyramid"])
def test_weight_identity_holds(case, name):
    cx, _, _ = case(name)
    for k in range(cx.dimension):
        assert weight_identity_residual(cx, k) == 0
        assert check_weight_identity(cx, k)


def test_broken_weights_violate_identity(case):
    cx, _, _ = case("broken_weights")
    assert cx.weights_overridden
    assert cx.weight((cx.index_of("top"),)) == 5
    assert weight_identity_residual(cx, 0) > 0
    assert weight_identity_residual(cx, 1) == 0


def test_link_of_octahedron_vertex_is_a_square(case):
    cx, _, _ = case("octahedron")
    lk = link(cx, (cx.index_of("top"),))
    assert lk.degree == 0
    assert lk.complex.dimension == 1
    assert len(lk.complex.simplexes(0)) == 4
    assert len(lk.complex.simplexes(1)) == 4
    assert {cx.labels[v] for (v,) in lk.complex.simplexes(0)} == {"x0", "x1", "x2", "x3"}
    # link keeps the ambient index space
    assert lk.complex.labels == cx.labels
    x0, x1 = cx.index_of("x0"), cx.index_of("x1")
    assert lk.localized_weight((x0, x1)) == cx.weight((cx.index_of("top"), x0, x1))


def test_link_follows_weight_overrides():
    cx = build_complex(
        [["t", "a", "b"], ["t", "b", "c"], ["t", "c", "a"]],
        weight_overrides={("t", "a"): 7},
    )
    lk = link(cx, (cx.index_of("t"),))
    assert lk.complex.weight((cx.index_of("a"),)) == 7
    assert lk.complex.weight((cx.index_of("b"),)) == 2


def test_face_signs():
    assert face((0, 1, 2), 0) == ((1, 2), 1)
    assert face((0, 1, 2), 1) == ((0, 2), -1)
    assert face((0, 1, 2), 2) == ((0, 1), 1)
    with pytest.raises(IndexOutOfRange):
        face((0, 1, 2), 3)


def test_join(case):
    cx, _, _ = case("octahedron")
    top, x0, x1 = (cx.index_of(v) for v in ("top", "x0", "x1"))
    bottom = cx.index_of("bottom")
    assert join((top,), (x0, x1), cx) == (top, x0, x1)
    with pytest.raises(NotDisjoint):
        join((top,), (top, x0))
    with pytest.raises(JoinNotASimplex):
        join((top,), (bottom,), cx)


def test_build_errors():
    with pytest.raises(MixedDimension):
        build_complex([["a", "b", "c"], ["a", "d"]])
    with pytest.raises(DuplicateVertexInSimplex):
        build_complex([["a", "a", "b"]])
    with pytest.raises(UnknownVertex):
        build_complex([["a", "b", "d"]], vertices=["a", "b", "c"])
    with pytest.raises(NotPure):
        build_complex([["a", "b"]], vertices=["a", "b", "c"])
    with pytest.raises(UnknownVertex):
        build_complex([["a", "b"]], weight_overrides={("a", "z"): 3})


def test_link_of_top_simplex_is_empty(case):
    cx, _, _ = case("triangle")
    with pytest.raises(LinkEmpty):
        link(cx, cx.simplexes(2)[0])


def test_weight_identity_on_random_complexes(random_complex):
    rng = np.random.default_rng(2024)
    for _ in range(50):
        cx = random_complex(rng, max_vertices=12)
        assert cx.dimension == 2
        for k in range(cx.dimension):
            assert weight_identity_residual(cx, k) == 0, [cx.labels[v] for s in cx.simplexes(2) for v in s]
