import numpy as np
import pytest

from garland_vanishing.core.cochains import pairing
from garland_vanishing.core.cohomology import (
    build_bases,
    cohomology_dimensions,
    delta_by_adjoint,
    delta_lower_bound,
    delta_pointwise,
    expected_dimension,
    h1_dimension,
    kernel_basis,
    matrix_d,
    numerical_rank,
    per_link_inequality_check,
    rank_cutoff,
    theorem_crosscheck,
)
from garland_vanishing.core.constants import (
    CROSSCHECK_CONSISTENT,
    CROSSCHECK_INCONSISTENT,
    CROSSCHECK_UNINFORMATIVE,
)
from garland_vanishing.core.errors import CochainError, DegreeOverflow
from garland_vanishing.core.spectral import evaluate_criterion


@pytest.mark.parametrize(
    "name,dims,h",
    [
        ("triangle", [3, 3, 1], [1, 0, 0]),
        ("tetrahedron", [4, 6, 4], [1, 0, 1]),
        ("octahedron", [6, 12, 8], [1, 0, 1]),
        ("torus7", [7, 21, 14], [1, 2, 1]),
    ],
)
def test_trivial_setup_matches_betti_numbers(context, betti, name, dims, h):
    ctx = context(name)
    report = cohomology_dimensions(ctx)
    assert report.cochain_dims == dims
    assert report.cohomology_dims == h
    assert report.cohomology_dims == betti(ctx.complex)
    assert report.euler_chains == report.euler_cohomology


def test_octahedron_d0_entries(context):
    ctx = context("octahedron")
    bases = build_bases(ctx)
    d0 = matrix_d(ctx, 0, bases)
    assert d0.shape == (12, 6)
    nonzero = np.abs(d0) > 1e-12
    np.testing.assert_allclose(np.abs(d0[nonzero]), 2.0)
    assert (nonzero.sum(axis=1) == 2).all()
    assert (nonzero.sum(axis=0) == 4).all()
    d1 = matrix_d(ctx, 1, bases)
    nonzero = np.abs(d1) > 1e-12
    assert (nonzero.sum(axis=1) == 3).all()
    assert (nonzero.sum(axis=0) == 2).all()
    with pytest.raises(DegreeOverflow):
        matrix_d(ctx, 2, bases)


@pytest.mark.parametrize(
    "names",
    [
        ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12"),
        ("octahedron", "octahedron_equator", "permutation"),
        ("bipyramid", "bipyramid_d5", "sign"),
        ("tetrahedron", "tetrahedron_s4", "permutation"),
        ("torus7", "torus_z7", "permutation"),
    ],
)
def test_expected_dimension_and_delta(context, names):
    ctx = context(*names)
    bases = build_bases(ctx)
    dual_bases = build_bases(ctx.dual())
    for k, basis in enumerate(bases):
        assert basis.dimension == expected_dimension(ctx, k)
        assert dual_bases[k].dimension == basis.dimension
    for k in range(ctx.n):
        solved = delta_by_adjoint(ctx, k, bases, dual_bases)
        pointwise = delta_pointwise(ctx, k, dual_bases)
        np.testing.assert_allclose(pointwise, solved, atol=1e-8 * max(1.0, np.abs(solved).max()))


def test_kernel_basis_is_orthonormal(context):
    ctx = context("torus7")
    bases = build_bases(ctx)
    kernel = kernel_basis(ctx, 1, bases)
    # ker d₁ = im d₀ ⊕ H¹: 6 + 2
    assert len(kernel) == 8
    gram = np.array([[pairing(f, g, ctx.at(1)) for g in kernel] for f in kernel])
    np.testing.assert_allclose(gram, np.eye(8), atol=1e-9)


def test_coordinates_reject_foreign_cochains(context, rng):
    from garland_vanishing.core.cochains import random_cochain

    ctx = context("octahedron", "octahedron_rotations", "octahedron_axes_2d")
    bases = build_bases(ctx)
    f = random_cochain(ctx.at(1), rng)
    with pytest.raises(CochainError):
        bases[1].coordinates_of(f, ctx)


def test_delta_lower_bound(context):
    assert delta_lower_bound(context("tetrahedron")) > 0
    assert delta_lower_bound(context("torus7")) == 0.0


@pytest.mark.parametrize(
    "names,h1,crosscheck",
    [
        (("octahedron",), 0, CROSSCHECK_CONSISTENT),
        (("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12"), 0, CROSSCHECK_CONSISTENT),
        (("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2"), 0, CROSSCHECK_UNINFORMATIVE),
        (("torus7",), 2, CROSSCHECK_UNINFORMATIVE),
        (("bipyramid", "bipyramid_d5"), 0, CROSSCHECK_CONSISTENT),
    ],
)
def test_h1_and_crosscheck(case, context, names, h1, crosscheck):
    cx, group, rep = case(*names)
    spectral = evaluate_criterion(cx, group, rep)
    report = h1_dimension(context(*names), spectral)
    assert report.h1 == h1
    assert report.crosscheck == crosscheck
    assert report.criterion_verdict == spectral.verdict
    payload = report.to_dict()
    assert payload["h1"] == h1


def test_crosscheck_flags_inconsistency(case, context):
    cx, group, rep = case("torus7")
    spectral = evaluate_criterion(cx, group, rep)
    spectral.verdict = "PASS"
    report = h1_dimension(context("torus7"))
    assert theorem_crosscheck(spectral, report) == CROSSCHECK_INCONSISTENT


@pytest.mark.parametrize(
    "names",
    [
        ("octahedron",),
        ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2"),
        ("torus7", "torus_z7"),
        ("bipyramid", "bipyramid_d5", "permutation"),
    ],
)
def test_per_link_inequality(context, names):
    ctx = context(*names)
    report = per_link_inequality_check(ctx, samples=10, rng=np.random.default_rng(0))
    assert report.holds, report.witnesses
    payload = report.to_dict()
    assert payload["holds"]
    assert len(payload["links"]) == len(ctx.orbits(0).representatives)


def test_per_link_inequality_needs_dimension_two(context):
    from garland_vanishing.core.complex_core import build_complex
    from garland_vanishing.core.cochains import CochainNormContext
    from garland_vanishing.core.group_action import trivial_group
    from garland_vanishing.core.representations import trivial_representation

    cx = build_complex([["a", "b"], ["b", "c"], ["c", "a"]])
    group = trivial_group(3)
    with pytest.raises(CochainError):
        per_link_inequality_check(CochainNormContext(cx, group, trivial_representation(group)))


SHIPPED_SETS = [
    ("triangle",),
    ("triangle", "triangle_c3", "permutation"),
    ("tetrahedron",),
    ("tetrahedron", "tetrahedron_s4", "trivial"),
    ("tetrahedron", "tetrahedron_s4", "sign"),
    ("tetrahedron", "tetrahedron_s4", "permutation"),
    ("octahedron",),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d"),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12"),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2"),
    ("octahedron", "octahedron_equator", "permutation"),
    ("octahedron", "octahedron_equator", "sign"),
    ("torus7", "torus_z7", "trivial"),
    ("torus7", "torus_z7", "permutation"),
    ("bipyramid", "bipyramid_d5", "permutation"),
    ("bipyramid", "bipyramid_d5", "sign"),
]


@pytest.mark.parametrize("names", SHIPPED_SETS)
def test_basis_dimension_matches_character_count(context, names):
    ctx = context(*names)
    bases = build_bases(ctx)
    assert [b.dimension for b in bases] == [expected_dimension(ctx, k) for k in range(ctx.n + 1)]
    report = cohomology_dimensions(ctx, bases)
    assert all(h >= 0 for h in report.cohomology_dims), report.to_dict()
    assert report.euler_chains == report.euler_cohomology


def test_sign_twist_on_tetrahedron_leaves_top_degree_only(context):
    ctx = context("tetrahedron", "tetrahedron_s4", "sign")
    assert [b.dimension for b in build_bases(ctx)] == [0, 0, 1]
    report = cohomology_dimensions(ctx)
    assert report.cohomology_dims == [0, 0, 1]


def test_orthogonal_axes_on_octahedron(case, context):
    names = ("octahedron", "octahedron_rotations", "octahedron_axes_2d")
    cx, group, rep = case(*names)
    ctx = context(*names)
    assert [b.dimension for b in build_bases(ctx)] == [1, 1, 0]
    spectral = evaluate_criterion(cx, group, rep)
    report = h1_dimension(ctx, spectral)
    assert report.h1 == 0
    assert report.crosscheck == CROSSCHECK_CONSISTENT


def test_rank_ignores_rounding_noise():
    assert numerical_rank(np.full((3, 3), 1e-17)) == 0
    assert numerical_rank(np.zeros((0, 4))) == 0
    assert numerical_rank(np.diag([1e3, 1.0, 1e-12])) == 2
    assert rank_cutoff(1e-16) == rank_cutoff(1.0)
    assert rank_cutoff(1e4, 1e-8) == pytest.approx(1e-4)


def test_per_link_inequality_takes_rank_tolerance(context):
    ctx = context("torus7", "torus_z7")
    loose = per_link_inequality_check(ctx, samples=10, rng=np.random.default_rng(0), rank_tol=1e-6)
    default = per_link_inequality_check(ctx, samples=10, rng=np.random.default_rng(0))
    assert loose.holds
    assert default.holds
    assert len(loose.to_dict()["links"]) == len(default.to_dict()["links"])
