import math

import numpy as np
import pytest

from garland_vanishing.core.cochains import (
    TwistedCochain,
    adjoint_pairing_checks,
    alt,
    average_M,
    codifferential_delta,
    delta_cochain,
    differential_d,
    from_representatives,
    full_sum_norm_power,
    is_alternating,
    is_twisted,
    localization_identities,
    localize,
    norm,
    norm_power,
    pairing,
    project_PL,
    project_PL_dual,
    project_twisted,
    random_cochain,
    restrict,
    zero_cochain,
)
from garland_vanishing.core.cohomology import build_bases, expected_dimension, kernel_basis
from garland_vanishing.core.errors import (
    DegreeMismatch,
    DegreeOverflow,
    DegreeUnderflow,
    DimensionMismatch,
    ExtensionIncoherent,
    NotASimplex,
)

CASES = [
    ("octahedron", None, None),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12"),
    ("octahedron", "octahedron_equator", "sign"),
    ("bipyramid", "bipyramid_d5", "permutation"),
    ("torus7", "torus_z7", "trivial"),
]


@pytest.mark.parametrize("names", CASES)
def test_projection_lands_in_L(context, rng, names):
    ctx = context(*names)
    for k in range(ctx.n + 1):
        kctx = ctx.at(k)
        f = project_PL(random_cochain(kctx, rng), kctx)
        assert is_twisted(f, kctx)
        assert is_alternating(f, kctx)
        np.testing.assert_allclose(project_PL(f, kctx).values, f.values, atol=1e-12)


def test_alt_is_idempotent_and_signed(context, rng):
    ctx = context("triangle").at(1)
    f = random_cochain(ctx, rng)
    a = alt(f, ctx)
    np.testing.assert_allclose(alt(a, ctx).values, a.values, atol=1e-14)
    space = ctx.space()
    for sigma, i in space.index.items():
        j = space.index[(sigma[1], sigma[0])]
        assert a.values[i] == pytest.approx(-a.values[j])


def test_d_squared_is_zero(context, rng):
    ctx = context("torus7")
    f = random_cochain(ctx.at(0), rng)
    dd = differential_d(differential_d(f, ctx.at(0)), ctx.at(1))
    assert np.abs(dd.values).max() < 1e-12


def test_degree_errors(context, rng):
    ctx = context("octahedron")
    top = ctx.at(2)
    with pytest.raises(DegreeOverflow):
        differential_d(random_cochain(top, rng), top)
    with pytest.raises(DegreeUnderflow):
        codifferential_delta(random_cochain(ctx.at(0), rng), ctx.at(0))
    with pytest.raises(DegreeUnderflow):
        localize(random_cochain(ctx.at(0), rng), (0, 2), ctx.at(0))
    with pytest.raises(DegreeMismatch):
        random_cochain(ctx.at(0), rng) + random_cochain(ctx.at(1), rng)
    with pytest.raises(DegreeMismatch):
        random_cochain(ctx.at(1), rng) - random_cochain(ctx.at(2), rng)
    with pytest.raises(DegreeMismatch):
        norm_power(random_cochain(ctx.at(1), rng), ctx.at(0))
    with pytest.raises(NotASimplex):
        delta_cochain(ctx.at(1), (0, 1), np.ones(1))


def test_extension_must_be_stabilizer_fixed(context):
    ctx = context("octahedron", "octahedron_rotations", "octahedron_axes_2d").at(0)
    assert len(ctx.orbits().representatives) == 1
    with pytest.raises(ExtensionIncoherent):
        from_representatives(ctx, np.array([[1.0, 0.0]]))
    f = from_representatives(ctx, np.zeros((1, 2)))
    assert np.abs(f.values).max() == 0.0


def test_norm_reads_representatives(context, rng):
    ctx = context("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2").uniform().at(1)
    f = project_PL(random_cochain(ctx, rng), ctx)
    assert norm_power(f, ctx) == pytest.approx(full_sum_norm_power(f, ctx), rel=1e-10)
    other = ctx.rechoose_representatives(11)
    assert norm_power(f, other) == pytest.approx(norm_power(f, ctx), rel=1e-10)
    assert norm(zero_cochain(ctx), ctx) == 0.0


def test_projection_bounds(context, rng):
    base = context("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12").uniform()
    for p in (1.5, 2.0, 3.0):
        for k in range(3):
            ctx = base.with_p(p).at(k)
            f = random_cochain(ctx, rng)
            assert norm(project_twisted(f, ctx), ctx) <= norm(f, ctx) * (1 + 1e-12)
            assert norm_power(project_PL(f, ctx), ctx) <= math.factorial(k + 1) * norm_power(f, ctx) * (
                1 + 1e-12
            )


def test_pl_and_dual_are_adjoint(context, rng):
    ctx = context("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2")
    for k in range(3):
        checks = adjoint_pairing_checks(ctx.at(k), rng, samples=5)
        assert checks["passed"], checks


def test_codifferential_is_adjoint_of_d(context, rng):
    ctx = context("bipyramid", "bipyramid_d5", "permutation")
    dual = ctx.dual()
    for k in range(2):
        psi = project_PL(random_cochain(ctx.at(k), rng), ctx.at(k))
        phi = project_PL_dual(random_cochain(ctx.at(k + 1), rng), ctx.at(k + 1))
        lhs = pairing(phi, differential_d(psi, ctx.at(k)), ctx.at(k + 1))
        rhs = pairing(codifferential_delta(phi, dual.at(k + 1)), psi, ctx.at(k))
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-12)


def test_localize_and_restrict_shapes(context, rng):
    ctx = context("octahedron")
    f = project_PL(random_cochain(ctx.at(1), rng), ctx.at(1))
    top = (ctx.complex.index_of("top"),)
    local, lctx = localize(f, top, ctx.at(1))
    assert local.degree == 0
    assert local.values.shape == (4, 1)
    restricted, rctx = restrict(f, top, ctx.at(1))
    assert restricted.degree == 1
    assert restricted.values.shape == (8, 1)
    m = average_M(local, lctx)
    np.testing.assert_allclose(average_M(m, lctx).values, m.values)
    assert full_sum_norm_power(m, lctx) <= full_sum_norm_power(local, lctx) + 1e-12


@pytest.mark.parametrize("names", CASES)
def test_localization_identities(context, rng, names):
    ctx = context(*names).uniform()
    for k in range(1, ctx.n + 1):
        if expected_dimension(ctx, k) == 0:
            continue
        phi = project_PL(random_cochain(ctx.at(k), rng), ctx.at(k))
        for result in localization_identities(phi, ctx.at(k)):
            assert result.status != "fail", result.to_dict()


def test_kernel_identities_are_checked_on_coboundaries(context):
    ctx = context("octahedron").uniform()
    f = TwistedCochain(0, np.arange(6, dtype=float)[:, None], alternating=True, twisted=True)
    phi = differential_d(f, ctx.at(0))
    results = {r.name: r for r in localization_identities(phi, ctx.at(1))}
    for name in ("kernel_link_norms", "kernel_global_sum", "kernel_degree_one_sum", "q_form_sum"):
        assert results[name].checked > 0
        assert results[name].status == "pass"


def test_sum_rejects_mismatched_coefficients(context, rng):
    scalar = context("octahedron").at(1)
    planar = context("octahedron", "octahedron_rotations", "octahedron_axes_2d").at(1)
    f = random_cochain(scalar, rng)
    g = random_cochain(planar, rng)
    assert f.values.shape[0] == g.values.shape[0]
    with pytest.raises(DimensionMismatch):
        f + g
    with pytest.raises(DimensionMismatch):
        g - f


def test_localization_identities_on_torus_kernel(context):
    ctx = context("torus7", "torus_z7", "trivial")
    kernel = kernel_basis(ctx, 1, build_bases(ctx))
    assert kernel
    uniform = ctx.uniform().at(1)
    for phi in kernel:
        results = {r.name: r for r in localization_identities(phi, uniform)}
        assert all(r.status != "fail" for r in results.values()), [
            r.to_dict() for r in results.values() if r.status == "fail"
        ]
        assert results["codifferential_average_norm"].checked > 0
