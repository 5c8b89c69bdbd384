import numpy as np
import pytest

from garland_vanishing.cli_io.identities import SUITES, SuiteContext, run_identity_suites
from garland_vanishing.core.cochains import CochainNormContext
from garland_vanishing.core.cohomology import build_bases, expected_dimension

FIXTURE_SETS = [
    ("triangle", "triangle_c3", "trivial"),
    ("tetrahedron", "tetrahedron_s4", "sign"),
    ("octahedron", None, None),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12"),
    ("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond2"),
    ("octahedron", "octahedron_equator", "permutation"),
    ("torus7", "torus_z7", "trivial"),
    ("bipyramid", "bipyramid_d5", "permutation"),
]


@pytest.mark.parametrize("names", FIXTURE_SETS)
def test_shipped_fixtures_pass(case, names):
    cx, group, rep = case(*names)
    results = run_identity_suites(cx, group, rep, samples=6, seed=1)
    failed = [r.to_dict() for r in results if r.status == "fail"]
    assert not failed
    names_seen = [r.name for r in results]
    assert len(names_seen) == len(set(names_seen))
    checked = {r.name for r in results if r.checked}
    for required in (
        "weight_identity",
        "switching_sums",
        "projection_idempotence",
        "projection_bounds",
        "pl_adjoint",
        "chain",
        "adjointness",
        "d_bound",
        "basis_dimension",
        "poincare",
        "poincare_tight",
    ):
        assert required in checked, required
    if build_bases(CochainNormContext(cx, group, rep))[1].dimension:
        assert {"localized_differential", "restriction_sum"} <= checked


def test_kernel_suites_run_on_octahedron(case):
    cx, group, rep = case("octahedron")
    results = {r.name: r for r in run_identity_suites(cx, group, rep, samples=4)}
    for name in (
        "kernel_link_norms",
        "kernel_global_sum",
        "q_form_sum",
        "codifferential_pointwise",
        "stabilizer_intersection",
    ):
        assert results[name].checked > 0
        assert results[name].status == "pass"


def test_broken_weights_fail_weight_identity(case):
    cx, group, rep = case("broken_weights")
    results = {r.name: r for r in run_identity_suites(cx, group, rep, samples=3)}
    assert results["weight_identity"].status == "fail"


def test_one_dimensional_complex_skips_surface_suites():
    from garland_vanishing.core.complex_core import build_complex
    from garland_vanishing.core.group_action import close_group
    from garland_vanishing.core.representations import trivial_representation

    cx = build_complex([["a", "b"], ["b", "c"], ["c", "a"]])
    group = close_group([(1, 2, 0)], 3)
    results = {r.name: r for r in run_identity_suites(cx, group, trivial_representation(group), samples=3)}
    assert results["poincare"].status == "skipped"
    assert results["chain"].status == "skipped"
    assert not [r for r in results.values() if r.status == "fail"]


def test_seed_determinism(case):
    cx, group, rep = case("octahedron", "octahedron_equator", "sign")
    first = [r.to_dict() for r in run_identity_suites(cx, group, rep, samples=3, seed=5)]
    second = [r.to_dict() for r in run_identity_suites(cx, group, rep, samples=3, seed=5)]
    assert first == second
    assert len(SUITES) >= 15


def test_rank_tolerance_reaches_the_bases(case):
    cx, group, rep = case("octahedron", "octahedron_rotations", "octahedron_axes_2d_cond12")
    s = SuiteContext(cx, group, rep, samples=2, rng=np.random.default_rng(0), rank_tol=1e-6)
    ctx = CochainNormContext(cx, group, rep)
    assert [b.dimension for b in s.bases] == [expected_dimension(ctx, k) for k in range(3)]
    assert [b.dimension for b in s.dual_bases] == [b.dimension for b in s.bases]
    results = run_identity_suites(cx, group, rep, samples=3, seed=2, rank_tol=1e-6)
    assert not [r.to_dict() for r in results if r.status == "fail"]


def test_torus_identities_with_invariant_kernel(case):
    cx, group, rep = case("torus7", "torus_z7", "trivial")
    results = {r.name: r for r in run_identity_suites(cx, group, rep, samples=8, seed=0)}
    assert results["adjointness"].checked > 0
    assert results["adjointness"].status == "pass"
    for name in ("kernel_link_norms", "kernel_global_sum", "codifferential_average_norm"):
        assert results[name].status != "fail", results[name].to_dict()
