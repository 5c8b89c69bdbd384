"""
Numerical identity suites behind ``check-identities`` and ``analyze``.

Each suite returns ``IdentityResult`` records with the largest residual it
saw; a record that checked nothing is reported as skipped.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..core.cochains import (
    CochainNormContext,
    IdentityResult,
    TwistedCochain,
    adjoint_pairing_checks,
    alt,
    average_M,
    codifferential_delta,
    differential_d,
    full_sum_norm_power,
    link_context,
    localization_identities,
    localize,
    norm,
    norm_power,
    pairing,
    project_PL,
    project_PL_dual,
    project_twisted,
    random_cochain,
)
from ..core.cohomology import (
    CochainBasis,
    build_bases,
    delta_by_adjoint,
    delta_pointwise,
    expected_dimension,
    kernel_basis,
)
from ..core.complex_core import SimplicialComplex, weight_identity_residual
from ..core.constants import (
    ADJOINT_TOL,
    CHAIN_TOL,
    IDENTITY_TOL,
    RANK_TOL,
    RELATION_TOL,
    SWITCHING_TOL,
)
from ..core.group_action import (
    Group,
    PairFunction,
    orbit_data,
    pointwise_stabilizer,
    switching_sums,
)
from ..core.representations import Representation, check_homomorphism, sup_norm
from ..core.spectral import kappa2, link_graph, poincare_ratio, poincare_witness
from .constants import PROJECTION_EXPONENTS

logger = logging.getLogger(__name__)


@dataclass
class SuiteContext:
    complex: SimplicialComplex
    group: Group
    representation: Representation
    samples: int
    rng: np.random.Generator
    p: float = 2.0
    tol: float = IDENTITY_TOL
    rank_tol: float = RANK_TOL

    @property
    def n(self) -> int:
        return self.complex.dimension

    @cached_property
    def ctx(self) -> CochainNormContext:
        return CochainNormContext(self.complex, self.group, self.representation)

    @cached_property
    def uniform(self) -> CochainNormContext:
        return self.ctx.uniform().with_p(self.p)

    @cached_property
    def bases(self) -> list[CochainBasis]:
        return build_bases(self.ctx, self.rank_tol)

    @cached_property
    def dual_bases(self) -> list[CochainBasis]:
        return build_bases(self.ctx.dual(), self.rank_tol)

    def random_pair(
        self, k: int, ctx: CochainNormContext | None = None
    ) -> tuple[TwistedCochain, TwistedCochain]:
        """A raw random cochain and its P_L image; the raw one sets the residual scale."""
        kctx = (ctx or self.ctx).at(k)
        raw = random_cochain(kctx, self.rng)
        return raw, project_PL(raw, kctx)

    def random_L(self, k: int, ctx: CochainNormContext | None = None) -> TwistedCochain:
        return self.random_pair(k, ctx)[1]


def _relative(lhs: float, rhs: float, floor: float = 0.0) -> float:
    scale = max(abs(lhs), abs(rhs), floor)
    return abs(lhs - rhs) / scale if scale else 0.0


def _excess(lhs: float, rhs: float, floor: float = 0.0) -> float:
    """Relative amount by which ``lhs ≤ rhs`` is violated."""
    return max(0.0, lhs - rhs) / (max(abs(rhs), floor) or 1.0)


def _max_abs(x: np.ndarray) -> float:
    return float(np.abs(x).max(initial=0.0))


def _record(result: IdentityResult, residual: float) -> None:
    result.residual = max(result.residual, float(residual))
    result.checked += 1


def invariant_pair_function(
    complex_: SimplicialComplex,
    group: Group,
    l: int,
    k: int,
    rng: np.random.Generator,
) -> PairFunction:
    """
    Random Γ-invariant f(τ, σ) for τ ⊂ σ: a value per (orbit of σ, orbit of τ,
    positions of τ inside σ), drawn on first use.
    """
    high = orbit_data(complex_, group, k)
    low = orbit_data(complex_, group, l)
    table: dict = {}

    def f(tau, sigma) -> float:
        key = (
            high.orbit_of[tuple(sigma)],
            low.orbit_of[tuple(tau)],
            tuple(sigma.index(v) for v in tau),
        )
        if key not in table:
            table[key] = float(rng.standard_normal())
        return table[key]

    return f


# --------------------------------------------------------------
# Combinatorics and group data
# --------------------------------------------------------------
def suite_weight_identity(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("weight_identity", "Σ_{σ⊃τ} ω(σ) = (n−k)(k+2)! ω(τ)", 0.0, 0.0)
    for k in range(s.n):
        _record(r, weight_identity_residual(s.complex, k))
    return [r]


def suite_switching_sums(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult(
        "switching_sums",
        "Σ_{Σ(k,Γ)} Σ_{τ⊂σ} f/|Γ_σ| = Σ_{Σ(l,Γ)} Σ_{σ⊃τ} f/|Γ_τ|",
        0.0,
        SWITCHING_TOL,
    )
    pairs = [(l, k) for k in range(1, s.n + 1) for l in range(k)]
    for i in range(s.samples if pairs else 0):
        l, k = pairs[i % len(pairs)]
        f = invariant_pair_function(s.complex, s.group, l, k, s.rng)
        # pair values are standard normals
        _record(r, _relative(*switching_sums(s.complex, s.group, l, k, f), floor=1.0))
    return [r]


def suite_homomorphism(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("homomorphism", "π(gh) = π(g)π(h)", 0.0, RELATION_TOL)
    bound = s.representation.bound
    _record(r, check_homomorphism(s.representation, s.samples, s.rng) / max(1.0, bound**2))
    return [r]


def suite_isometry(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("uniform_norm_isometry", "‖π_g x‖_E = ‖x‖_E", 0.0, s.tol)
    rep = s.representation
    if rep.dim == 0:
        return [r]
    for _ in range(s.samples):
        x = s.rng.standard_normal(rep.dim)
        base = float(sup_norm(rep, x))
        moved = sup_norm(rep, np.einsum("gij,j->gi", rep.matrices, x))
        _record(r, _max_abs(moved - base) / base)
    return [r]


def suite_stabilizer_intersection(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("stabilizer_intersection", "Γ_{τ*σ} = Γ_τ ∩ Γ_σ", 0.0, 0.0)
    if s.n < 1:
        return [r]
    for tau in s.ctx.orbits(0).representatives:
        link_ctx = link_context(s.ctx, tau)
        stab_tau = set(pointwise_stabilizer(s.group, tau))
        for k in range(link_ctx.n + 1):
            for sigma in link_ctx.complex.ordered(k):
                joined = set(pointwise_stabilizer(s.group, tau + sigma))
                own = set(pointwise_stabilizer(s.group, sigma))
                _record(r, float(joined != stab_tau & own))
    return [r]


# --------------------------------------------------------------
# Norms and projections
# --------------------------------------------------------------
def suite_representative_independence(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult(
        "representative_independence",
        "‖f‖_(k,p) does not depend on the choice of Σ(k,Γ)",
        0.0,
        s.tol,
    )
    for i in range(s.samples):
        k = i % (s.n + 1)
        raw, f = s.random_pair(k, s.uniform)
        other = s.uniform.at(k).rechoose_representatives(int(s.rng.integers(2**31)))
        floor = norm_power(raw, s.uniform.at(k))
        _record(r, _relative(norm_power(f, s.uniform.at(k)), norm_power(f, other), floor))
    return [r]


def suite_projection_algebra(s: SuiteContext) -> list[IdentityResult]:
    idem = IdentityResult("projection_idempotence", "Alt² = Alt, P² = P, P_L² = P_L", 0.0, s.tol)
    bound = IdentityResult(
        "projection_bounds", "‖Pf‖ ≤ ‖f‖ and ‖P_L f‖^p ≤ (k+1)! ‖f‖^p", 0.0, s.tol
    )
    for p in PROJECTION_EXPONENTS:
        base = s.uniform.with_p(p)
        for i in range(s.samples):
            ctx = base.at(i % (s.n + 1))
            f = random_cochain(ctx, s.rng)
            scale = max(1.0, _max_abs(f.values))
            a, pf, pl = alt(f, ctx), project_twisted(f, ctx), project_PL(f, ctx)
            _record(idem, _max_abs(alt(a, ctx).values - a.values) / scale)
            _record(idem, _max_abs(project_twisted(pf, ctx).values - pf.values) / scale)
            _record(idem, _max_abs(project_PL(pl, ctx).values - pl.values) / scale)
            f_pow = norm_power(f, ctx)
            _record(bound, _excess(norm(pf, ctx), norm(f, ctx)))
            _record(bound, _excess(norm_power(pl, ctx), math.factorial(ctx.degree + 1) * f_pow))
    return [idem, bound]


def suite_pl_adjoint(s: SuiteContext) -> list[IdentityResult]:
    adjoint = IdentityResult("pl_adjoint", "⟨P_L f, φ⟩ = ⟨f, P̄_L φ⟩", 0.0, 10 * ADJOINT_TOL)
    annihilator = IdentityResult(
        "pl_annihilators",
        "ker P̄_L annihilates im P_L and im P̄_L annihilates ker P_L",
        0.0,
        10 * ADJOINT_TOL,
    )
    per_degree = max(1, s.samples // (s.n + 1))
    for k in range(s.n + 1):
        checks = adjoint_pairing_checks(s.ctx.at(k), s.rng, per_degree)
        _record(adjoint, checks["pl_adjoint_residual"])
        _record(annihilator, checks["annihilator_residual"])
    return [adjoint, annihilator]


def suite_average(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult(
        "average_projection",
        "M² = M and ‖Mf‖^p ≤ ‖f‖^p on vertex links, also for M̄",
        0.0,
        s.tol,
    )
    if s.n < 1:
        return [r]
    for ctx in (s.uniform.at(1), s.uniform.dual().at(1)):
        for tau in ctx.orbits(0).representatives:
            raw, f = s.random_pair(1, ctx)
            local, lctx = localize(f, tau, ctx)
            m = average_M(local, lctx)
            floor = full_sum_norm_power(localize(raw, tau, ctx)[0], lctx)
            _record(r, _max_abs(average_M(m, lctx).values - m.values) / max(1.0, _max_abs(m.values)))
            _record(
                r, _excess(full_sum_norm_power(m, lctx), full_sum_norm_power(local, lctx), floor)
            )
    return [r]


# --------------------------------------------------------------
# Differentials
# --------------------------------------------------------------
def suite_chain(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("chain", "d ∘ d = 0", 0.0, CHAIN_TOL)
    for i in range(s.samples if s.n >= 2 else 0):
        ctx = s.ctx.at(i % (s.n - 1))
        f = random_cochain(ctx, s.rng)
        dd = differential_d(differential_d(f, ctx), ctx.at(ctx.degree + 1))
        _record(r, _max_abs(dd.values) / max(1.0, _max_abs(f.values)))
    return [r]


def suite_adjointness(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("adjointness", "⟨φ, dψ⟩ = ⟨δφ, ψ⟩", 0.0, ADJOINT_TOL)
    dual = s.ctx.dual()
    for i in range(s.samples if s.n >= 1 else 0):
        k = i % s.n
        low, high = s.ctx.at(k), s.ctx.at(k + 1)
        psi_raw, psi = s.random_pair(k)
        phi_raw = random_cochain(high, s.rng)
        phi = project_PL_dual(phi_raw, high)
        dpsi = differential_d(psi, low)
        dphi = codifferential_delta(phi, dual.at(k + 1))
        lhs = pairing(phi, dpsi, high)
        rhs = pairing(dphi, psi, low)
        scale = max(
            abs(lhs),
            abs(rhs),
            math.sqrt(abs(pairing(phi, phi, high) * pairing(dpsi, dpsi, high))),
            math.sqrt(abs(pairing(dphi, dphi, low) * pairing(psi, psi, low))),
            math.sqrt(abs(pairing(phi_raw, phi_raw, high) * pairing(psi_raw, psi_raw, low))),
            1e-300,
        )
        _record(r, abs(lhs - rhs) / scale)
    return [r]


def suite_delta_matrix(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult(
        "codifferential_pointwise",
        "δφ(τ) = Σ_v ω(v*τ)/ω(τ) φ(v*τ) matches the adjoint of d",
        0.0,
        1e-8,
    )
    for k in range(s.n):
        solved = delta_by_adjoint(s.ctx, k, s.bases, s.dual_bases)
        pointwise = delta_pointwise(s.ctx, k, s.dual_bases)
        if solved.size:
            _record(r, _max_abs(solved - pointwise) / max(1.0, _max_abs(solved)))
    return [r]


def suite_d_bound(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult("d_bound", "‖dφ‖^p ≤ (n−k)(k+2)^p ‖φ‖^p", 0.0, s.tol)
    for p in PROJECTION_EXPONENTS:
        base = s.uniform.with_p(p)
        for i in range(s.samples if s.n >= 1 else 0):
            ctx = base.at(i % s.n)
            k = ctx.degree
            raw, phi = s.random_pair(k, ctx)
            lhs = norm_power(differential_d(phi, ctx), ctx.at(k + 1))
            factor = (s.n - k) * (k + 2) ** p
            _record(r, _excess(lhs, factor * norm_power(phi, ctx), factor * norm_power(raw, ctx)))
    return [r]


def suite_expected_dimension(s: SuiteContext) -> list[IdentityResult]:
    r = IdentityResult(
        "basis_dimension",
        "dim L(k) = Σ rank of the sign-twisted stabilizer projectors",
        0.0,
        0.0,
    )
    for k, basis in enumerate(s.bases):
        _record(r, abs(basis.dimension - expected_dimension(s.ctx, k)))
    return [r]


# --------------------------------------------------------------
# Local-to-global
# --------------------------------------------------------------
def suite_localization(s: SuiteContext) -> list[IdentityResult]:
    merged: dict[str, IdentityResult] = {}

    def absorb(results: list[IdentityResult]) -> None:
        for res in results:
            cur = merged.setdefault(res.name, IdentityResult(res.name, res.anchor, 0.0, res.tolerance))
            cur.residual = max(cur.residual, res.residual)
            cur.checked += res.checked

    per_degree = max(1, s.samples // max(s.n, 1))
    for k in range(1, s.n + 1):
        if s.bases[k].dimension == 0:
            continue
        for _ in range(per_degree):
            absorb(localization_identities(s.random_L(k, s.uniform), s.uniform.at(k), tol=s.tol))
    if s.n >= 2:
        kernel = kernel_basis(s.ctx, 1, s.bases, s.rank_tol)
        for phi in kernel[: s.samples]:
            absorb(localization_identities(phi, s.uniform.at(1), tol=s.tol))
        if kernel:
            for _ in range(per_degree):
                coef = s.rng.standard_normal(len(kernel))
                phi = TwistedCochain(
                    1,
                    sum(c * f.values for c, f in zip(coef, kernel)),
                    alternating=True,
                    twisted=True,
                )
                absorb(localization_identities(phi, s.uniform.at(1), tol=s.tol))
    return list(merged.values())


def suite_poincare(s: SuiteContext) -> list[IdentityResult]:
    bound = IdentityResult("poincare", "‖f − Mf‖ ≤ κ₂ ‖df‖ on vertex links", 0.0, s.tol)
    tight = IdentityResult("poincare_tight", "the λ₁ eigenvector attains κ₂", 0.0, 1e-6)
    if s.n != 2:
        return [bound, tight]
    dim = max(1, s.representation.dim)
    for (v,) in s.ctx.orbits(0).representatives:
        graph = link_graph(s.complex, v)
        if not graph.is_connected:
            continue
        kappa = kappa2(graph)
        for _ in range(s.samples):
            f = s.rng.standard_normal((graph.size, dim))
            _record(bound, _excess(poincare_ratio(graph, f), kappa))
        _, ratio = poincare_witness(graph)
        _record(tight, abs(ratio - kappa) / kappa)
    return [bound, tight]


SUITES = (
    suite_weight_identity,
    suite_switching_sums,
    suite_homomorphism,
    suite_isometry,
    suite_stabilizer_intersection,
    suite_representative_independence,
    suite_projection_algebra,
    suite_pl_adjoint,
    suite_average,
    suite_chain,
    suite_adjointness,
    suite_delta_matrix,
    suite_d_bound,
    suite_expected_dimension,
    suite_localization,
    suite_poincare,
)


def run_identity_suites(
    complex_: SimplicialComplex,
    group: Group,
    representation: Representation,
    samples: int = 20,
    seed: int = 0,
    p: float = 2.0,
    tol: float = IDENTITY_TOL,
    rank_tol: float = RANK_TOL,
) -> list[IdentityResult]:
    s = SuiteContext(
        complex=complex_,
        group=group,
        representation=representation,
        samples=samples,
        rng=np.random.default_rng(seed),
        p=p,
        tol=tol,
        rank_tol=rank_tol,
    )
    results = []
    for suite in SUITES:
        out = suite(s)
        for res in out:
            if res.status == "fail":
                logger.warning(
                    "%s failed: residual %.3e > %.1e", res.name, res.residual, res.tolerance
                )
        results.extend(out)
    return results
