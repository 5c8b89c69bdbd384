"""
Finite-dimensional cohomology of the twisted alternating cochain complex.

Cochains of L(k) are determined by their values on the orbit representatives,
so every basis is kept as a coordinate matrix over those values. Ranks and
singular values are taken after whitening with the Gram matrix, so they are
those of the Hilbert operators.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .cochains import (
    CochainNormContext,
    EuclideanNorm,
    TwistedCochain,
    average_M,
    codifferential_delta,
    delta_cochain,
    differential_d,
    full_sum_norm_power,
    localize,
    project_PL,
)
from .constants import (
    CROSSCHECK_CONSISTENT,
    CROSSCHECK_INCONSISTENT,
    CROSSCHECK_UNINFORMATIVE,
    RANK_TOL,
    VERDICT_PASS,
)
from .errors import CochainError, DegreeOverflow
from .spectral import SpectralReport, kappa2, link_graph

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class CochainBasis:
    degree: int
    cochains: tuple[TwistedCochain, ...]
    # representative values of every basis cochain, one column each
    coordinates: np.ndarray
    # per-coordinate weight of the inner product
    weights: np.ndarray
    gram: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.cochains)

    def combine(self, coefficients: np.ndarray) -> TwistedCochain:
        coefficients = np.asarray(coefficients, dtype=float)
        values = np.tensordot(coefficients, np.stack([b.values for b in self.cochains]), axes=1)
        return TwistedCochain(self.degree, values, alternating=True, twisted=True)

    def coordinates_of(self, f: TwistedCochain, ctx: CochainNormContext) -> np.ndarray:
        """Coefficients of ``f`` in this basis; raises if f is not in the span."""
        target = f.values[ctx.space(self.degree).rep_index].ravel()
        if self.dimension == 0:
            if np.abs(target).max(initial=0.0) > 0:
                raise CochainError("cochain is not in the span of an empty basis")
            return np.zeros(0)
        coef, *_ = scipy.linalg.lstsq(self.coordinates, target)
        residual = np.abs(self.coordinates @ coef - target).max(initial=0.0)
        if residual > 1e-8 * max(1.0, float(np.abs(target).max())):
            raise CochainError(f"cochain is not in L({self.degree}), residual {residual:.3e}")
        return coef

    def cholesky(self) -> np.ndarray:
        return scipy.linalg.cholesky(self.gram, lower=True)


def build_basis(ctx: CochainNormContext, k: int, rank_tol: float = RANK_TOL) -> CochainBasis:
    """
    Basis of L(k) from P_L images of delta cochains at the representatives,
    thinned to an independent subset by pivoted QR.
    """
    kctx = ctx.at(k)
    space = kctx.space()
    d = ctx.dim
    weights = np.repeat(space.rep_weight, d)
    candidates = []
    for idx in space.rep_index:
        for i in range(d):
            e = np.zeros(d)
            e[i] = 1.0
            candidates.append(project_PL(delta_cochain(kctx, space.simplexes[idx], e), kctx))

    chosen: list[int] = []
    if candidates:
        coords = np.column_stack([f.values[space.rep_index].ravel() for f in candidates])
        _, r, piv = scipy.linalg.qr(coords, mode="economic", pivoting=True)
        diag = np.abs(np.diag(r))
        if diag.size:
            # candidates are images of unit delta cochains
            rank = int(np.sum(diag > rank_cutoff(float(diag[0]), rank_tol)))
            chosen = sorted(int(i) for i in piv[:rank])

    cochains = tuple(candidates[i] for i in chosen)
    if cochains:
        coords = np.column_stack([f.values[space.rep_index].ravel() for f in cochains])
    else:
        coords = np.zeros((len(weights), 0))
    gram = coords.T @ (weights[:, None] * coords)
    logger.debug("L(%d): %d candidates, dimension %d", k, len(candidates), len(cochains))
    return CochainBasis(k, cochains, coords, weights, gram)


def build_bases(ctx: CochainNormContext, rank_tol: float = RANK_TOL) -> list[CochainBasis]:
    return [build_basis(ctx, k, rank_tol) for k in range(ctx.n + 1)]


def expected_dimension(ctx: CochainNormContext, k: int) -> int:
    """
    Σ over unordered orbit representatives of the rank of the sign-twisted
    stabilizer projector (1/|H|) Σ_{g∈H} sgn(g|σ) π_g.
    """
    mats = ctx.representation.matrices
    total = 0
    for stab in ctx.orbits(k).setwise_stabilizers:
        if ctx.dim == 0:
            continue
        projector = sum(sign * mats[g] for g, sign in stab) / len(stab)
        total += int(round(float(np.trace(projector))))
    return total


def cross_gram(dual_basis: CochainBasis, basis: CochainBasis) -> np.ndarray:
    """K[i, j] = ⟨b̄_i, b_j⟩ between a contragredient basis and a basis."""
    return dual_basis.coordinates.T @ (basis.weights[:, None] * basis.coordinates)


# --------------------------------------------------------------
# Operators in coordinates
# --------------------------------------------------------------
def matrix_d(ctx: CochainNormContext, k: int, bases: list[CochainBasis]) -> np.ndarray:
    """Coordinates of d: L(k) → L(k+1) in the given bases."""
    if k + 1 > ctx.n:
        raise DegreeOverflow(f"d_{k} leaves a {ctx.n}-complex")
    low, high = bases[k], bases[k + 1]
    if low.dimension == 0 or high.dimension == 0:
        return np.zeros((high.dimension, low.dimension))
    rep_index = ctx.space(k + 1).rep_index
    images = np.column_stack(
        [differential_d(b, ctx.at(k)).values[rep_index].ravel() for b in low.cochains]
    )
    coef, *_ = scipy.linalg.lstsq(high.coordinates, images)
    return coef


def delta_by_adjoint(
    ctx: CochainNormContext,
    k: int,
    bases: list[CochainBasis],
    dual_bases: list[CochainBasis],
) -> np.ndarray:
    """
    δ: L̄(k+1) → L̄(k) solved from ⟨δφ, ψ⟩ = ⟨φ, dψ⟩, i.e. K_kᵀ X = D_kᵀ K_{k+1}ᵀ.
    """
    dk = matrix_d(ctx, k, bases)
    low = cross_gram(dual_bases[k], bases[k])
    high = cross_gram(dual_bases[k + 1], bases[k + 1])
    if low.size == 0 or high.size == 0:
        return np.zeros((dual_bases[k].dimension, dual_bases[k + 1].dimension))
    return scipy.linalg.solve(low.T, dk.T @ high.T)


def delta_pointwise(
    ctx: CochainNormContext, k: int, dual_bases: list[CochainBasis]
) -> np.ndarray:
    """Coordinates of the pointwise δ on the contragredient bases, degree k+1 → k."""
    dual = ctx.dual()
    low, high = dual_bases[k], dual_bases[k + 1]
    if low.dimension == 0 or high.dimension == 0:
        return np.zeros((low.dimension, high.dimension))
    columns = [
        low.coordinates_of(codifferential_delta(b, dual.at(k + 1)), dual)
        for b in high.cochains
    ]
    return np.column_stack(columns)


def whitened_d(ctx: CochainNormContext, k: int, bases: list[CochainBasis]) -> np.ndarray:
    """d_k in orthonormal coordinates: L_{k+1}ᵀ D L_k^{-ᵀ} with G = LLᵀ."""
    dk = matrix_d(ctx, k, bases)
    if dk.size == 0:
        return dk
    low, high = bases[k].cholesky(), bases[k + 1].cholesky()
    right = scipy.linalg.solve_triangular(low, np.eye(low.shape[0]), lower=True)
    return high.T @ dk @ right.T


def _singular_values(matrix: np.ndarray) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros(0)
    return scipy.linalg.svdvals(matrix)


def rank_cutoff(largest: float, rank_tol: float = RANK_TOL) -> float:
    """Relative threshold with an absolute floor at the unit scale of the bases."""
    return rank_tol * max(largest, 1.0)


def numerical_rank(matrix: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    svals = _singular_values(matrix)
    if svals.size == 0:
        return 0
    return int(np.sum(svals > rank_cutoff(float(svals[0]), rank_tol)))


def _gap(matrix: np.ndarray, rank_tol: float) -> dict:
    svals = _singular_values(matrix)
    if svals.size == 0 or svals[0] == 0:
        return {"largest": None, "smallest_kept": None, "largest_dropped": None}
    cutoff = rank_cutoff(float(svals[0]), rank_tol)
    kept = svals[svals > cutoff]
    dropped = svals[svals <= cutoff]
    return {
        "largest": float(svals[0]),
        "smallest_kept": float(kept.min()) if kept.size else None,
        "largest_dropped": float(dropped.max()) if dropped.size else None,
    }


def kernel_basis(
    ctx: CochainNormContext,
    k: int,
    bases: list[CochainBasis],
    rank_tol: float = RANK_TOL,
) -> list[TwistedCochain]:
    """Cochains spanning ker d_k, orthonormal in the weighted inner product."""
    basis = bases[k]
    if basis.dimension == 0:
        return []
    lower = basis.cholesky()
    if k >= ctx.n:
        null = np.eye(basis.dimension)
    else:
        dk = whitened_d(ctx, k, bases)
        if dk.size == 0:
            null = np.eye(basis.dimension)
        else:
            rank = numerical_rank(dk, rank_tol)
            _, _, vh = scipy.linalg.svd(dk)
            null = vh[rank:].T
    coefs = scipy.linalg.solve_triangular(lower.T, null, lower=False)
    return [basis.combine(coefs[:, j]) for j in range(coefs.shape[1])]


# --------------------------------------------------------------
# Reports
# --------------------------------------------------------------
@dataclass
class CohomologyReport:
    cochain_dims: list[int]
    ranks: list[int]
    cohomology_dims: list[int]
    singular_gaps: list[dict]
    euler_chains: int
    euler_cohomology: int
    delta_lower_bound: float | None = None
    kernel_d1_dim: int | None = None
    predicted_positive: bool | None = None
    criterion_verdict: str | None = None
    crosscheck: str | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def h0(self) -> int:
        return self.cohomology_dims[0]

    @property
    def h1(self) -> int | None:
        return self.cohomology_dims[1] if len(self.cohomology_dims) > 1 else None

    @property
    def rank_d0(self) -> int:
        return self.ranks[0] if self.ranks else 0

    def to_dict(self) -> dict:
        return {
            "cochain_dims": list(self.cochain_dims),
            "ranks": list(self.ranks),
            "cohomology_dims": list(self.cohomology_dims),
            "h0": self.h0,
            "h1": self.h1,
            "rank_d0": self.rank_d0,
            "kernel_d1_dim": self.kernel_d1_dim,
            "singular_gaps": list(self.singular_gaps),
            "euler_chains": self.euler_chains,
            "euler_cohomology": self.euler_cohomology,
            "delta_lower_bound": self.delta_lower_bound,
            "predicted_positive": self.predicted_positive,
            "criterion_verdict": self.criterion_verdict,
            "crosscheck": self.crosscheck,
            "notes": list(self.notes),
        }


def cohomology_dimensions(
    ctx: CochainNormContext,
    bases: list[CochainBasis] | None = None,
    rank_tol: float = RANK_TOL,
) -> CohomologyReport:
    """dim H^k = dim L(k) − rank d_k − rank d_{k−1} for every k ≤ n."""
    bases = bases if bases is not None else build_bases(ctx, rank_tol)
    n = ctx.n
    dims = [b.dimension for b in bases]
    whitened = [whitened_d(ctx, k, bases) for k in range(n)]
    ranks = [numerical_rank(m, rank_tol) for m in whitened]
    padded = [0] + ranks + [0]
    h = [dims[k] - padded[k + 1] - padded[k] for k in range(n + 1)]
    report = CohomologyReport(
        cochain_dims=dims,
        ranks=ranks,
        cohomology_dims=h,
        singular_gaps=[_gap(m, rank_tol) for m in whitened],
        euler_chains=sum((-1) ** k * x for k, x in enumerate(dims)),
        euler_cohomology=sum((-1) ** k * x for k, x in enumerate(h)),
    )
    for k, gap in enumerate(report.singular_gaps):
        kept = gap["smallest_kept"]
        if kept is not None and kept < 1e3 * rank_tol * gap["largest"]:
            logger.warning("d_%d has a singular value %.3e close to the rank threshold", k, kept)
    if n >= 2:
        report.kernel_d1_dim = dims[1] - ranks[1]
    logger.debug("dims L=%s, ranks=%s, H=%s", dims, ranks, h)
    return report


def delta_lower_bound(
    ctx: CochainNormContext,
    bases: list[CochainBasis] | None = None,
    rank_tol: float = RANK_TOL,
) -> float | None:
    """
    Smallest singular value of the Hilbert adjoint of d₀ restricted to ker d₁.

    Positive exactly when im d₀ = ker d₁. Returns None when ker d₁ = 0, where
    the bound holds vacuously.
    """
    bases = bases if bases is not None else build_bases(ctx, rank_tol)
    if ctx.n < 1 or bases[1].dimension == 0:
        return None
    if ctx.n >= 2:
        d1 = whitened_d(ctx, 1, bases)
        if d1.size:
            rank = numerical_rank(d1, rank_tol)
            _, _, vh = scipy.linalg.svd(d1)
            null = vh[rank:].T
        else:
            null = np.eye(bases[1].dimension)
    else:
        null = np.eye(bases[1].dimension)
    if null.shape[1] == 0:
        return None
    d0 = whitened_d(ctx, 0, bases)
    if d0.size == 0:
        return 0.0
    restricted = d0.T @ null
    if restricted.shape[1] > restricted.shape[0]:
        return 0.0
    return float(_singular_values(restricted).min())


def h1_dimension(
    ctx: CochainNormContext,
    spectral: SpectralReport | None = None,
    rank_tol: float = RANK_TOL,
) -> CohomologyReport:
    bases = build_bases(ctx, rank_tol)
    report = cohomology_dimensions(ctx, bases, rank_tol)
    report.delta_lower_bound = delta_lower_bound(ctx, bases, rank_tol)
    if spectral is not None:
        report.criterion_verdict = spectral.verdict
        report.crosscheck = theorem_crosscheck(spectral, report)
        if spectral.kappa2_max is not None:
            report.predicted_positive = bool(
                spectral.kappa2_max**-2 - spectral.bound**2 / 2 > 0
            )
    return report


def theorem_crosscheck(spectral: SpectralReport, cohomology: CohomologyReport) -> str:
    """Criterion PASS must come with H¹ = 0; any other verdict predicts nothing."""
    if spectral.verdict != VERDICT_PASS:
        return CROSSCHECK_UNINFORMATIVE
    return CROSSCHECK_CONSISTENT if cohomology.h1 == 0 else CROSSCHECK_INCONSISTENT


# --------------------------------------------------------------
# Per-link inequality
# --------------------------------------------------------------
def _finite(x: float) -> float | None:
    return None if math.isinf(x) else float(x)


@dataclass
class LinkInequality:
    vertex: str
    kappa2: float
    factor: float
    uniform_asserted: bool
    worst_slack_euclidean: float = math.inf
    worst_slack_uniform: float = math.inf

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "kappa2": self.kappa2,
            "factor": self.factor,
            "uniform_asserted": self.uniform_asserted,
            "worst_slack_euclidean": _finite(self.worst_slack_euclidean),
            "worst_slack_uniform": _finite(self.worst_slack_uniform),
        }


@dataclass
class InequalityReport:
    samples: int
    bound: float
    links: list[LinkInequality]
    witnesses: list[dict]

    @property
    def holds(self) -> bool:
        return not self.witnesses

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "bound": self.bound,
            "holds": self.holds,
            "links": [lk.to_dict() for lk in self.links],
            "witnesses": list(self.witnesses),
        }


def _link_sides(
    f: TwistedCochain, tau, ctx: CochainNormContext, kappa: float, bound: float
) -> tuple[float, float]:
    """Both sides of κ⁻²‖Mf_τ‖² + Q_τ(f_τ) ≥ C⁻²(κ⁻² − C²/2)‖f_τ‖², full-sum link norms."""
    local, lctx = localize(f, tau, ctx)
    n = ctx.n
    f_sq = full_sum_norm_power(local, lctx)
    m_sq = full_sum_norm_power(average_M(local, lctx), lctx)
    df_sq = full_sum_norm_power(differential_d(local, lctx), lctx.at(1))
    q = df_sq - (n - 1) / 2 * f_sq
    lhs = kappa**-2 * m_sq + q
    rhs = (kappa**-2 - bound**2 / 2) * f_sq / bound**2
    return lhs, rhs


def per_link_inequality_check(
    ctx: CochainNormContext,
    samples: int = 50,
    rng: np.random.Generator | None = None,
    bases: list[CochainBasis] | None = None,
    tol: float = 1e-9,
    rank_tol: float = RANK_TOL,
) -> InequalityReport:
    """
    Check the per-link inequality on ker d₁ samples with Euclidean and uniform
    coefficient norms. The uniform version is only asserted where κ⁻² > C²/2.
    """
    if ctx.n != 2:
        raise CochainError("per-link inequality needs a 2-dimensional complex")
    rng = rng if rng is not None else np.random.default_rng(0)
    bases = bases if bases is not None else build_bases(ctx, rank_tol)
    kernel = kernel_basis(ctx, 1, bases, rank_tol)
    pool = list(kernel)
    if kernel:
        for _ in range(max(samples - len(kernel), 0)):
            coef = rng.standard_normal(len(kernel))
            coef /= np.linalg.norm(coef)
            pool.append(
                TwistedCochain(
                    1,
                    sum(c * f.values for c, f in zip(coef, kernel)),
                    alternating=True,
                    twisted=True,
                )
            )
    pool = pool[:samples]

    bound = ctx.representation.bound
    euclid = ctx.at(1).with_p(2.0).with_norm(EuclideanNorm())
    uniform = euclid.uniform()
    links, witnesses = [], []
    for tau in ctx.orbits(0).representatives:
        kappa = kappa2(link_graph(ctx.complex, tau[0]))
        factor = kappa**-2 - bound**2 / 2
        entry = LinkInequality(
            vertex=ctx.complex.labels[tau[0]],
            kappa2=kappa,
            factor=factor,
            uniform_asserted=factor > 0,
        )
        for i, f in enumerate(pool):
            for label, context in (("euclidean", euclid), ("uniform", uniform)):
                lhs, rhs = _link_sides(f, tau, context, kappa, bound)
                slack = lhs - rhs
                scale = max(abs(lhs), abs(rhs), 1.0)
                if label == "euclidean":
                    entry.worst_slack_euclidean = min(entry.worst_slack_euclidean, slack)
                else:
                    entry.worst_slack_uniform = min(entry.worst_slack_uniform, slack)
                asserted = label == "euclidean" or entry.uniform_asserted
                if asserted and slack < -tol * scale:
                    witnesses.append(
                        {"sample": i, "vertex": entry.vertex, "norm": label, "lhs": lhs, "rhs": rhs}
                    )
        links.append(entry)
    if witnesses:
        logger.warning("per-link inequality fails at %d places", len(witnesses))
    return InequalityReport(samples=len(pool), bound=bound, links=links, witnesses=witnesses)
