"""
Twisted cochains and their operators.

A k-cochain is stored densely as an array of shape ``(|Σ(k)|, d)`` whose
rows follow ``complex.ordered(k)``. Norms and pairings only read the rows of
the orbit representatives; the remaining rows matter for twisted cochains,
where they are determined by the representatives.

Operators exposed here:
  * ``norm`` / ``norm_power`` / ``full_sum_norm_power`` / ``pairing``
  * ``alt``, ``project_twisted`` (P), ``project_PL`` (P_L = Alt∘P), ``project_PL_dual``
  * ``differential_d`` (raises degree), ``codifferential_delta`` (pointwise formula)
  * ``localize``, ``restrict``, ``average_M``, ``q_form``
  * ``adjoint_pairing_checks``, ``localization_identities``
"""

import logging
import math
from dataclasses import dataclass, field, replace
from itertools import permutations
from typing import Callable

import numpy as np
import scipy.sparse

from .complex_core import LinkComplex, Simplex, SimplicialComplex, link
from .constants import ADJOINT_TOL, HOMOMORPHISM_TOL, IDENTITY_TOL
from .errors import (
    DegreeMismatch,
    DegreeOverflow,
    DegreeUnderflow,
    DimensionMismatch,
    ExtensionIncoherent,
    NotASimplex,
)
from .group_action import Group, OrbitData, orbit_data, permutation_sign, pointwise_stabilizer
from .representations import Representation, contragredient, sup_norm

logger = logging.getLogger(__name__)


# --------------------------------------------------------------
# Coefficient norms
# --------------------------------------------------------------
class EuclideanNorm:
    name = "euclidean"

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return np.linalg.norm(values, axis=-1)


@dataclass(frozen=True, eq=False)
class UniformNorm:
    """‖x‖_E = max_g ‖π_g x‖₂; π acts isometrically for it."""

    representation: Representation
    name = "uniform"

    def __call__(self, values: np.ndarray) -> np.ndarray:
        return np.asarray(sup_norm(self.representation, values))


CoefficientNorm = Callable[[np.ndarray], np.ndarray]


# --------------------------------------------------------------
# Cochains
# --------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class TwistedCochain:
    degree: int
    values: np.ndarray
    alternating: bool = False
    twisted: bool = False

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def _combine(self, other: "TwistedCochain", op) -> "TwistedCochain":
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
        if other.values.shape != self.values.shape:
            raise DimensionMismatch(f"shapes {self.values.shape} and {other.values.shape}")
        return TwistedCochain(
            self.degree,
            op(self.values, other.values),
            alternating=self.alternating and other.alternating,
            twisted=self.twisted and other.twisted,
        )

    def __add__(self, other: "TwistedCochain") -> "TwistedCochain":
        return self._combine(other, np.add)

    def __sub__(self, other: "TwistedCochain") -> "TwistedCochain":
        return self._combine(other, np.subtract)

    def __neg__(self) -> "TwistedCochain":
        return replace(self, values=-self.values)

    def __rmul__(self, scalar: float) -> "TwistedCochain":
        return replace(self, values=float(scalar) * self.values)


@dataclass(frozen=True)
class DegreeSpace:
    """Index tables of Σ(k) for one context."""

    degree: int
    simplexes: tuple[Simplex, ...]
    index: dict
    weights: np.ndarray
    rep_index: np.ndarray
    rep_weight: np.ndarray
    orbit: np.ndarray
    transporter: np.ndarray
    perm_table: np.ndarray
    perm_signs: np.ndarray
    action: np.ndarray
    orbits: OrbitData

    @property
    def size(self) -> int:
        return len(self.simplexes)


@dataclass(frozen=True, eq=False)
class CochainNormContext:
    complex: SimplicialComplex
    group: Group
    representation: Representation
    degree: int = 0
    p: float = 2.0
    coefficient_norm: CoefficientNorm = field(default_factory=EuclideanNorm)
    representative_seed: int | None = None
    link: LinkComplex | None = None
    # representation-independent tables, shared by sibling contexts
    _shared: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.complex.dimension

    @property
    def dim(self) -> int:
        return self.representation.dim

    @property
    def ambient_dimension(self) -> int:
        return self.link.ambient.dimension if self.link is not None else self.n

    def at(self, k: int) -> "CochainNormContext":
        return self if k == self.degree else replace(self, degree=k)

    def with_p(self, p: float) -> "CochainNormContext":
        return replace(self, p=p)

    def with_norm(self, norm: CoefficientNorm) -> "CochainNormContext":
        return replace(self, coefficient_norm=norm)

    def uniform(self) -> "CochainNormContext":
        return self.with_norm(UniformNorm(self.representation))

    def rechoose_representatives(self, seed: int) -> "CochainNormContext":
        return replace(self, representative_seed=seed, _shared={})

    def dual(self) -> "CochainNormContext":
        """Same complex and action with the contragredient representation."""
        key = ("dual", id(self.representation))
        cached = self._shared.get(key)
        if cached is None or cached[0] is not self.representation:
            cached = (self.representation, contragredient(self.representation))
            self._shared[key] = cached
        rep = cached[1]
        norm = self.coefficient_norm
        if isinstance(norm, UniformNorm):
            norm = UniformNorm(contragredient(norm.representation))
        return replace(self, representation=rep, coefficient_norm=norm)

    def orbits(self, k: int | None = None) -> OrbitData:
        return self.space(self.degree if k is None else k).orbits

    def space(self, k: int | None = None) -> DegreeSpace:
        k = self.degree if k is None else k
        key = ("space", k)
        if key not in self._shared:
            self._shared[key] = _build_space(self, k)
        return self._shared[key]


def _build_space(ctx: CochainNormContext, k: int) -> DegreeSpace:
    cx, group = ctx.complex, ctx.group
    rng = (
        np.random.default_rng(ctx.representative_seed)
        if ctx.representative_seed is not None
        else None
    )
    orbits = orbit_data(cx, group, k, rng=rng)
    simplexes = cx.ordered(k)
    index = cx.ordered_index(k)
    weights = np.array([cx.weight(s) for s in simplexes], dtype=float)
    rep_index = np.array([index[r] for r in orbits.representatives], dtype=int)
    stab_sizes = np.array([len(s) for s in orbits.stabilizers], dtype=float)
    rep_weight = weights[rep_index] / (math.factorial(k + 1) * stab_sizes)
    orbit = np.array([orbits.orbit_of[s] for s in simplexes], dtype=int)
    transporter = np.array([orbits.transporter[s] for s in simplexes], dtype=int)
    perms = list(permutations(range(k + 1)))
    perm_table = np.array(
        [[index[tuple(s[a] for a in alpha)] for alpha in perms] for s in simplexes],
        dtype=int,
    ).reshape(len(simplexes), len(perms))
    perm_signs = np.array([permutation_sign(alpha) for alpha in perms], dtype=float)
    action = np.array(
        [[index[group.act(g, s)] for s in simplexes] for g in range(group.order)], dtype=int
    ).reshape(group.order, len(simplexes))
    return DegreeSpace(
        degree=k,
        simplexes=simplexes,
        index=index,
        weights=weights,
        rep_index=rep_index,
        rep_weight=rep_weight,
        orbit=orbit,
        transporter=transporter,
        perm_table=perm_table,
        perm_signs=perm_signs,
        action=action,
        orbits=orbits,
    )


def _space_for(f: TwistedCochain, ctx: CochainNormContext) -> DegreeSpace:
    if f.degree != ctx.degree:
        raise DegreeMismatch(f"cochain of degree {f.degree} in a degree-{ctx.degree} context")
    space = ctx.space()
    if f.values.shape != (space.size, ctx.dim):
        raise DimensionMismatch(
            f"values of shape {f.values.shape}, expected {(space.size, ctx.dim)}"
        )
    return space


# --------------------------------------------------------------
# Constructors and sweeps
# --------------------------------------------------------------
def zero_cochain(ctx: CochainNormContext) -> TwistedCochain:
    return TwistedCochain(
        ctx.degree, np.zeros((ctx.space().size, ctx.dim)), alternating=True, twisted=True
    )


def random_cochain(ctx: CochainNormContext, rng: np.random.Generator) -> TwistedCochain:
    return TwistedCochain(ctx.degree, rng.standard_normal((ctx.space().size, ctx.dim)))


def delta_cochain(
    ctx: CochainNormContext, simplex: Simplex, vector: np.ndarray
) -> TwistedCochain:
    space = ctx.space()
    if tuple(simplex) not in space.index:
        raise NotASimplex(f"{simplex} is not an ordered {ctx.degree}-simplex")
    values = np.zeros((space.size, ctx.dim))
    values[space.index[tuple(simplex)]] = vector
    return TwistedCochain(ctx.degree, values)


def from_representatives(
    ctx: CochainNormContext, rep_values: np.ndarray, tol: float = HOMOMORPHISM_TOL
) -> TwistedCochain:
    """Twisted extension f(h·r) = π_h f(r) of values given on Σ(k,Γ)."""
    space = ctx.space()
    rep_values = np.asarray(rep_values, dtype=float).reshape(len(space.rep_index), ctx.dim)
    mats = ctx.representation.matrices
    for r, stab in enumerate(space.orbits.stabilizers):
        v = rep_values[r]
        for s in stab:
            if np.abs(mats[s] @ v - v).max(initial=0.0) > tol * max(1.0, np.abs(v).max()):
                raise ExtensionIncoherent(
                    f"value at {space.orbits.representatives[r]} is not fixed by its stabilizer"
                )
    values = np.einsum("nij,nj->ni", mats[space.transporter], rep_values[space.orbit])
    return TwistedCochain(ctx.degree, values, twisted=True)


def twisting_defect(f: TwistedCochain, ctx: CochainNormContext) -> float:
    """max over g, σ of ‖f(g·σ) − π_g f(σ)‖."""
    space = _space_for(f, ctx)
    images = np.einsum("gij,nj->gni", ctx.representation.matrices, f.values)
    moved = f.values[space.action]
    return float(np.abs(moved - images).max(initial=0.0))


def alternation_defect(f: TwistedCochain, ctx: CochainNormContext) -> float:
    return float(np.abs(alt(f, ctx).values - f.values).max(initial=0.0))


def is_twisted(f: TwistedCochain, ctx: CochainNormContext, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(f.values).max(initial=0.0)))
    return twisting_defect(f, ctx) <= tol * scale


def is_alternating(f: TwistedCochain, ctx: CochainNormContext, tol: float = 1e-10) -> bool:
    scale = max(1.0, float(np.abs(f.values).max(initial=0.0)))
    return alternation_defect(f, ctx) <= tol * scale


# --------------------------------------------------------------
# Norms and pairing
# --------------------------------------------------------------
def norm_power(f: TwistedCochain, ctx: CochainNormContext) -> float:
    """‖f‖^p = Σ_{σ∈Σ(k,Γ)} ‖f(σ)‖^p ω(σ)/((k+1)!|Γ_σ|)."""
    space = _space_for(f, ctx)
    coeff = ctx.coefficient_norm(f.values[space.rep_index])
    return float(np.sum(coeff**ctx.p * space.rep_weight))


def norm(f: TwistedCochain, ctx: CochainNormContext) -> float:
    return norm_power(f, ctx) ** (1.0 / ctx.p)


def full_sum_norm_power(f: TwistedCochain, ctx: CochainNormContext) -> float:
    """(1/((k+1)!|Γ|)) Σ over all of Σ(k); equals ``norm_power`` for twisted f and invariant norms."""
    space = _space_for(f, ctx)
    coeff = ctx.coefficient_norm(f.values)
    scale = math.factorial(ctx.degree + 1) * ctx.group.order
    return float(np.sum(coeff**ctx.p * space.weights) / scale)


def pairing(phi: TwistedCochain, f: TwistedCochain, ctx: CochainNormContext) -> float:
    space = _space_for(f, ctx)
    _space_for(phi, ctx)
    r = space.rep_index
    return float(np.sum(np.einsum("ni,ni->n", phi.values[r], f.values[r]) * space.rep_weight))


# --------------------------------------------------------------
# Projections
# --------------------------------------------------------------
def alt(f: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    space = _space_for(f, ctx)
    values = np.einsum("a,nad->nd", space.perm_signs, f.values[space.perm_table])
    values /= math.factorial(ctx.degree + 1)
    return TwistedCochain(f.degree, values, alternating=True, twisted=f.twisted)


def stabilizer_averages(ctx: CochainNormContext) -> np.ndarray:
    """(1/|Γ_r|) Σ_{s∈Γ_r} π_s for every representative r, shape (R, d, d)."""
    mats = ctx.representation.matrices
    stabs = ctx.space().orbits.stabilizers
    if not stabs:
        return np.zeros((0, ctx.dim, ctx.dim))
    return np.stack([mats[list(s)].mean(axis=0) for s in stabs])


def project_twisted(f: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    """
    P: average the representative values over their stabilizers, then extend
    by twisting. Only the representative rows of ``f`` are read.
    """
    space = _space_for(f, ctx)
    averaged = np.einsum("oij,oj->oi", stabilizer_averages(ctx), f.values[space.rep_index])
    mats = ctx.representation.matrices
    values = np.einsum("nij,nj->ni", mats[space.transporter], averaged[space.orbit])
    return TwistedCochain(
        f.degree, values, alternating=f.alternating and f.twisted, twisted=True
    )


def project_PL(f: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    return alt(project_twisted(f, ctx), ctx)


def project_PL_dual(phi: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    """P̄_L: the same projection built from the contragredient."""
    return project_PL(phi, ctx.dual())


def adjoint_pairing_checks(
    ctx: CochainNormContext, rng: np.random.Generator | None = None, samples: int = 10
) -> dict:
    """
    Relative residuals of ⟨P_L f, φ⟩ = ⟨f, P̄_L φ⟩ and of the annihilator
    relations between the images and kernels of P_L and P̄_L.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    worst_adjoint = worst_annihilator = 0.0
    for _ in range(samples):
        f, phi = random_cochain(ctx, rng), random_cochain(ctx, rng)
        scale = math.sqrt(pairing(f, f, ctx) * pairing(phi, phi, ctx)) or 1.0
        lhs = pairing(project_PL(f, ctx), phi, ctx)
        rhs = pairing(f, project_PL_dual(phi, ctx), ctx)
        worst_adjoint = max(worst_adjoint, abs(lhs - rhs) / scale)

        in_image = project_PL(f, ctx)
        dual_kernel = phi - project_PL_dual(phi, ctx)
        kernel = f - project_PL(f, ctx)
        dual_image = project_PL_dual(phi, ctx)
        worst_annihilator = max(
            worst_annihilator,
            abs(pairing(dual_kernel, in_image, ctx)) / scale,
            abs(pairing(dual_image, kernel, ctx)) / scale,
        )
    return {
        "samples": samples,
        "pl_adjoint_residual": worst_adjoint,
        "annihilator_residual": worst_annihilator,
        "passed": max(worst_adjoint, worst_annihilator) <= 10 * ADJOINT_TOL,
    }


# --------------------------------------------------------------
# Differential and codifferential
# --------------------------------------------------------------
def _d_operator(ctx: CochainNormContext, k: int) -> scipy.sparse.csr_matrix:
    key = ("d", k)
    if key not in ctx._shared:
        low, high = ctx.space(k), ctx.space(k + 1)
        rows, cols, vals = [], [], []
        for m, sigma in enumerate(high.simplexes):
            for i in range(k + 2):
                rows.append(m)
                cols.append(low.index[sigma[:i] + sigma[i + 1 :]])
                vals.append((-1.0) ** i)
        ctx._shared[key] = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(high.size, low.size)
        )
    return ctx._shared[key]


def _delta_operator(ctx: CochainNormContext, k: int) -> scipy.sparse.csr_matrix:
    key = ("delta", k)
    if key not in ctx._shared:
        cx = ctx.complex
        low, high = ctx.space(k - 1), ctx.space(k)
        rows, cols, vals = [], [], []
        for m, tau in enumerate(low.simplexes):
            w_tau = cx.weight(tau)
            for coface in cx.cofaces(tau):
                (v,) = set(coface) - set(tau)
                sigma = (v,) + tau
                rows.append(m)
                cols.append(high.index[sigma])
                vals.append(cx.weight(sigma) / w_tau)
        ctx._shared[key] = scipy.sparse.csr_matrix(
            (vals, (rows, cols)), shape=(low.size, high.size)
        )
    return ctx._shared[key]


def differential_d(f: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    """dφ(σ) = Σ_i (−1)^i φ(σ_i)."""
    _space_for(f, ctx)
    if f.degree + 1 > ctx.n:
        raise DegreeOverflow(f"d of a degree-{f.degree} cochain on a {ctx.n}-complex")
    values = np.asarray(_d_operator(ctx, f.degree) @ f.values)
    return TwistedCochain(f.degree + 1, values, f.alternating, f.twisted)


def codifferential_delta(phi: TwistedCochain, ctx: CochainNormContext) -> TwistedCochain:
    """δφ(τ) = Σ_{v: v*τ∈Σ(k)} ω(v*τ)/ω(τ) · φ(v*τ)."""
    _space_for(phi, ctx)
    if phi.degree < 1:
        raise DegreeUnderflow("δ needs degree at least 1")
    values = np.asarray(_delta_operator(ctx, phi.degree) @ phi.values)
    return TwistedCochain(phi.degree - 1, values, phi.alternating, phi.twisted)


# --------------------------------------------------------------
# Links: localization, restriction, averages
# --------------------------------------------------------------
def link_context(ctx: CochainNormContext, base: Simplex, degree: int = 0) -> CochainNormContext:
    """Context on the link of ``base`` with Γ_τ and π restricted to it."""
    base = tuple(base)
    key = ("link", base, id(ctx.representation))
    cached = ctx._shared.get(key)
    if cached is None or cached[0] is not ctx.representation:
        if not ctx.complex.contains(base):
            raise NotASimplex(f"{base} is not a simplex")
        lk = link(ctx.complex, base)
        stab = pointwise_stabilizer(ctx.group, base)
        rep = ctx.representation.restrict(stab)
        inner = CochainNormContext(
            complex=lk.complex,
            group=rep.group,
            representation=rep,
            degree=0,
            p=ctx.p,
            coefficient_norm=ctx.coefficient_norm,
            link=lk,
        )
        cached = (ctx.representation, inner)
        ctx._shared[key] = cached
    return replace(cached[1].at(degree), p=ctx.p, coefficient_norm=ctx.coefficient_norm)


def localize(
    f: TwistedCochain, base: Simplex, ctx: CochainNormContext
) -> tuple[TwistedCochain, CochainNormContext]:
    """f_τ(σ) = f(τ*σ), a cochain of degree k−l−1 on the link of τ."""
    _space_for(f, ctx)
    degree = f.degree - len(base)
    if degree < 0:
        raise DegreeUnderflow(f"cannot localize degree {f.degree} at a {len(base) - 1}-simplex")
    lctx = link_context(ctx, base, degree)
    ambient = ctx.space()
    gather = [ambient.index[tuple(base) + s] for s in lctx.space().simplexes]
    return TwistedCochain(degree, f.values[gather], f.alternating, f.twisted), lctx


def restrict(
    f: TwistedCochain, base: Simplex, ctx: CochainNormContext
) -> tuple[TwistedCochain, CochainNormContext]:
    """f^τ(σ) = f(σ) for σ in the link of τ."""
    _space_for(f, ctx)
    if f.degree + len(base) > ctx.n:
        raise DegreeOverflow(f"degree {f.degree} does not fit the link of {base}")
    lctx = link_context(ctx, base, f.degree)
    ambient = ctx.space()
    gather = [ambient.index[s] for s in lctx.space().simplexes]
    return TwistedCochain(f.degree, f.values[gather], f.alternating, f.twisted), lctx


def average_M(f: TwistedCochain, lctx: CochainNormContext) -> TwistedCochain:
    """Weighted mean of f over the link, as a constant cochain."""
    space = _space_for(f, lctx)
    total = space.weights.sum()
    mean = space.weights @ f.values / total if total else np.zeros(lctx.dim)
    values = np.broadcast_to(mean, f.values.shape).copy()
    return TwistedCochain(f.degree, values, alternating=f.degree == 0, twisted=f.twisted)


def q_form(
    f: TwistedCochain, lctx: CochainNormContext, n: int | None = None, p: float | None = None
) -> float:
    """Q_τ(f) = ‖d_τ f‖^p_(1,p) − ((n−1)/2)‖f‖^p_(0,p) for a 0-cochain on a vertex link."""
    n = lctx.ambient_dimension if n is None else n
    lctx = lctx if p is None else lctx.with_p(p)
    if f.degree != 0:
        raise DegreeMismatch("Q is defined on 0-cochains of a vertex link")
    df = differential_d(f, lctx.at(0))
    return norm_power(df, lctx.at(1)) - (n - 1) / 2 * norm_power(f, lctx.at(0))


# --------------------------------------------------------------
# Local-to-global identities
# --------------------------------------------------------------
@dataclass
class IdentityResult:
    name: str
    anchor: str
    residual: float
    tolerance: float
    checked: int = 0
    detail: str = ""

    @property
    def status(self) -> str:
        if self.checked == 0:
            return "skipped"
        return "pass" if self.residual <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "max_residual": self.residual,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "detail": self.detail,
        }


class _Tracker:
    def __init__(self, name: str, anchor: str, ref: float, tol: float):
        self.result = IdentityResult(name, anchor, 0.0, tol)
        self.ref = ref

    def scalar(self, lhs: float, rhs: float) -> None:
        denom = max(abs(lhs), abs(rhs), self.ref) or 1.0
        self.result.residual = max(self.result.residual, abs(lhs - rhs) / denom)
        self.result.checked += 1

    def vector(self, lhs: np.ndarray, rhs: np.ndarray) -> None:
        denom = (
            max(float(np.abs(lhs).max(initial=0.0)), float(np.abs(rhs).max(initial=0.0)), self.ref)
            or 1.0
        )
        diff = float(np.abs(lhs - rhs).max(initial=0.0))
        self.result.residual = max(self.result.residual, diff / denom)
        self.result.checked += 1


def localization_identities(
    phi: TwistedCochain,
    ctx: CochainNormContext,
    tol: float = IDENTITY_TOL,
    kernel_tol: float = 1e-9,
) -> list[IdentityResult]:
    """
    Check the local-to-global relations for one φ ∈ L(k). The kernel-only
    relations are checked when ‖dφ‖ is negligible next to ‖φ‖.
    """
    k, n, q = phi.degree, ctx.n, ctx.p
    ref_vec = float(np.abs(phi.values).max(initial=0.0))
    phi_pow = norm_power(phi, ctx)
    ref = phi_pow
    vertex_reps = ctx.orbits(0).representatives
    out = []

    # δ_τ φ_τ = (−1)^{j+1} (δφ)_τ for j < k−1
    t = _Tracker(
        "localized_codifferential",
        "δ_τ φ_τ = (−1)^(j+1) (δφ)_τ for j < k−1",
        ref_vec,
        tol,
    )
    if k >= 2:
        dphi = codifferential_delta(phi, ctx)
        for j in range(k - 1):
            for tau in ctx.orbits(j).representatives:
                local, lctx = localize(phi, tau, ctx)
                lhs = codifferential_delta(local, lctx)
                rhs, _ = localize(dphi, tau, ctx.at(k - 1))
                t.vector(lhs.values, (-1) ** (j + 1) * rhs.values)
    out.append(t.result)

    # δφ(τ) = (−1)^k (n−k+1) φ⁰_τ and its norm identity, j = k−1
    tv = _Tracker(
        "codifferential_average",
        "δφ(τ) = (−1)^k (n−k+1) Mφ_τ for τ of degree k−1",
        ref_vec,
        tol,
    )
    tn = _Tracker(
        "codifferential_average_norm",
        "‖Mφ_τ‖^p = ω(τ)‖δφ(τ)‖^p / ((n−k+1)^(p−1) |Γ_τ|)",
        ref,
        tol,
    )
    if 1 <= k <= n:
        dphi = codifferential_delta(phi, ctx)
        low = ctx.at(k - 1)
        for tau in low.orbits().representatives:
            local, lctx = localize(phi, tau, ctx)
            avg = average_M(local, lctx)
            value = dphi.values[low.space().index[tau]]
            factor = n - k + 1
            tv.vector(value, (-1) ** k * factor * avg.values[0])
            coeff = float(ctx.coefficient_norm(value[None, :])[0])
            rhs = ctx.complex.weight(tau) * coeff**q / (factor ** (q - 1) * lctx.group.order)
            tn.scalar(norm_power(avg, lctx), rhs)
    out.extend([tv.result, tn.result])

    # (dφ)_τ = −d_τ φ_τ + φ^τ on vertex links
    t = _Tracker(
        "localized_differential",
        "(dφ)_τ = φ^τ − d_τ φ_τ for vertices τ",
        ref_vec,
        tol,
    )
    if 1 <= k and k + 1 <= n:
        dphi = differential_d(phi, ctx)
        for tau in vertex_reps:
            local, lctx = localize(phi, tau, ctx)
            restricted, _ = restrict(phi, tau, ctx)
            lhs, _ = localize(dphi, tau, ctx.at(k + 1))
            t.vector(lhs.values, restricted.values - differential_d(local, lctx).values)
    out.append(t.result)

    # link norms through the restricted group agree with the full sums
    t = _Tracker(
        "link_norm_full_sum",
        "‖f_τ‖^p = Σ_{Σ_τ(k)} ‖f_τ(σ)‖^p ω(τ*σ) / ((k+1)! |Γ_τ|)",
        ref,
        tol,
    )
    if k >= 1:
        for tau in vertex_reps:
            local, lctx = localize(phi, tau, ctx)
            ambient_w = np.array(
                [ctx.complex.weight(tuple(tau) + s) for s in lctx.space().simplexes]
            )
            coeff = ctx.coefficient_norm(local.values)
            full = np.sum(coeff**q * ambient_w) / (
                math.factorial(local.degree + 1) * lctx.group.order
            )
            t.scalar(norm_power(local, lctx), float(full))
    out.append(t.result)

    # (n−k)‖φ‖^p = Σ_τ ‖φ^τ‖^p
    t = _Tracker(
        "restriction_sum",
        "(n−k)‖f‖^p = Σ_{τ∈Σ(0,Γ)} ‖f^τ‖^p",
        ref,
        tol,
    )
    restricted_sum = 0.0
    if k + 1 <= n:
        for tau in vertex_reps:
            restricted, lctx = restrict(phi, tau, ctx)
            restricted_sum += norm_power(restricted, lctx)
        t.scalar((n - k) * phi_pow, restricted_sum)
    out.append(t.result)

    # (k+1)!‖φ‖^p = (k−j)! Σ_{τ∈Σ(j,Γ)} ‖φ_τ‖^p
    t = _Tracker(
        "localization_sum",
        "(k+1)! ‖f‖^p = (k−j)! Σ_{τ∈Σ(j,Γ)} ‖f_τ‖^p",
        ref,
        tol,
    )
    for j in range(k):
        total = sum(
            norm_power(*localize(phi, tau, ctx)) for tau in ctx.orbits(j).representatives
        )
        t.scalar(math.factorial(k + 1) * phi_pow, math.factorial(k - j) * total)
    out.append(t.result)

    local_sum = (
        sum(norm_power(*localize(phi, tau, ctx)) for tau in vertex_reps) if k >= 1 else 0.0
    )
    t = _Tracker(
        "combined_sum",
        "Σ_τ ‖f^τ‖^p = ((n−k)/(k+1)) Σ_τ ‖f_τ‖^p",
        ref,
        tol,
    )
    if 1 <= k and k + 1 <= n:
        t.scalar(restricted_sum, (n - k) / (k + 1) * local_sum)
    out.append(t.result)

    # kernel-only relations
    in_kernel = False
    if 1 <= k and k + 1 <= n:
        dphi = differential_d(phi, ctx)
        residual = float(np.abs(dphi.values).max(initial=0.0))
        in_kernel = residual <= kernel_tol * max(ref_vec, 1e-300)
    kernel_norms = _Tracker(
        "kernel_link_norms",
        "dφ = 0 ⇒ ‖d_τ φ_τ‖ = ‖φ^τ‖",
        ref,
        tol,
    )
    kernel_local = _Tracker(
        "kernel_localized_sum",
        "dφ = 0 ⇒ Σ_τ ‖d_τ φ_τ‖^p = ((n−k)/(k+1)) Σ_τ ‖φ_τ‖^p",
        ref,
        tol,
    )
    kernel_global = _Tracker(
        "kernel_global_sum",
        "dφ = 0 ⇒ Σ_τ ‖d_τ φ_τ‖^p = (n−k)‖φ‖^p",
        ref,
        tol,
    )
    kernel_degree_one = _Tracker(
        "kernel_degree_one_sum",
        "dφ = 0, k = 1 ⇒ Σ_τ ‖d_τ φ_τ‖^p = (n−1)‖φ‖^p",
        ref,
        tol,
    )
    q_sum_check = _Tracker(
        "q_form_sum",
        "dφ = 0, k = 1 ⇒ Σ_τ Q_τ(φ_τ) = 0",
        ref,
        tol,
    )
    if in_kernel:
        diff_sum = q_sum = 0.0
        for tau in vertex_reps:
            local, lctx = localize(phi, tau, ctx)
            restricted, rctx = restrict(phi, tau, ctx)
            d_local = norm_power(differential_d(local, lctx), lctx.at(k))
            kernel_norms.scalar(d_local, norm_power(restricted, rctx))
            diff_sum += d_local
            if k == 1:
                q_sum += q_form(local, lctx, n=n, p=q)
        kernel_local.scalar(diff_sum, (n - k) / (k + 1) * local_sum)
        kernel_global.scalar(diff_sum, (n - k) * phi_pow)
        if k == 1:
            kernel_degree_one.scalar(diff_sum, (n - 1) * phi_pow)
            q_sum_check.scalar(q_sum, 0.0)
    out.extend(
        [
            kernel_norms.result,
            kernel_local.result,
            kernel_global.result,
            kernel_degree_one.result,
            q_sum_check.result,
        ]
    )
    return out
