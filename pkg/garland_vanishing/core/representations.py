"""
Finite-dimensional real representations of a closed permutation group.

Matrices are stored as one array of shape ``(|G|, d, d)`` aligned with
``group.elements``.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
import scipy.linalg

from .constants import HOMOMORPHISM_TOL, RELATION_TOL, SINGULAR_TOL
from .errors import (
    DimensionMismatch,
    InconsistentRelations,
    NotOrthogonal,
    RepresentationError,
    Singular,
)
from .group_action import Group, permutation_sign

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Representation:
    group: Group
    dim: int
    matrices: np.ndarray
    name: str = "custom"

    def matrix(self, i: int) -> np.ndarray:
        return self.matrices[i]

    @cached_property
    def is_orthogonal(self) -> bool:
        eye = np.eye(self.dim)
        return all(
            np.abs(m.T @ m - eye).max(initial=0.0) <= HOMOMORPHISM_TOL for m in self.matrices
        )

    @cached_property
    def bound(self) -> float:
        return uniform_bound(self)

    def restrict(self, indices: Sequence[int]) -> "Representation":
        """Restriction to the subgroup on ``indices`` of the parent group."""
        chosen = sorted(set(indices))
        return Representation(
            group=self.group.subgroup(chosen),
            dim=self.dim,
            matrices=self.matrices[chosen],
            name=f"{self.name}|restricted",
        )


@dataclass(frozen=True, eq=False)
class ContragredientRepresentation(Representation):
    base: Representation | None = None

    def restrict(self, indices: Sequence[int]) -> "ContragredientRepresentation":
        restricted = super().restrict(indices)
        return ContragredientRepresentation(
            group=restricted.group,
            dim=self.dim,
            matrices=restricted.matrices,
            name=restricted.name,
            base=self.base.restrict(indices) if self.base is not None else None,
        )


def _check_invertible(matrices: np.ndarray) -> None:
    for m in matrices:
        if m.size and scipy.linalg.svdvals(m).min() <= SINGULAR_TOL:
            raise Singular("representation matrix is singular")


def check_homomorphism(
    rep: Representation, samples: int = 100, rng: np.random.Generator | None = None
) -> float:
    """Largest ‖π(gh) − π(g)π(h)‖ over random pairs, including the identity check."""
    rng = rng if rng is not None else np.random.default_rng(0)
    worst = float(np.abs(rep.matrices[0] - np.eye(rep.dim)).max(initial=0.0))
    order = rep.group.order
    for _ in range(samples):
        i, j = int(rng.integers(order)), int(rng.integers(order))
        gh = rep.group.product(i, j)
        diff = rep.matrices[gh] - rep.matrices[i] @ rep.matrices[j]
        worst = max(worst, float(np.abs(diff).max(initial=0.0)))
    return worst


def close_representation(
    group: Group,
    generator_matrices: Sequence[np.ndarray],
    dim: int | None = None,
    name: str = "custom",
) -> Representation:
    """
    Extend generator matrices to the whole group along its BFS tree.

    Every Cayley-graph edge is then re-checked, so two words for the same
    element that disagree raise ``InconsistentRelations``.
    """
    if len(generator_matrices) != len(group.generators):
        raise DimensionMismatch(
            f"{len(generator_matrices)} matrices for {len(group.generators)} generators"
        )
    gens = [np.atleast_2d(np.asarray(m, dtype=float)) for m in generator_matrices]
    if dim is None:
        if not gens:
            raise DimensionMismatch("dimension is required when there are no generators")
        dim = gens[0].shape[0]
    for m in gens:
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"expected {dim}x{dim} matrix, got {m.shape}")
    if gens:
        _check_invertible(np.stack(gens))
    if len(group.parents) != group.order:
        raise RepresentationError("group carries no BFS tree; close it with close_group")

    mats = np.zeros((group.order, dim, dim))
    mats[0] = np.eye(dim)
    for i in range(1, group.order):
        parent, pos = group.parents[i]
        mats[i] = gens[pos] @ mats[parent]

    for i, elem in enumerate(group.elements):
        for pos, gen_index in enumerate(group.generators):
            gen = group.elements[gen_index]
            j = group.index(tuple(gen[v] for v in elem))
            expected = gens[pos] @ mats[i]
            scale = max(1.0, float(np.abs(expected).max(initial=0.0)))
            if np.abs(mats[j] - expected).max(initial=0.0) > RELATION_TOL * scale:
                raise InconsistentRelations(
                    f"generator {pos} applied to element {i} disagrees with element {j}"
                )

    rep = Representation(group=group, dim=dim, matrices=mats, name=name)
    residual = check_homomorphism(rep)
    if residual > RELATION_TOL * max(1.0, rep.bound**2):
        raise InconsistentRelations(f"homomorphism residual {residual:.3e}")
    logger.debug("closed %s representation: dim=%d, C=%.6g", name, dim, rep.bound)
    return rep


def uniform_bound(rep: Representation) -> float:
    """C = max over the group of the operator 2-norm."""
    if rep.dim == 0:
        return 1.0
    return float(max(np.linalg.norm(m, 2) for m in rep.matrices))


def contragredient(rep: Representation) -> ContragredientRepresentation:
    try:
        mats = np.stack([np.linalg.inv(m).T for m in rep.matrices]) if rep.dim else rep.matrices
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    return ContragredientRepresentation(
        group=rep.group, dim=rep.dim, matrices=mats, name=f"{rep.name}*", base=rep
    )


def conjugate(rep: Representation, similarity: np.ndarray) -> Representation:
    """π_g = S ρ_g S⁻¹ for an orthogonal ρ."""
    s = np.atleast_2d(np.asarray(similarity, dtype=float))
    if s.shape != (rep.dim, rep.dim):
        raise DimensionMismatch(f"similarity of shape {s.shape} for dim {rep.dim}")
    if not rep.is_orthogonal:
        raise NotOrthogonal("conjugation expects an orthogonal representation")
    svals = scipy.linalg.svdvals(s) if rep.dim else np.ones(1)
    if svals.min() <= SINGULAR_TOL:
        raise Singular("similarity matrix is singular")
    s_inv = np.linalg.inv(s) if rep.dim else s
    mats = np.einsum("ij,gjk,kl->gil", s, rep.matrices, s_inv)
    out = Representation(group=rep.group, dim=rep.dim, matrices=mats, name=f"{rep.name}^S")
    cond = float(svals.max() / svals.min())
    if out.bound > cond * (1 + HOMOMORPHISM_TOL):
        raise RepresentationError(f"bound {out.bound} exceeds cond(S) = {cond}")
    return out


def sup_norm(rep: Representation, x: np.ndarray) -> float | np.ndarray:
    """‖x‖_E = max_g ‖π_g x‖₂; accepts one vector or a stack of row vectors."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != rep.dim:
        raise DimensionMismatch(f"vector of length {x.shape[-1]} for dim {rep.dim}")
    if rep.dim == 0:
        return 0.0 if x.ndim == 1 else np.zeros(x.shape[0])
    images = np.einsum("gij,...j->g...i", rep.matrices, x)
    return np.linalg.norm(images, axis=-1).max(axis=0)


# --------------------------------------------------------------
# Named representations
# --------------------------------------------------------------
def trivial_representation(group: Group, dim: int = 1) -> Representation:
    mats = np.broadcast_to(np.eye(dim), (group.order, dim, dim)).copy()
    return Representation(group=group, dim=dim, matrices=mats, name="trivial")


def sign_representation(group: Group) -> Representation:
    """g ↦ sign of g as a permutation of the vertex set."""
    mats = np.array([[[float(permutation_sign(g))]] for g in group.elements])
    return Representation(group=group, dim=1, matrices=mats, name="sign")


def permutation_representation(group: Group) -> Representation:
    """g ↦ permutation matrix with e_v ↦ e_{g(v)}."""
    n = group.degree
    mats = np.zeros((group.order, n, n))
    for i, g in enumerate(group.elements):
        mats[i, list(g), list(range(n))] = 1.0
    return Representation(group=group, dim=n, matrices=mats, name="permutation")
