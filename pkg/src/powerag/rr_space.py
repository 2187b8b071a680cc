"""Bases of Riemann-Roch spaces L(a P_inf - sum m_i P_i).

Unconstrained spaces use the pole-ordered monomial basis.  Vanishing
conditions at affine places are imposed as linear functionals (the first
``m_i`` local expansion coefficients at ``P_i``) on that basis, and the
constrained basis is the canonical kernel basis of those functionals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ff_linalg import rank, right_kernel_basis, solve_any
from .function_field import FunctionElement, FunctionField, Place


class MembershipError(ValueError):
    """A function does not lie in the requested Riemann-Roch space."""


@dataclass(frozen=True)
class SpaceDescriptor:
    """The divisor a*P_inf - sum(m * P) over the listed (place, m) pairs."""

    a: int
    constraints: tuple[tuple[Place, int], ...] = ()

    def __post_init__(self):
        seen = set()
        for P, m in self.constraints:
            if P.is_infinity:
                raise ValueError("constraint places must be affine")
            if m < 1:
                raise ValueError("multiplicities must be positive")
            if P in seen:
                raise ValueError(f"duplicate constraint place {P}")
            seen.add(P)

    @classmethod
    def uniform(cls, a: int, places, mult: int) -> SpaceDescriptor:
        """a*P_inf - mult*(sum of places)."""
        if mult == 0:
            return cls(a)
        return cls(a, tuple((P, mult) for P in places))

    @property
    def degree(self) -> int:
        return self.a - sum(m for _, m in self.constraints)


@dataclass(eq=False)
class RRBasis:
    """Basis of L(A); row k of ``coeffs`` holds the k-th element's
    coefficients on the monomial basis of L(a P_inf)."""

    space: SpaceDescriptor
    ff: FunctionField
    coeffs: np.ndarray
    _elements: list | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return self.coeffs.shape[0]

    @property
    def elements(self) -> list[FunctionElement]:
        if self._elements is None:
            self._elements = [self.ff.from_vector(row) for row in self.coeffs]
        return self._elements

    def combine(self, vec) -> FunctionElement:
        """beta_A . vec."""
        vec = np.asarray(vec)
        if len(vec) != len(self):
            raise ValueError("coordinate vector has the wrong length")
        if len(self) == 0:
            return self.ff.zero()
        return self.ff.from_vector(self.ff.field.matmul(vec[None, :], self.coeffs)[0])


def constraint_functionals(ff: FunctionField, space: SpaceDescriptor) -> np.ndarray:
    """Rows: expansion coefficients 0..m-1 at each constrained place,
    applied to the monomial basis of L(a P_inf)."""
    dim = ff.one_point_dim(space.a)
    if not space.constraints or dim == 0:
        return np.zeros((0, dim), dtype=ff.field.dtype)
    places = tuple(P for P, _ in space.constraints)
    prec = max(m for _, m in space.constraints)
    table = ff.expansion_table(places, prec, space.a)  # (dim, places, prec)
    rows = [table[:, i, :m].T for i, (_, m) in enumerate(space.constraints)]
    return np.concatenate(rows, axis=0)


def basis(ff: FunctionField, space: SpaceDescriptor) -> RRBasis:
    """Canonical basis of L(space); cached per backend."""
    hit = ff.basis_cache.get(space)
    if hit is not None:
        return hit
    F = ff.field
    dim = ff.one_point_dim(space.a)
    if dim == 0:
        coeffs = np.zeros((0, 0), dtype=F.dtype)
    elif not space.constraints:
        coeffs = np.eye(dim, dtype=F.dtype)
    else:
        coeffs = right_kernel_basis(F, constraint_functionals(ff, space)).T.copy()
    out = RRBasis(space, ff, coeffs)
    with ff._lock:
        ff.basis_cache[space] = out
    return out


def dimension(ff: FunctionField, space: SpaceDescriptor) -> int:
    """l(A).  Uses l(A) = deg A - g + 1 where Riemann-Roch makes it exact
    (deg A >= 2g - 1) and 0 for negative degree; otherwise a rank count."""
    deg = space.degree
    if deg < 0:
        return 0
    if deg >= 2 * ff.genus - 1:
        return deg - ff.genus + 1
    if not space.constraints:
        return ff.one_point_dim(space.a)
    hit = ff.basis_cache.get(space)
    if hit is not None:
        return len(hit)
    return ff.one_point_dim(space.a) - rank(ff.field, constraint_functionals(ff, space))


def coords(h: FunctionElement, B: RRBasis) -> np.ndarray:
    """The vector v with beta_A . v = h."""
    a = B.space.a
    pole = h.pole_order()
    if pole is not None and pole > a:
        raise MembershipError(f"pole order {pole} exceeds {a}")
    if h.is_zero():
        return np.zeros(len(B), dtype=h.field.dtype)
    return coords_of_vector(h.to_vector(a), B)


def coords_of_vector(vec: np.ndarray, B: RRBasis) -> np.ndarray:
    """Like :func:`coords` for a function given by its monomial coefficients."""
    F = B.ff.field
    if not B.space.constraints:
        if len(vec) != len(B):
            raise ValueError("coefficient vector has the wrong length")
        return np.asarray(vec, dtype=F.dtype)
    if len(B) == 0:
        if np.any(vec):
            raise MembershipError("space is {0}")
        return np.zeros(0, dtype=F.dtype)
    sol = solve_any(F, B.coeffs.T, vec)
    if sol is None:
        raise MembershipError("vanishing conditions not met")
    return sol


def mult_matrix(p: FunctionElement, B: SpaceDescriptor, A: SpaceDescriptor) -> np.ndarray:
    """p_{B,A}: column i holds the coordinates of p * a_i in beta_B."""
    ff = p.ff
    bA = basis(ff, A)
    bB = basis(ff, B)
    F = ff.field
    out = np.zeros((len(bB), len(bA)), dtype=F.dtype)
    if len(bA) == 0:
        return out
    pole = p.pole_order()
    if pole is None:
        return out
    dense = ff.mult_matrix_dense(p, A.a, max(B.a, pole + A.a))
    prods = F.matmul(dense, bA.coeffs.T)  # monomial coefficients of p*a_i
    dimB = ff.one_point_dim(B.a)
    for i in range(len(bA)):
        col = prods[:, i]
        if np.any(col[dimB:]):
            raise MembershipError(f"column {i}: pole order of p*a_i exceeds {B.a}")
        try:
            out[:, i] = coords_of_vector(col[:dimB], bB)
        except MembershipError as exc:
            raise MembershipError(f"column {i}: {exc}") from None
    return out
