"""One-point AG codes C(D, gamma*P_inf)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ff_linalg import rank
from .function_field import FunctionElement, FunctionField, Place
from .rr_space import RRBasis, SpaceDescriptor, basis


class CodeError(ValueError):
    pass


@dataclass(eq=False)
class AGCode:
    backend: FunctionField
    places: tuple[Place, ...]
    gamma: int
    message_basis: RRBasis
    generator: np.ndarray  # k x n, row i = evaluations of the i-th basis function
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def field(self):
        return self.backend.field

    @property
    def genus(self) -> int:
        return self.backend.genus

    @property
    def n(self) -> int:
        return len(self.places)

    @property
    def k(self) -> int:
        return len(self.message_basis)

    @property
    def dstar(self) -> int:
        return self.n - self.gamma

    @property
    def rho(self) -> int:
        """Pole bound increment of the received-word interpolator."""
        return self.n - self.gamma + 2 * self.genus - 1

    def message_function(self, msg) -> FunctionElement:
        msg = np.asarray(msg)
        if msg.shape != (self.k,):
            raise CodeError(f"message must have length {self.k}")
        return self.message_basis.combine(msg)

    def encode(self, msg) -> np.ndarray:
        msg = self.field.array(msg)
        if msg.shape != (self.k,):
            raise CodeError(f"message must have length {self.k}")
        return self.field.matmul(msg[None, :], self.generator)[0]

    def evaluate(self, f: FunctionElement) -> np.ndarray:
        return self.field.array([f.evaluate(P) for P in self.places])

    def describe(self) -> str:
        b = self.backend
        curve = "rational" if b.kind == "rational" else f"hermitian(q={b.q})"
        return (f"{curve} over {b.field} [modulus {b.field.modulus_str()}], genus {b.genus}: "
                f"n={self.n} k={self.k} gamma={self.gamma} d*={self.dstar}")


def code_make(backend: FunctionField, gamma: int, places="all") -> AGCode:
    """Build C(D, gamma*P_inf).

    ``places`` is ``"all"``, an int n (the first n places in canonical order)
    or an explicit sequence of affine places.
    """
    available = backend.places()
    if places == "all" or places is None:
        chosen = available
    elif isinstance(places, int):
        if places > len(available):
            raise CodeError(f"only {len(available)} places available, asked for {places}")
        chosen = available[:places]
    else:
        chosen = list(places)
        if len(set(chosen)) != len(chosen):
            raise CodeError("evaluation places must be distinct")
        for P in chosen:
            if P.is_infinity or not backend.on_curve(P):
                raise CodeError(f"{P} is not an affine place of the curve")
    n = len(chosen)
    g = backend.genus
    if not (gamma > 2 * g - 2 and gamma >= 0):
        raise CodeError(f"gamma={gamma} must exceed 2g-2={2 * g - 2}")
    if gamma >= n:
        raise CodeError(f"gamma={gamma} must be smaller than n={n}")
    mb = basis(backend, SpaceDescriptor(gamma))
    G = backend.evaluation_matrix(chosen, gamma)
    code = AGCode(backend, tuple(chosen), gamma, mb, G)
    if rank(backend.field, G) != code.k:
        raise CodeError("generator matrix is rank deficient")
    return code


def format_vector(vec) -> str:
    return ",".join(str(int(v)) for v in vec)


def parse_vector(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(tok) for tok in text.replace("\n", ",").split(",") if tok.strip()]
