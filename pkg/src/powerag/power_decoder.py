"""Improved power decoding with multiplicity for one-point AG codes.

For a received word r the decoder builds an interpolator R with R(P_i) = r_i
and looks for functions phi_t (t = 1..ell) and psi_j (j = 0..s-1) such that

    phi_t - sum_{j <= min(t, s-1)} binom(t, j) psi_j R^(t-j)

is zero for t < s and vanishes to order s at every evaluation place for
t >= s.  With an error locator Lambda (multiplicity-s zeros at the error
positions) the choice phi_t = Lambda f^t, psi_j = Lambda (f - R)^j solves the
system, and the message is recovered as phi_1 / psi_0.

All function spaces involved are one-point spaces, possibly minus a multiple
of D = P_1 + ... + P_n, so everything is expressed in the pole-ordered
monomial bases of :mod:`powerag.function_field`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ag_code import AGCode
from .ff_linalg import PreparedSolver, right_kernel_basis, rref, solve_any
from .function_field import FunctionElement, vseries_mul
from .rr_space import SpaceDescriptor, basis, coords, dimension

log = logging.getLogger(__name__)

MODES = ("fixed", "iterative")


@dataclass(frozen=True)
class DecoderParams:
    ell: int
    s: int
    mode: str = "fixed"
    lam: int | None = None  # fixed mode only; None means s*radius_exact + g

    def __post_init__(self):
        if self.ell < 1 or not 1 <= self.s <= self.ell:
            raise ValueError(f"need 1 <= s <= ell, got ell={self.ell} s={self.s}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.lam is not None and self.lam < 0:
            raise ValueError("lambda must be non-negative")


@dataclass(eq=False)
class KeyMatrix:
    """The matrix U together with its block layout.

    ``col_blocks`` maps ``("V", t)`` / ``("W", j)`` to column ranges,
    ``row_blocks`` maps ``t`` to row ranges.  Rows for t >= s are the s*n
    expansion functionals (coefficient c at place i is row ``i*s + c`` of the
    block), so the realised row count can exceed ``theoretical_rows``.
    """

    matrix: np.ndarray
    lam: int
    ell: int
    s: int
    col_blocks: dict
    row_blocks: dict
    v_spaces: list
    w_spaces: list
    theoretical_rows: int

    @property
    def nu(self) -> int:
        return self.matrix.shape[1]

    @property
    def epsilon(self) -> int:
        return self.theoretical_rows

    def block(self, u, kind: str, idx: int) -> np.ndarray:
        lo, hi = self.col_blocks[(kind, idx)]
        return np.asarray(u)[lo:hi]


@dataclass
class DecodeOutcome:
    success: bool
    f: FunctionElement | None = None
    message: np.ndarray | None = None
    codeword: np.ndarray | None = None
    error_weight: int | None = None
    lam: int | None = None
    reason: str | None = None  # no_unique_kernel | extraction_failed | validation_failed
    tried: int = 0
    kernel_dim: int = 0

    def __str__(self) -> str:
        if self.success:
            return f"success (lambda={self.lam}, error weight {self.error_weight})"
        return f"decoding failure ({self.reason})"


def binom_mod(t: int, j: int, p: int) -> int:
    """binom(t, j) mod p via Lucas' theorem."""
    out = 1
    while t or j:
        tt, jj = t % p, j % p
        if jj > tt:
            return 0
        out = out * math.comb(tt, jj) % p
        t //= p
        j //= p
    return out


# -- interpolation --------------------------------------------------------------

def _interp_solver(code: AGCode) -> PreparedSolver:
    solver = code.cache.get("interp")
    if solver is None:
        M = code.backend.evaluation_matrix(code.places, code.gamma + code.rho).T
        solver = PreparedSolver(code.field, M)
        if solver.rank != code.n:
            raise RuntimeError(f"interpolation matrix has rank {solver.rank} < n={code.n}")
        code.cache["interp"] = solver
    return solver


def interpolator_vector(code: AGCode, r) -> np.ndarray:
    """Monomial coefficients (on L((gamma+rho) P_inf)) of the interpolator."""
    r = code.field.array(r)
    if r.shape != (code.n,):
        raise ValueError(f"received word must have length {code.n}")
    z = _interp_solver(code).solve(r)
    if z is None:
        raise RuntimeError("interpolation system inconsistent; backend is broken")
    return z


def interpolator(code: AGCode, r) -> FunctionElement:
    """R in L((gamma + rho) P_inf) with R(P_i) = r_i, free variables zeroed."""
    return code.backend.from_vector(interpolator_vector(code, r))


# -- the key matrix ---------------------------------------------------------------

def _layout(code: AGCode, ell: int, s: int, lam: int):
    """R-independent pieces of U, cached per (ell, s, lam)."""
    key = ("layout", ell, s, lam)
    hit = code.cache.get(key)
    if hit is not None:
        return hit
    ff, F = code.backend, code.field
    gamma, rho, n = code.gamma, code.rho, code.n
    v_spaces = [SpaceDescriptor(lam + t * gamma) for t in range(1, ell + 1)]
    w_spaces = [SpaceDescriptor.uniform(lam + j * (gamma + rho), code.places, j) for j in range(s)]
    w_bases = [basis(ff, W) for W in w_spaces]
    q_pole = [lam + t * (gamma + rho) for t in range(ell + 1)]

    col_blocks = {}
    pos = 0
    for t, V in enumerate(v_spaces, start=1):
        d = ff.one_point_dim(V.a)
        col_blocks[("V", t)] = (pos, pos + d)
        pos += d
    for j, B in enumerate(w_bases):
        col_blocks[("W", j)] = (pos, pos + len(B))
        pos += len(B)
    nu = pos

    row_blocks = {}
    pos = 0
    for t in range(1, ell + 1):
        size = ff.one_point_dim(q_pole[t]) if t < s else s * n
        row_blocks[t] = (pos, pos + size)
        pos += size

    # expansions at the evaluation places, truncated at order s
    E = ff.expansion_table(code.places, s, q_pole[ell])
    w_exp = []
    for j, B in enumerate(w_bases):
        dim_a = ff.one_point_dim(w_spaces[j].a)
        if len(B) == 0:
            w_exp.append(np.zeros((0, n, s), dtype=F.dtype))
            continue
        flat = E[:dim_a].reshape(dim_a, n * s)
        w_exp.append(F.matmul(B.coeffs, flat).reshape(len(B), n, s))

    theoretical = 0
    for t in range(1, ell + 1):
        Q = SpaceDescriptor(q_pole[t])
        if t < s:
            theoretical += dimension(ff, Q)
        else:
            QD = SpaceDescriptor.uniform(q_pole[t], code.places, s)
            theoretical += dimension(ff, Q) - dimension(ff, QD)

    out = dict(v_spaces=v_spaces, w_spaces=w_spaces, w_bases=w_bases, q_pole=q_pole,
               col_blocks=col_blocks, row_blocks=row_blocks, nu=nu, E=E, w_exp=w_exp,
               theoretical=theoretical)
    code.cache[key] = out
    return out


def build_key_matrix(code: AGCode, R, params: DecoderParams, lam: int) -> KeyMatrix:
    """Assemble U for the interpolator R (a FunctionElement or its coefficient
    vector on L((gamma+rho) P_inf)) at error-locator degree lam."""
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    ell, s = params.ell, params.s
    ff, F = code.backend, code.field
    n, p = code.n, code.field.p
    lay = _layout(code, ell, s, lam)
    if isinstance(R, FunctionElement):
        R_fun = R
        R_vec = R.to_vector(code.gamma + code.rho)
    else:
        R_vec = np.asarray(R)
        R_fun = ff.from_vector(R_vec)

    rows = lay["row_blocks"][ell][1]
    U = np.zeros((rows, lay["nu"]), dtype=F.dtype)
    cb, rb = lay["col_blocks"], lay["row_blocks"]

    # R^e as functions (only for the t < s rows) and as series at the places
    r_pow = {0: ff.one(), 1: R_fun}
    dimR = len(R_vec)
    r_ser = {}
    base_ser = F.matmul(R_vec[None, :], lay["E"][:dimR].reshape(dimR, n * s)).reshape(n, s)
    one = np.zeros((n, s), dtype=F.dtype)
    one[:, 0] = 1
    r_ser[0] = one
    for e in range(1, ell + 1):
        r_ser[e] = vseries_mul(F, r_ser[e - 1], base_ser)

    for t in range(1, ell + 1):
        r0, r1 = rb[t]
        c0, c1 = cb[("V", t)]
        dv = c1 - c0
        if t < s:
            U[r0:r0 + dv, c0:c1] = np.eye(dv, dtype=F.dtype)
        else:
            U[r0:r1, c0:c1] = lay["E"][:dv].reshape(dv, n * s).T
        for j in range(min(t, s - 1) + 1):
            b = binom_mod(t, j, p)
            w0, w1 = cb[("W", j)]
            if b == 0 or w1 == w0:
                continue
            coef = F.neg(b)
            e = t - j
            if t < s:
                if e not in r_pow:
                    r_pow[e] = r_pow[e - 1] * R_fun
                B = lay["w_bases"][j]
                a_j = lay["w_spaces"][j].a
                mul = ff.mult_matrix_dense(r_pow[e], a_j, lay["q_pole"][t])
                block = F.matmul(mul, B.coeffs.T)
            else:
                prod = vseries_mul(F, r_ser[e][None, :, :], lay["w_exp"][j])
                block = prod.reshape(w1 - w0, n * s).T
            U[r0:r0 + block.shape[0], w0:w1] = F.vmul(block, coef)

    return KeyMatrix(U, lam, ell, s, cb, rb, lay["v_spaces"], lay["w_spaces"], lay["theoretical"])


def special_solution(code: AGCode, km: KeyMatrix, f: FunctionElement, R: FunctionElement,
                     locator: FunctionElement) -> np.ndarray:
    """The vector u built from phi_t = Lambda f^t and psi_j = Lambda (f - R)^j."""
    ff = code.backend
    u = np.zeros(km.nu, dtype=code.field.dtype)
    for t in range(1, km.ell + 1):
        lo, hi = km.col_blocks[("V", t)]
        u[lo:hi] = coords(locator * f ** t, basis(ff, km.v_spaces[t - 1]))
    diff = f - R
    for j in range(km.s):
        lo, hi = km.col_blocks[("W", j)]
        u[lo:hi] = coords(locator * diff ** j, basis(ff, km.w_spaces[j]))
    return u


def error_locator_space(code: AGCode, positions, s: int, lam: int) -> SpaceDescriptor:
    """L(lam P_inf - s E) for the error positions E."""
    return SpaceDescriptor(lam, tuple((code.places[i], s) for i in sorted(positions)))


# -- candidate extraction and validation --------------------------------------------

def psi(km: KeyMatrix, u, code: AGCode, j: int = 0) -> FunctionElement:
    B = basis(code.backend, km.w_spaces[j])
    return B.combine(km.block(u, "W", j))


def phi(km: KeyMatrix, u, code: AGCode, t: int = 1) -> FunctionElement:
    return code.backend.from_vector(km.block(u, "V", t))


def extract_message(km: KeyMatrix, u, code: AGCode) -> FunctionElement | None:
    """f = phi_1 / psi_0 if that quotient lies in L(gamma P_inf), else None."""
    ff, F = code.backend, code.field
    psi0 = km.block(u, "W", 0)  # W_0 = lam*P_inf has the monomial basis
    if not np.any(psi0):
        return None
    phi1 = km.block(u, "V", 1)
    lam = km.lam
    mul = ff.mult_matrix_dense(ff.from_vector(psi0), code.gamma, lam + code.gamma)
    sol = solve_any(F, mul, phi1)
    if sol is None:
        return None
    return ff.from_vector(sol)


def validate_candidate(code: AGCode, r, f: FunctionElement, psi0: FunctionElement,
                       params: DecoderParams, lam: int) -> bool:
    """psi0 must have pole order <= lam and vanish to order s at every
    position where r differs from the codeword of f."""
    F = code.field
    if psi0.is_zero():
        return False
    if psi0.pole_order() > lam:
        return False
    c = code.encode(f.to_vector(code.gamma))
    err = np.flatnonzero(F.vsub(F.array(r), c))
    if err.size == 0:
        return True
    s = params.s
    places = code.places
    E = code.backend.expansion_table(places, s, lam)
    vec = psi0.to_vector(lam)
    ser = F.matmul(vec[None, :], E[: len(vec)].reshape(len(vec), -1)).reshape(len(places), s)
    return not np.any(ser[err])


# -- decoding --------------------------------------------------------------------------

def _try_candidates(code, r, params, km, K, lam=None) -> DecodeOutcome:
    """Try the columns of K in order; ``lam`` is the locator degree bound
    used for validation (defaults to the matrix's own lambda)."""
    F = code.field
    lam = km.lam if lam is None else lam
    extracted = False
    for col in range(K.shape[1]):
        u = K[:, col]
        f = extract_message(km, u, code)
        if f is None:
            continue
        extracted = True
        psi0 = psi(km, u, code, 0)
        if validate_candidate(code, r, f, psi0, params, lam):
            msg = f.to_vector(code.gamma)
            cw = code.encode(msg)
            weight = int(np.count_nonzero(F.vsub(F.array(r), cw)))
            return DecodeOutcome(True, f, msg, cw, weight, lam, tried=col + 1, kernel_dim=K.shape[1])
    reason = "validation_failed" if extracted else "extraction_failed"
    return DecodeOutcome(False, lam=lam, reason=reason, tried=K.shape[1], kernel_dim=K.shape[1])


def degree_filtration(code: AGCode, km: KeyMatrix, K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split the kernel of U by the smallest lambda each vector needs.

    Every space in the linear system grows with lambda and the constraints do
    not depend on it, so the kernel at a smaller lambda is exactly the set of
    kernel vectors whose components satisfy the smaller pole bounds.  The
    degree of u is max(pole(phi_t) - t*gamma, pole(psi_j) - j*(gamma+rho)).

    Returns ``(degrees, vectors)``: a basis of the kernel (columns, in the
    coordinates of ``km``) such that the kernel at any lambda <= km.lam is
    spanned by the basis vectors of degree <= lambda.
    """
    ff, F = code.backend, code.field
    parts, degs = [], []
    for t in range(1, km.ell + 1):
        lo, hi = km.col_blocks[("V", t)]
        parts.append(K[lo:hi])
        degs.extend(v - t * code.gamma for v in ff.nongaps(km.v_spaces[t - 1].a))
    for j in range(km.s):
        lo, hi = km.col_blocks[("W", j)]
        if hi == lo:
            continue
        B = basis(ff, km.w_spaces[j])
        parts.append(F.matmul(B.coeffs.T, K[lo:hi]))
        degs.extend(v - j * (code.gamma + code.rho) for v in ff.nongaps(km.w_spaces[j].a))
    degs = np.array(degs, dtype=np.int64)
    order = np.argsort(-degs, kind="stable")
    mono = np.concatenate(parts, axis=0)[order].T  # kernel vectors on monomials, high degree first
    N = mono.shape[1]
    R, rk, piv = rref(F, np.concatenate([mono, K.T], axis=1))
    if rk != K.shape[1] or (rk and piv[-1] >= N):
        raise RuntimeError("kernel basis is not independent on monomial coordinates")
    return degs[order][list(piv)], R[:rk, N:].T


def _decode_iterative(code, r, R_vec, params) -> DecodeOutcome:
    """Iterative decoding: the first lambda in 0..s*n+g whose kernel has dimension
    exactly 1.  Kernel dimensions never decrease with lambda, so that lambda
    is the first one with a non-trivial kernel, or there is none.  Both are
    read off one kernel computed at a large enough lambda, searched upwards
    from the fixed-mode lambda."""
    F = code.field
    top = params.s * code.n + code.genus
    first = min(params.s * max(radius_exact(code, params), 0) + code.genus, top)
    lam_hi, step = first, params.s
    while True:
        km = build_key_matrix(code, R_vec, params, lam_hi)
        K = right_kernel_basis(F, km.matrix)
        if K.shape[1]:
            break
        if lam_hi == top:
            return DecodeOutcome(False, reason="no_unique_kernel")
        lam_hi, step = min(lam_hi + step, top), 2 * step
    degs, vecs = degree_filtration(code, km, K)
    lam = max(0, int(degs.min()))
    dim = int(np.count_nonzero(degs <= lam))
    log.debug("first non-trivial kernel at lambda=%d, dimension %d", lam, dim)
    if dim != 1:
        return DecodeOutcome(False, lam=lam, reason="no_unique_kernel", kernel_dim=dim)
    return _try_candidates(code, r, params, km, vecs[:, [int(np.argmin(degs))]], lam)


def decode(code: AGCode, r, params: DecoderParams) -> DecodeOutcome:
    F = code.field
    r = F.array(r)
    R_vec = interpolator_vector(code, r)
    if params.mode == "iterative":
        return _decode_iterative(code, r, R_vec, params)
    lam = params.lam
    if lam is None:
        lam = params.s * max(radius_exact(code, params), 0) + code.genus
    km = build_key_matrix(code, R_vec, params, lam)
    K = right_kernel_basis(F, km.matrix)
    if K.shape[1] == 0:
        return DecodeOutcome(False, lam=lam, reason="no_unique_kernel")
    return _try_candidates(code, r, params, km, K)


# -- decoding radius ---------------------------------------------------------------------

def radius_closed_form(n: int, gamma: int, ell: int, s: int) -> int:
    """floor((2l-s+1)/(2(l+1)) n - l/(2s) gamma + l/(s(l+1)))."""
    if not 1 <= s <= ell:
        raise ValueError("need 1 <= s <= ell")
    val = (Fraction(2 * ell - s + 1, 2 * (ell + 1)) * n
           - Fraction(ell, 2 * s) * gamma
           + Fraction(ell, s * (ell + 1)))
    return math.floor(val)


def matrix_dimensions(code: AGCode, params: DecoderParams, lam: int) -> tuple[int, int]:
    """(nu, epsilon): column count and theoretical row count of U at lam."""
    ff = code.backend
    ell, s = params.ell, params.s
    gamma, rho = code.gamma, code.rho
    nu = sum(dimension(ff, SpaceDescriptor(lam + t * gamma)) for t in range(1, ell + 1))
    nu += sum(dimension(ff, SpaceDescriptor.uniform(lam + j * (gamma + rho), code.places, j))
              for j in range(s))
    eps = 0
    for t in range(1, ell + 1):
        a = lam + t * (gamma + rho)
        eps += dimension(ff, SpaceDescriptor(a))
        if t >= s:
            eps -= dimension(ff, SpaceDescriptor.uniform(a, code.places, s))
    return nu, eps


def radius_exact(code: AGCode, params: DecoderParams) -> int:
    """Largest tau with nu <= epsilon + 1 at lam = s*tau + g; -1 if none."""
    key = ("radius", params.ell, params.s)
    if key in code.cache:
        return code.cache[key]
    best = -1
    for tau in range(code.n + 1):
        nu, eps = matrix_dimensions(code, params, params.s * tau + code.genus)
        if nu <= eps + 1:
            best = tau
    code.cache[key] = best
    return best


def suggest_parameters(code: AGCode, ell: int) -> int:
    """s = floor(sqrt(gamma/n) * ell) + 1, clamped to [1, ell]."""
    if ell < 1:
        raise ValueError("ell must be positive")
    s = math.isqrt(code.gamma * ell * ell // code.n) + 1
    return max(1, min(s, ell))
