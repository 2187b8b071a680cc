"""Function-field backends: the rational function field and Hermitian curves.

Functions regular away from the distinguished place P_inf are stored as
reduced monomial combinations ``x^i y^j``.  Each reduced monomial has its own
pole order at P_inf (``i`` for the rational field, ``q*i + (q+1)*j`` on the
Hermitian curve ``y^q + y = x^(q+1)``), so the monomials with pole order at
most ``a`` form the canonical basis of L(a P_inf), ordered by pole order.

Local expansions at affine places use ``t = x - x0`` as uniformiser.  On the
Hermitian curve this is valid everywhere because the partial derivative of
the curve equation in ``y`` is 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .finite_field import GF, FieldElement, field_of_order


@dataclass(frozen=True)
class Place:
    """A rational place: affine ``(x, y)`` or the place at infinity (x is None)."""

    x: int | None
    y: int | None = 0

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __str__(self) -> str:
        return "P_inf" if self.is_infinity else f"({self.x},{self.y})"


INFINITY = Place(None, None)


# -- truncated power series, coefficient lists low order first ----------------

def series_mul(F: GF, a: list[int], b: list[int], prec: int) -> list[int]:
    out = [0] * prec
    for i, ai in enumerate(a[:prec]):
        if ai:
            for j in range(min(len(b), prec - i)):
                if b[j]:
                    out[i + j] = F.add(out[i + j], F.mul(ai, b[j]))
    return out


def series_pow(F: GF, a: list[int], e: int, prec: int) -> list[int]:
    out = [1] + [0] * (prec - 1)
    for _ in range(e):
        out = series_mul(F, out, a, prec)
    return out


def vseries_mul(F: GF, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truncated product of series stored along the last axis (broadcasting)."""
    prec = a.shape[-1]
    shape = np.broadcast_shapes(a.shape, b.shape)
    out = np.zeros(shape, dtype=F.dtype)
    for i in range(prec):
        for j in range(prec - i):
            out[..., i + j] = F.vadd(out[..., i + j], F.vmul(a[..., i], b[..., j]))
    return out


class FunctionField:
    """Shared machinery; concrete curves override the monomial geometry."""

    kind: str
    field: GF
    genus: int
    q: int
    max_y_degree: int

    def __init__(self):
        self._lock = threading.Lock()
        self._nongaps: list[int] = []
        self._pole_index = np.full(0, -1, dtype=np.int64)
        self._extend_nongaps(64)
        self._tables: dict = {}
        self.basis_cache: dict = {}

    # monomials ---------------------------------------------------------------

    def monomial_pole(self, i: int, j: int) -> int:
        raise NotImplementedError

    def monomial_at_pole(self, v: int) -> tuple[int, int] | None:
        """The reduced monomial with pole order v, or None if v is a gap."""
        raise NotImplementedError

    def _extend_nongaps(self, bound: int) -> None:
        idx = np.full(bound + 1, -1, dtype=np.int64)
        ng = []
        for v in range(bound + 1):
            if self.monomial_at_pole(v) is not None:
                idx[v] = len(ng)
                ng.append(v)
        self._nongaps = ng
        self._pole_index = idx

    def nongaps(self, a: int) -> list[int]:
        """Pole orders of the monomial basis of L(a P_inf), ascending."""
        if a < 0:
            return []
        if a >= len(self._pole_index):
            with self._lock:
                if a >= len(self._pole_index):
                    self._extend_nongaps(max(2 * a, 64))
        return self._nongaps[: self.one_point_dim(a)]

    def one_point_dim(self, a: int) -> int:
        """Dimension of L(a P_inf), by counting monomials."""
        if a < 0:
            return 0
        if a >= len(self._pole_index):
            self.nongaps(a)
        return int(np.count_nonzero(self._pole_index[: a + 1] >= 0))

    def pole_index(self, v) -> np.ndarray:
        """Position of pole order(s) v in the global monomial ordering."""
        v = np.asarray(v, dtype=np.int64)
        top = int(v.max()) if v.size else 0
        if top >= len(self._pole_index):
            self.nongaps(top)
        return self._pole_index[v]

    def monomials(self, a: int) -> list[tuple[int, int]]:
        return [self.monomial_at_pole(v) for v in self.nongaps(a)]

    def _reduce(self, terms: dict) -> dict:
        return {k: c for k, c in terms.items() if c}

    # constructors --------------------------------------------------------------

    def element(self, terms: dict | None = None) -> FunctionElement:
        return FunctionElement(self, self._reduce(dict(terms or {})))

    def zero(self) -> FunctionElement:
        return FunctionElement(self, {})

    def const(self, c: int) -> FunctionElement:
        return FunctionElement(self, {(0, 0): c} if c else {})

    def one(self) -> FunctionElement:
        return self.const(1)

    def monomial(self, i: int, j: int = 0, c: int = 1) -> FunctionElement:
        return self.element({(i, j): c})

    def x(self) -> FunctionElement:
        return self.monomial(1, 0)

    def y(self) -> FunctionElement:
        return self.monomial(0, 1)

    def from_vector(self, vec) -> FunctionElement:
        """Function whose coefficients on the pole-ordered monomial basis are vec."""
        vec = np.asarray(vec)
        poles = self._nongaps_for_len(len(vec))
        terms = {}
        for v, c in zip(poles, vec.tolist()):
            if c:
                terms[self.monomial_at_pole(v)] = int(c)
        return FunctionElement(self, terms)

    def _nongaps_for_len(self, length: int) -> list[int]:
        while len(self._nongaps) < length:
            self.nongaps(2 * len(self._pole_index) + 2)
        return self._nongaps[:length]

    # places ----------------------------------------------------------------------

    def places(self) -> list[Place]:
        raise NotImplementedError

    def on_curve(self, P: Place) -> bool:
        raise NotImplementedError

    # expansions ------------------------------------------------------------------

    def _y_series(self, P: Place, prec: int) -> list[int]:
        return [0] * prec

    def xy_series(self, P: Place, prec: int) -> tuple[list[int], list[int]]:
        if P.is_infinity:
            raise ValueError("local expansion at P_inf is not supported")
        xs = [P.x, 1] + [0] * (prec - 2) if prec > 1 else [P.x]
        return xs[:prec], self._y_series(P, prec)

    def _vy_series(self, xs: np.ndarray, ys: np.ndarray, prec: int) -> np.ndarray:
        return np.zeros((len(xs), prec), dtype=self.field.dtype)

    def expansion_table(self, places, prec: int, max_pole: int) -> np.ndarray:
        """Expansions of all basis monomials of L(max_pole P_inf) at places.

        Shape ``(dim, len(places), prec)``; entry ``[k, i, c]`` is the
        coefficient of ``t^c`` of the k-th monomial at the i-th place.
        """
        places = tuple(places)
        dim = self.one_point_dim(max_pole)
        key = (places, prec)
        hit = self._tables.get(key)
        if hit is not None and hit.shape[0] >= dim:
            return hit[:dim]
        build_to = max(max_pole, 2 * (hit.shape[0] if hit is not None else 0))
        table = self._build_table(places, prec, build_to)
        with self._lock:
            self._tables[key] = table
        return table[:dim]

    def _build_table(self, places, prec: int, max_pole: int) -> np.ndarray:
        F = self.field
        n = len(places)
        if any(P.is_infinity for P in places):
            raise ValueError("local expansion at P_inf is not supported")
        xs = F.array([P.x for P in places])
        ys = F.array([P.y for P in places])
        X = np.zeros((n, prec), dtype=F.dtype)
        X[:, 0] = xs
        if prec > 1:
            X[:, 1] = 1
        Y = self._vy_series(xs, ys, prec)
        mons = self.monomials(max_pole)
        imax = max((i for i, _ in mons), default=0)
        jmax = max((j for _, j in mons), default=0)
        one = np.zeros((n, prec), dtype=F.dtype)
        one[:, 0] = 1
        xp = [one]
        for _ in range(imax):
            xp.append(vseries_mul(F, xp[-1], X))
        yp = [one]
        for _ in range(jmax):
            yp.append(vseries_mul(F, yp[-1], Y))
        out = np.zeros((len(mons), n, prec), dtype=F.dtype)
        for k, (i, j) in enumerate(mons):
            out[k] = xp[i] if j == 0 else vseries_mul(F, xp[i], yp[j])
        return out

    def evaluation_matrix(self, places, a: int) -> np.ndarray:
        """Values of the basis monomials of L(a P_inf): shape (dim, len(places))."""
        F = self.field
        xs = F.array([P.x for P in places])
        ys = F.array([P.y for P in places])
        mons = self.monomials(a)
        out = np.zeros((len(mons), len(places)), dtype=F.dtype)
        for k, (i, j) in enumerate(mons):
            out[k] = F.vmul(F.vpow(xs, i), F.vpow(ys, j))
        return out

    def mult_matrix_dense(self, f: FunctionElement, src: int, dst: int) -> np.ndarray:
        """Matrix of h -> f*h from the monomial basis of L(src) to that of L(dst)."""
        raise NotImplementedError


class RationalField(FunctionField):
    """The rational function field over GF(q); its codes are Reed-Solomon codes."""

    kind = "rational"
    genus = 0
    max_y_degree = 0

    def __init__(self, field: GF):
        self.field = field
        self.q = field.q
        super().__init__()

    def __repr__(self) -> str:
        return f"RationalField({self.field})"

    def monomial_pole(self, i: int, j: int = 0) -> int:
        if j:
            raise ValueError("rational field has no y monomials")
        return i

    def monomial_at_pole(self, v: int):
        return (v, 0) if v >= 0 else None

    def places(self) -> list[Place]:
        return [Place(x, 0) for x in self.field.elements()]

    def on_curve(self, P: Place) -> bool:
        return P.is_infinity or (0 <= P.x < self.q and P.y == 0)

    def mult_matrix_dense(self, f, src, dst):
        F = self.field
        rows, cols = self.one_point_dim(dst), self.one_point_dim(src)
        M = np.zeros((rows, cols), dtype=F.dtype)
        if cols == 0:
            return M
        ks = np.arange(cols)
        for (i, _), c in f.terms.items():
            tgt = ks + i
            if tgt[-1] >= rows:
                raise ValueError(f"product leaves L({dst} P_inf)")
            M[tgt, ks] = F.vadd(M[tgt, ks], c)
        return M


class HermitianField(FunctionField):
    """The Hermitian curve y^q + y = x^(q+1) over GF(q^2)."""

    kind = "hermitian"

    def __init__(self, q: int):
        self.q = q
        self.field = field_of_order(q * q)
        self.genus = q * (q - 1) // 2
        self.max_y_degree = q - 1
        super().__init__()

    def __repr__(self) -> str:
        return f"HermitianField(q={self.q})"

    def monomial_pole(self, i: int, j: int = 0) -> int:
        return self.q * i + (self.q + 1) * j

    def monomial_at_pole(self, v: int):
        if v < 0:
            return None
        q = self.q
        j = v % q
        rest = v - (q + 1) * j
        if rest < 0:
            return None
        return (rest // q, j)

    def _reduce(self, terms: dict) -> dict:
        F, q = self.field, self.q
        # y^q = x^(q+1) - y, applied from the top y-degree down
        pending = {k: c for k, c in terms.items() if c}
        while True:
            high = [k for k in pending if k[1] >= q]
            if not high:
                return pending
            top = max(k[1] for k in high)
            for (i, j) in [k for k in high if k[1] == top]:
                c = pending.pop((i, j))
                for key, coef in (((i + q + 1, j - q), c), ((i, j - q + 1), F.neg(c))):
                    val = F.add(pending.get(key, 0), coef)
                    if val:
                        pending[key] = val
                    else:
                        pending.pop(key, None)

    def on_curve(self, P: Place) -> bool:
        if P.is_infinity:
            return True
        F, q = self.field, self.q
        return F.add(F.pow(P.y, q), P.y) == F.pow(P.x, q + 1)

    def places(self) -> list[Place]:
        F, q = self.field, self.q
        # y -> y^q + y is the trace to GF(q): group y values by their image
        by_trace: dict[int, list[int]] = {}
        for y in F.elements():
            by_trace.setdefault(F.add(F.pow(y, q), y), []).append(y)
        out = []
        for x in F.elements():
            for y in sorted(by_trace.get(F.pow(x, q + 1), [])):
                out.append(Place(x, y))
        return out

    def _y_series(self, P, prec):
        F, q = self.field, self.q
        xs = [P.x, 1] + [0] * prec
        u = series_pow(F, xs[:prec], q + 1, prec)
        u[0] = F.sub(u[0], F.pow(P.x, q + 1))
        delta = [0] * prec
        # delta = u - delta^q; delta^q only reaches order >= q*valuation(delta)
        for _ in range(prec):
            dq = series_pow(F, delta, q, prec)
            delta = [F.sub(a, b) for a, b in zip(u, dq)]
        delta[0] = F.add(delta[0], P.y)
        return delta

    def _vy_series(self, xs, ys, prec):
        F, q = self.field, self.q
        n = len(xs)
        X = np.zeros((n, prec), dtype=F.dtype)
        X[:, 0] = xs
        if prec > 1:
            X[:, 1] = 1
        u = np.zeros((n, prec), dtype=F.dtype)
        u[:, 0] = 1
        for _ in range(q + 1):
            u = vseries_mul(F, u, X)
        u[:, 0] = F.vsub(u[:, 0], F.vpow(xs, q + 1))
        delta = np.zeros((n, prec), dtype=F.dtype)
        for _ in range(prec):
            dq = np.zeros((n, prec), dtype=F.dtype)
            dq[:, 0] = 1
            for _ in range(q):
                dq = vseries_mul(F, dq, delta)
            delta = F.vsub(u, dq)
        delta[:, 0] = F.vadd(delta[:, 0], ys)
        return delta

    def mult_matrix_dense(self, f, src, dst):
        F, q = self.field, self.q
        rows, cols = self.one_point_dim(dst), self.one_point_dim(src)
        M = np.zeros((rows, cols), dtype=F.dtype)
        if cols == 0:
            return M
        mons = np.array(self.monomials(src), dtype=np.int64).reshape(-1, 2)
        ks = np.arange(cols)
        for (i, j), c in f.terms.items():
            I = mons[:, 0] + i
            J = mons[:, 1] + j
            wrap = J >= q
            pole = q * I + (q + 1) * J
            if pole.max() > dst:
                raise ValueError(f"product leaves L({dst} P_inf)")
            lead = self.pole_index(pole)
            M[lead, ks] = F.vadd(M[lead, ks], c)
            if wrap.any():
                sec = self.pole_index(q * I[wrap] + (q + 1) * (J[wrap] - q + 1))
                kw = ks[wrap]
                M[sec, kw] = F.vadd(M[sec, kw], F.neg(c))
        return M


class FunctionElement:
    """Element of the coordinate ring, as a reduced monomial combination."""

    __slots__ = ("ff", "terms")

    def __init__(self, ff: FunctionField, terms: dict):
        self.ff = ff
        self.terms = terms

    @property
    def field(self) -> GF:
        return self.ff.field

    def _coerce(self, other) -> FunctionElement:
        if isinstance(other, FunctionElement):
            if other.ff is not self.ff:
                raise ValueError("functions from different backends")
            return other
        if isinstance(other, FieldElement):
            return self.ff.const(other.rep)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        terms = dict(self.terms)
        for k, c in other.terms.items():
            v = F.add(terms.get(k, 0), c)
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return FunctionElement(self.ff, terms)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return FunctionElement(self.ff, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> FunctionElement:
        F = self.field
        if not c:
            return self.ff.zero()
        return FunctionElement(self.ff, {k: F.mul(v, c) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other.rep)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        F = self.field
        acc: dict = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                v = F.add(acc.get(key, 0), F.mul(c1, c2))
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
        return FunctionElement(self.ff, self.ff._reduce(acc))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FunctionElement:
        out = self.ff.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, FunctionElement):
            return self.ff is other.ff and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def pole_order(self) -> int | None:
        """Pole order at P_inf; None for the zero function."""
        if not self.terms:
            return None
        return max(self.ff.monomial_pole(i, j) for i, j in self.terms)

    def evaluate(self, P: Place) -> int:
        if P.is_infinity:
            raise ValueError("cannot evaluate at P_inf; use pole_order")
        F = self.field
        total = 0
        for (i, j), c in self.terms.items():
            v = F.mul(c, F.mul(F.pow(P.x, i), F.pow(P.y, j) if j else 1))
            total = F.add(total, v)
        return total

    def local_expansion(self, P: Place, prec: int) -> list[int]:
        """First prec coefficients of the expansion in t = x - x0 at P."""
        if prec < 1:
            raise ValueError("precision must be positive")
        F = self.field
        xs, ys = self.ff.xy_series(P, prec)
        out = [0] * prec
        xpow: dict[int, list[int]] = {}
        ypow: dict[int, list[int]] = {}
        for (i, j), c in self.terms.items():
            if i not in xpow:
                xpow[i] = series_pow(F, xs, i, prec)
            if j not in ypow:
                ypow[j] = series_pow(F, ys, j, prec)
            term = series_mul(F, xpow[i], ypow[j], prec)
            out = [F.add(a, F.mul(c, b)) for a, b in zip(out, term)]
        return out

    def vanishing_order(self, P: Place, bound: int) -> int:
        """min(order of vanishing at P, bound); bound for the zero function."""
        coeffs = self.local_expansion(P, bound)
        for k, c in enumerate(coeffs):
            if c:
                return k
        return bound

    def to_vector(self, a: int) -> np.ndarray:
        """Coefficients on the monomial basis of L(a P_inf)."""
        ff = self.ff
        dim = ff.one_point_dim(a)
        vec = np.zeros(dim, dtype=self.field.dtype)
        for (i, j), c in self.terms.items():
            v = ff.monomial_pole(i, j)
            if v > a:
                raise ValueError(f"pole order {v} exceeds {a}")
            vec[int(ff.pole_index(v))] = c
        return vec

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda kv: -self.ff.monomial_pole(*kv[0])):
            mono = "*".join(s for s in (
                "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
            ) if s)
            parts.append(f"{c}" if not mono else (mono if c == 1 else f"{c}*{mono}"))
        return " + ".join(parts)


def make_backend(curve: str, q: int) -> FunctionField:
    """Backend from a config-style description.

    ``curve="rational"``: rational function field over GF(q).
    ``curve="hermitian"``: Hermitian curve H_q over GF(q^2).
    """
    if curve == "rational":
        return RationalField(field_of_order(q))
    if curve == "hermitian":
        return HermitianField(q)
    raise ValueError(f"unknown curve {curve!r}")
