"""Arithmetic in GF(p^m).

Elements are encoded as integers in ``[0, p^m)``: digit ``i`` of the base-p
expansion is the coefficient of ``z^i`` in the polynomial representation
modulo a fixed irreducible polynomial.

Two APIs are offered.  Scalar methods (``add``, ``mul``, ``inv``, ...) act on
plain ints and are used by the dictionary based function arithmetic.  The
``v``-prefixed methods and :meth:`GF.matmul` act on numpy arrays of encodings
and carry the heavy linear algebra.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

MAX_ORDER = 1 << 16
_TABLE_LIMIT = 256  # full q*q add/mul tables up to this order


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p) as coefficient lists, low degree first ----------

def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = list(a)
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * inv_lead % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    rem = a[:db]
    while rem and rem[-1] == 0:
        rem.pop()
    return rem


def _digits(rep: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        rep, d = divmod(rep, p)
        out.append(d)
    return out


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem(poly, list(low) + [1], p):
                return False
    return True


def lowest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m with the smallest integer encoding."""
    if m == 1:
        return (0, 1)
    for rep in range(p ** m):
        poly = _digits(rep, p, m) + [1]
        if poly[0] != 0 and is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


class GF:
    """The finite field GF(p^m); use :func:`field_make` to obtain instances."""

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = tuple(modulus)
        self.dtype = np.uint8 if self.q <= 256 else np.uint16
        self._build_tables()

    # construction ---------------------------------------------------------

    def _mul_slow(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da, db = _digits(a, p, m), _digits(b, p, m)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_rem(prod, list(self.modulus), p) if m > 1 else [prod[0] % p]
        return sum(c * p ** i for i, c in enumerate(rem))

    def _pow_slow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_slow(r, a)
            a = self._mul_slow(a, a)
            e >>= 1
        return r

    def _find_generator(self) -> int:
        order = self.q - 1
        if order == 1:
            return 1
        primes = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_slow(g, order // r) != 1 for r in primes):
                return g
        raise FieldError("no generator found")

    def _build_tables(self) -> None:
        q, p, m = self.q, self.p, self.m
        self.generator = self._find_generator()
        # multiplication by the generator is GF(p)-linear: precompute its
        # action on the basis z^i so the exp table costs O(m^2) per step
        g_cols = [_digits(self._mul_slow(self.generator, p ** i), p, m) for i in range(m)]
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for k in range(q - 1):
            exp[k] = x
            log[x] = k
            d = _digits(x, p, m)
            nxt = [0] * m
            for i, c in enumerate(d):
                if c:
                    col = g_cols[i]
                    for j in range(m):
                        nxt[j] += c * col[j]
            x = sum((c % p) * p ** j for j, c in enumerate(nxt))
        if x != 1 or len(set(exp[: q - 1])) != q - 1:
            raise FieldError("generator does not have order q-1")
        for k in range(q - 1, 2 * q):
            exp[k] = exp[k % (q - 1)]
        self._exp = exp
        self._log = log

        # digit arithmetic for addition in odd characteristic
        reps = np.arange(q, dtype=np.int64)
        self._digit_arr = np.stack([(reps // p ** i) % p for i in range(m)])
        self._pw = p ** np.arange(m, dtype=np.int64)
        if p == 2:
            self._neg = list(range(q))
        else:
            self._neg = [int(v) for v in ((-self._digit_arr) % p).T @ self._pw]
        self._inv = [0] + [exp[(q - 1 - log[a]) % (q - 1)] for a in range(1, q)]

        dt = self.dtype
        self.exp_arr = np.array(exp, dtype=np.int64)
        self.log_arr = np.array(log, dtype=np.int64)
        self.neg_arr = np.array(self._neg, dtype=dt)
        self.inv_arr = np.array(self._inv, dtype=dt)
        self.small = q <= _TABLE_LIMIT
        if self.small:
            la = self.log_arr
            mt = self.exp_arr[(la[:, None] + la[None, :]) % max(q - 1, 1)]
            mt[0, :] = 0
            mt[:, 0] = 0
            self.mul_table = mt.astype(dt)
            if p == 2:
                self.add_table = (reps[:, None] ^ reps[None, :]).astype(dt)
            else:
                da = self._digit_arr
                s = (da[:, :, None] + da[:, None, :]) % p
                self.add_table = np.tensordot(self._pw, s, axes=(0, 0)).astype(dt)
            self._add_list = self.add_table.tolist()
            self.negmul_table = self.neg_arr[self.mul_table]
        # z^k mod modulus for k < 2m-1, used by matmul
        red = []
        for k in range(2 * m - 1):
            if k < m:
                red.append(_digits(p ** k, p, m))
            else:
                prod = [0] * k + [1]
                rem = _poly_rem(prod, list(self.modulus), p)
                red.append(rem + [0] * (m - len(rem)))
        self._reduction = np.array(red, dtype=np.int64)

    # identity --------------------------------------------------------------

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"

    def __str__(self) -> str:
        return f"gf({self.p}^{self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __reduce__(self):
        return (field_make, (self.p, self.m))

    def __call__(self, rep: int) -> FieldElement:
        return FieldElement(self, rep)

    def modulus_str(self) -> str:
        terms = []
        for i in range(self.m, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            mono = "1" if i == 0 else ("z" if i == 1 else f"z^{i}")
            terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}*{mono}")
        return " + ".join(terms)

    def elements(self) -> range:
        return range(self.q)

    def prime_embed(self, n: int) -> int:
        """Image of the integer n in the prime subfield."""
        return n % self.p

    # scalar arithmetic on encodings -----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.small:
            return self._add_list[a][b]
        da, db = self._digit_arr[:, a], self._digit_arr[:, b]
        return int(((da + db) % self.p) @ self._pw)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    # vectorised arithmetic on arrays of encodings ---------------------------

    def array(self, values) -> np.ndarray:
        arr = np.asarray(values, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise FieldError(f"encoding out of range for {self!r}")
        return arr.astype(self.dtype)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=self.dtype)

    def vadd(self, a, b) -> np.ndarray:
        if self.p == 2:
            return np.bitwise_xor(a, b).astype(self.dtype, copy=False)
        if self.small:
            return self.add_table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._pw:
            out += ((a // pw + b // pw) % self.p) * pw
        return out.astype(self.dtype)

    def vneg(self, a) -> np.ndarray:
        if self.p == 2:
            return np.asarray(a, dtype=self.dtype)
        return self.neg_arr[a]

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        if self.small:
            return self.mul_table[a, b]
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp_arr[self.log_arr[a] + self.log_arr[b]]
        out[(a == 0) | (b == 0)] = 0
        return out.astype(self.dtype)

    def vsubmul(self, x, a, b) -> np.ndarray:
        """x - a*b elementwise."""
        if self.small:
            if self.p == 2:
                return np.bitwise_xor(x, self.mul_table[a, b])
            return self.add_table[x, self.negmul_table[a, b]]
        return self.vsub(x, self.vmul(a, b))

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_arr[a]

    def vpow(self, a, e: int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones(a.shape, dtype=self.dtype)
        out = self.exp_arr[(self.log_arr[a] * e) % (self.q - 1)]
        out[a == 0] = 0
        return out.astype(self.dtype)

    def vsum(self, a, axis: int = 0) -> np.ndarray:
        a = np.moveaxis(np.asarray(a), axis, 0)
        out = np.zeros(a.shape[1:], dtype=self.dtype)
        for row in a:
            out = self.vadd(out, row)
        return out

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over the field.

        Entries are split into base-p digits; the digit products are exact
        integer sums carried out by floating point BLAS (all partial sums stay
        far below 2**53) and then reduced modulo p and the field modulus.
        """
        A = np.asarray(A)
        B = np.asarray(B)
        vec = B.ndim == 1
        if vec:
            B = B[:, None]
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        p, m = self.p, self.m
        if A.shape[1] == 0:
            out = np.zeros((A.shape[0], B.shape[1]), dtype=self.dtype)
            return out[:, 0] if vec else out
        Ad = [((A.astype(np.int64) // p ** i) % p).astype(np.float64) for i in range(m)]
        Bd = [((B.astype(np.int64) // p ** i) % p).astype(np.float64) for i in range(m)]
        conv = []
        for k in range(2 * m - 1):
            acc = None
            for i in range(max(0, k - m + 1), min(k, m - 1) + 1):
                term = Ad[i] @ Bd[k - i]
                acc = term if acc is None else acc + term
            conv.append(np.rint(acc).astype(np.int64) % p)
        digits = np.tensordot(self._reduction.T, np.stack(conv), axes=(1, 0)) % p
        out = np.tensordot(self._pw, digits, axes=(0, 0)).astype(self.dtype)
        return out[:, 0] if vec else out


class FieldElement:
    """A field element carrying its field; supports the usual operators."""

    __slots__ = ("field", "rep")

    def __init__(self, field: GF, rep: int):
        rep = int(rep)
        if not 0 <= rep < field.q:
            raise FieldError(f"encoding {rep} out of range for {field!r}")
        self.field = field
        self.rep = rep

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mismatched fields {self.field!r} and {other.field!r}")
            return other.rep
        if isinstance(other, int):
            return self.field.prime_embed(other)
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.add(self.rep, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(self.rep, b))

    def __rsub__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.sub(b, self.rep))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.mul(self.rep, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.field, self.field.div(self.rep, b))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.rep, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.rep))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.rep == other.rep
        if isinstance(other, int):
            return self.rep == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.rep))

    def __bool__(self) -> bool:
        return self.rep != 0

    def __int__(self) -> int:
        return self.rep

    def __repr__(self) -> str:
        return f"{self.field!r}({self.rep})"

    def __str__(self) -> str:
        return str(self.rep)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


@functools.lru_cache(maxsize=None)
def field_make(p: int, m: int = 1) -> GF:
    """Return GF(p^m) with the lowest irreducible modulus.

    Raises FieldError when p is not prime or p^m exceeds 2^16.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError("extension degree must be positive")
    if p ** m > MAX_ORDER:
        raise FieldError(f"{p}^{m} exceeds the supported order {MAX_ORDER}")
    return GF(p, m, lowest_irreducible(p, m))


def field_of_order(q: int) -> GF:
    """GF(q) for a prime power q."""
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            r = q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return field_make(p, m)
    raise FieldError(f"{q} is not a prime power")


def parse_field(text: str) -> GF:
    """Parse the ``gf(p^m)`` notation (``gf(7)`` also accepted)."""
    t = text.strip().lower()
    if not (t.startswith("gf(") and t.endswith(")")):
        raise FieldError(f"bad field notation {text!r}")
    body = t[3:-1]
    if "^" in body:
        p, m = body.split("^")
        return field_make(int(p), int(m))
    return field_of_order(int(body))
