"""Independent oracles shared by the decoder and acceptance tests."""

import numpy as np

from powerag.power_decoder import (
    binom_mod,
    build_key_matrix,
    error_locator_space,
    interpolator,
    special_solution,
)
from powerag.rr_space import basis

# one "criterion N: PASS|FAIL ..." line per acceptance criterion, printed at the end
ACCEPTANCE_LINES = []


def all_codewords(code):
    """Every codeword, by enumerating all messages."""
    F = code.field
    msgs = np.indices((F.q,) * code.k, dtype=F.dtype).reshape(code.k, -1).T
    return msgs, F.matmul(msgs, code.generator)


def nearest(cws, r):
    """(distance, indices of all codewords at that distance)."""
    d = np.count_nonzero(cws != np.asarray(r, dtype=cws.dtype), axis=1)
    best = int(d.min())
    return best, np.flatnonzero(d == best)


def random_error(rng, n, tau, q):
    e = np.zeros(n, dtype=np.int64)
    pos = rng.choice(n, tau, replace=False)
    e[pos] = rng.integers(1, q, tau)
    return e


def error_locator(code, positions, s):
    """A nonzero element of L((s*tau + g) P_inf - s E)."""
    lam = s * len(positions) + code.genus
    B = basis(code.backend, error_locator_space(code, positions, s, lam))
    assert len(B) >= 1, "Riemann-Roch guarantees a locator at this degree"
    return B.elements[0], lam


def _vanishes(h, P, m):
    return all(c == 0 for c in h.local_expansion(P, m)) if m > 0 else True


def check_key_equations(code, msg, err, params):
    """Build the true solution for (msg, err) and verify U u = 0 and every
    pole / vanishing claim with scalar local expansions.

    Returns a list of failure descriptions (empty on success).
    """
    F, ff = code.field, code.backend
    ell, s = params.ell, params.s
    gamma, rho = code.gamma, code.rho
    r = F.vadd(code.encode(msg), F.array(err))
    positions = set(np.flatnonzero(err).tolist())
    f = code.message_function(msg)
    R = interpolator(code, r)
    Lam, lam = error_locator(code, sorted(positions), s)
    bad = []

    def pole_ok(h, bound, what):
        if not h.is_zero() and h.pole_order() > bound:
            bad.append(f"{what}: pole order {h.pole_order()} > {bound}")

    def vanish_ok(h, P, m, what):
        if not _vanishes(h, P, m):
            bad.append(f"{what}: order < {m} at {P}")

    if [R.evaluate(P) for P in code.places] != r.tolist():
        bad.append("interpolator does not agree with r")
    pole_ok(R, gamma + rho, "R")
    pole_ok(Lam, lam, "Lambda")
    for i in positions:
        vanish_ok(Lam, code.places[i], s, "Lambda")

    diff = f - R
    for t in range(1, ell + 1):
        pole_ok(Lam * f ** t, lam + t * gamma, f"Lambda f^{t}")
        for j in range(t + 1):
            h = Lam * diff ** j * R ** (t - j)
            pole_ok(h, lam + t * (gamma + rho), f"t={t} j={j} term")
            for i, P in enumerate(code.places):
                need = s if (j >= s or i in positions) else j
                vanish_ok(h, P, need, f"t={t} j={j} term")
        key = Lam * f ** t
        for j in range(min(t, s - 1) + 1):
            key = key - (Lam * diff ** j * R ** (t - j)).scale(binom_mod(t, j, F.p))
        if t < s:
            if not key.is_zero():
                bad.append(f"key equation t={t} not identically zero")
        else:
            pole_ok(key, lam + t * (gamma + rho), f"key equation t={t}")
            for P in code.places:
                vanish_ok(key, P, s, f"key equation t={t}")

    km = build_key_matrix(code, R, params, lam)
    u = special_solution(code, km, f, R, Lam)
    if not u.any():
        bad.append("special solution is zero")
    if np.any(F.matmul(km.matrix, u)):
        bad.append("U u != 0")
    return bad
