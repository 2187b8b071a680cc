"""Monte-Carlo estimation of the observed failure rate (OFR).

Each trial draws a random message and a uniformly random error of exact
weight tau, decodes, and is classified as success (the sent message came
back), miscorrection (some other codeword came back) or failure.

Every trial gets its own Philox stream keyed by ``(seed, trial index)``, so a
report depends only on the plan, never on the order trials run in.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ag_code import AGCode
from .power_decoder import DecoderParams, decode, radius_exact

CSV_COLUMNS = ["curve", "q", "gamma", "n", "k", "dstar", "ell", "s", "tau", "tau_max_exact",
               "trials", "successes", "failures", "miscorrections", "ofr"]


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for one trial: Philox4x64 with key (seed, index)."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_error(n: int, tau: int, rng: np.random.Generator, q: int) -> np.ndarray:
    """Uniform error of Hamming weight exactly tau over GF(q)."""
    if not 0 <= tau <= n:
        raise ValueError(f"need 0 <= tau <= n, got tau={tau}, n={n}")
    idx = list(range(n))
    for i in range(tau):  # partial Fisher-Yates
        j = int(rng.integers(i, n))
        idx[i], idx[j] = idx[j], idx[i]
    e = np.zeros(n, dtype=np.int64)
    if tau:
        e[idx[:tau]] = rng.integers(1, q, size=tau)
    return e


@dataclass
class TrialPlan:
    code: AGCode
    params: DecoderParams
    tau: int
    trials: int
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.tau <= self.code.n:
            raise ValueError("tau must lie in [0, n]")
        if self.trials < 1:
            raise ValueError("trials must be positive")


@dataclass
class SimReport:
    plan: TrialPlan
    successes: int = 0
    failures: int = 0
    miscorrections: int = 0
    tau_max_exact: int = -1
    wall_time: float = 0.0
    failure_reasons: dict = field(default_factory=dict)

    @property
    def trials(self) -> int:
        return self.successes + self.failures + self.miscorrections

    @property
    def ofr(self) -> Fraction:
        return Fraction(self.failures + self.miscorrections, self.trials)

    def row(self) -> dict:
        code, p = self.plan.code, self.plan.params
        b = code.backend
        return {
            "curve": b.kind, "q": b.q, "gamma": code.gamma, "n": code.n, "k": code.k,
            "dstar": code.dstar, "ell": p.ell, "s": p.s, "tau": self.plan.tau,
            "tau_max_exact": self.tau_max_exact, "trials": self.trials,
            "successes": self.successes, "failures": self.failures,
            "miscorrections": self.miscorrections, "ofr": f"{float(self.ofr):.4f}",
        }

    def summary(self) -> str:
        return (f"tau={self.plan.tau} trials={self.trials} success={self.successes} "
                f"failure={self.failures} miscorrection={self.miscorrections} "
                f"OFR={self.ofr} ({float(self.ofr):.4f}) in {self.wall_time:.1f}s")


def run_trials(plan: TrialPlan) -> SimReport:
    code = plan.code
    F = code.field
    report = SimReport(plan, tau_max_exact=radius_exact(code, plan.params))
    start = time.perf_counter()
    for i in range(plan.trials):
        rng = trial_rng(plan.seed, i)
        msg = rng.integers(0, F.q, size=code.k)
        err = sample_error(code.n, plan.tau, rng, F.q)
        r = F.vadd(code.encode(msg), F.array(err))
        out = decode(code, r, plan.params)
        if not out.success:
            report.failures += 1
            report.failure_reasons[out.reason] = report.failure_reasons.get(out.reason, 0) + 1
        elif np.array_equal(out.message, F.array(msg)):
            report.successes += 1
        else:
            report.miscorrections += 1
    report.wall_time = time.perf_counter() - start
    return report


def to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        w.writerow(rep.row())
    return buf.getvalue()


def to_markdown(reports) -> str:
    """Markdown table, one row per report; a '+' marks tau == tau_max_exact."""
    lines = [
        "| Curve | \\|F\\| | gamma | n | k | d* | ell | s | tau | OFR | N |",
        "|---|---|---|---|---|---|---|---|---|---|---|",
    ]
    for rep in reports:
        code, p = rep.plan.code, rep.plan.params
        b = code.backend
        name = f"H_{b.q}" if b.kind == "hermitian" else "RS"
        size = f"{b.field.p}^{b.field.m}"
        tau = f"{rep.plan.tau}+" if rep.plan.tau == rep.tau_max_exact else str(rep.plan.tau)
        lines.append(f"| {name} | {size} | {code.gamma} | {code.n} | {code.k} | {code.dstar} | "
                     f"{p.ell} | {p.s} | {tau} | {float(rep.ofr):.2f} | {rep.trials} |")
    return "\n".join(lines) + "\n"
