"""Per-slot statistics, exact running averages, and CSV export.

Running averages are recomputed from exact running sums every slot, so
the identity f_bar(T) * T == sum of f_slot holds with no drift.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .model import Rational

CSV_HEADER = "t,f_slot,g_slot,f_bar,g_bar,total_backlog,ctrl_var,uploads,locals"
CSV_HEADER_LYAP = CSV_HEADER + ",lyapunov,drift_penalty"


@dataclass(frozen=True)
class MetricsRecord:
    t: int
    f_slot: Rational
    g_slot: Rational
    f_bar: Fraction
    g_bar: Fraction
    total_backlog: int
    controller_backlog_variance: Fraction
    uploads: int
    locals_: int
    lyapunov: Optional[Fraction] = None
    drift_penalty_sample: Optional[Rational] = None


class Accumulator:
    """Exact running sums for one run."""

    def __init__(self):
        self.t = 0
        self.f_sum = 0
        self.g_sum = 0
        self.backlog_sum = 0

    def update(self, f_slot, g_slot, queues, uploads, locals_,
               lyapunov=None, drift_penalty=None) -> MetricsRecord:
        self.f_sum += f_slot
        self.g_sum += g_slot
        total = queues.total()
        self.backlog_sum += total
        self.t += 1
        return MetricsRecord(
            t=self.t - 1,
            f_slot=f_slot,
            g_slot=g_slot,
            f_bar=Fraction(self.f_sum, self.t),
            g_bar=Fraction(self.g_sum) / self.t,
            total_backlog=total,
            controller_backlog_variance=controller_variance(queues.q_c),
            uploads=uploads,
            locals_=locals_,
            lyapunov=lyapunov,
            drift_penalty_sample=drift_penalty,
        )

    def mean_backlog(self) -> Fraction:
        return Fraction(self.backlog_sum, self.t) if self.t else Fraction(0)


def controller_variance(q_c: Sequence[int]) -> Fraction:
    """Population variance of the per-controller backlogs."""
    n = len(q_c)
    if n < 1:
        raise ValueError("need at least one controller")
    total = sum(q_c)
    sq = sum(x * x for x in q_c)
    # n*E[X^2] - (E[X]*n)^2/n, all over n: keeps everything integral
    return Fraction(n * sq - total * total, n * n)


def min_cost_arrival_variance(w, rates) -> Fraction:
    """Variance of per-controller minimum-cost request arrival rates.

    A switch with several minimum-cost controllers contributes its
    rate to each of them.
    """
    if len(w) != len(rates):
        raise ValueError("one rate per switch required")
    n_c = len(w[0])
    r = [Fraction(0)] * n_c
    for row, rate in zip(w, rates):
        lo = min(row)
        for j, hops in enumerate(row):
            if hops == lo:
                r[j] += Fraction(rate)
    mean = sum(r) / n_c
    return sum((x - mean) ** 2 for x in r) / n_c


def format_rational(x, digits: int = 6) -> str:
    """Fixed-point decimal rendering of an exact rational."""
    frac = Fraction(x)
    scaled = round(frac * 10 ** digits)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, part = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{part:0{digits}d}"


def record_to_csv_row(rec: MetricsRecord) -> str:
    cols = [
        str(rec.t),
        format_rational(rec.f_slot),
        format_rational(rec.g_slot),
        format_rational(rec.f_bar),
        format_rational(rec.g_bar),
        str(rec.total_backlog),
        format_rational(rec.controller_backlog_variance),
        str(rec.uploads),
        str(rec.locals_),
    ]
    if rec.lyapunov is not None:
        cols.append(format_rational(rec.lyapunov))
        cols.append(format_rational(rec.drift_penalty_sample))
    return ",".join(cols)
