"""Per-slot decision kernels: the greedy drift-plus-penalty rule, the
Static/Random/JSQ baselines, the per-slot objective, and a brute-force
oracle that certifies per-slot optimality by exhaustive enumeration.

All arithmetic is exact (int / Fraction), so the oracle comparison is
an equality check. Ties break toward the lowest controller index
everywhere; with that rule JSQ coincides exactly with the
association-only kernel at v = 0.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    LOCAL,
    Association,
    CostModel,
    QueueState,
    Rational,
    SchedulerParams,
)

BRUTE_FORCE_LIMIT = 10 ** 7


@dataclass(frozen=True)
class DecisionContext:
    q: QueueState
    arrivals: tuple[int, ...]
    cost: CostModel
    params: SchedulerParams

    def __post_init__(self):
        n_s, n_c = self.cost.n_switches, self.cost.n_controllers
        if len(self.q.q_s) != n_s or len(self.arrivals) != n_s \
                or len(self.q.q_c) != n_c:
            raise ValueError("context dimensions are inconsistent")


def omega(i: int, j: int, ctx: DecisionContext) -> Rational:
    """Greedy decision weight: v*(W[i][j] - alpha_i) + (Qc_j - Qs_i).

    Non-positive values mark controller j as upload-eligible for
    switch i.
    """
    v = ctx.params.v
    return v * (ctx.cost.w[i][j] - ctx.cost.alpha[i]) \
        + (ctx.q.q_c[j] - ctx.q.q_s[i])


def greedy_decide(ctx: DecisionContext) -> Association:
    """Per-switch drift-plus-penalty minimizer.

    Each switch independently uploads to the controller with the most
    negative weight, or goes LOCAL when every weight is positive.
    Switches with zero arrivals still get a decision; it routes nothing.
    """
    n_c = ctx.cost.n_controllers
    target = []
    for i in range(ctx.cost.n_switches):
        best_j, best_w = LOCAL, 0
        for j in range(n_c):
            w = omega(i, j, ctx)
            if w <= 0 and (best_j == LOCAL or w < best_w):
                best_j, best_w = j, w
        target.append(best_j)
    return Association(target=tuple(target))


def association_only_decide(ctx: DecisionContext) -> Association:
    """Devolution-off kernel: each switch picks argmin_j v*W[i][j] + Qc_j.

    Equivalent to greedy with a prohibitively large alpha, which makes
    every controller upload-eligible and leaves only this argmin.
    """
    v = ctx.params.v
    target = []
    for i in range(ctx.cost.n_switches):
        scores = [v * ctx.cost.w[i][j] + ctx.q.q_c[j]
                  for j in range(ctx.cost.n_controllers)]
        target.append(min(range(len(scores)), key=lambda j: (scores[j], j)))
    return Association(target=tuple(target))


def static_decide(cost: CostModel) -> Association:
    """Minimum-communication-cost association, fixed for all slots."""
    target = tuple(row.index(min(row)) for row in cost.w)
    return Association(target=target)


def random_decide(n_switches: int, n_controllers: int,
                  rng: random.Random) -> Association:
    """Uniform random controller per switch, redrawn every slot."""
    if n_controllers < 1:
        raise ValueError("need at least one controller")
    return Association(
        target=tuple(rng.randrange(n_controllers) for _ in range(n_switches))
    )


def jsq_decide(q: QueueState, n_switches: int) -> Association:
    """Join-the-shortest-queue: every switch picks the controller with
    the smallest backlog in the same pre-slot snapshot."""
    j = min(range(len(q.q_c)), key=lambda c: (q.q_c[c], c))
    return Association(target=(j,) * n_switches)


def slot_objective(assoc: Association, ctx: DecisionContext) -> Rational:
    """Full per-slot objective, including the association-independent
    first term: sum_i (v*alpha_i + Qs_i)*A_i plus the weight of every
    upload."""
    v = ctx.params.v
    total = 0
    for i, t in enumerate(assoc.target):
        a = ctx.arrivals[i]
        total += (v * ctx.cost.alpha[i] + ctx.q.q_s[i]) * a
        if t != LOCAL:
            total += omega(i, t, ctx) * a
    return total


def brute_force_decide(ctx: DecisionContext) -> Association:
    """Exhaustive per-slot oracle.

    Enumerates every feasible association (each switch LOCAL or one
    controller) in lexicographic target order and returns the first
    one attaining the minimum objective. The per-switch cost tables are
    built straight from the objective definition, independently of the
    greedy weight decomposition.
    """
    n_s, n_c = ctx.cost.n_switches, ctx.cost.n_controllers
    if (n_c + 1) ** n_s > BRUTE_FORCE_LIMIT:
        raise ValueError(
            f"instance too large for exhaustive search: "
            f"({n_c}+1)^{n_s} > {BRUTE_FORCE_LIMIT}"
        )
    v = ctx.params.v
    # contribution of switch i under each choice, LOCAL first
    tables = []
    for i in range(n_s):
        a = ctx.arrivals[i]
        row = [(v * ctx.cost.alpha[i] + ctx.q.q_s[i]) * a]
        row.extend((v * ctx.cost.w[i][j] + ctx.q.q_c[j]) * a
                   for j in range(n_c))
        tables.append(row)
    choices = [LOCAL] + list(range(n_c))
    best_val = None
    best = None
    for combo in itertools.product(*([range(n_c + 1)] * n_s)):
        val = 0
        for i, c in enumerate(combo):
            val += tables[i][c]
        if best_val is None or val < best_val:
            best_val = val
            best = combo
    return Association(target=tuple(choices[c] for c in best))


class GreedyKernel:
    """Integer-scaled greedy decider for fast engine loops.

    The time-invariant part of each weight, v*(W[i][j] - alpha_i), is a
    rational constant; scaling every weight by the common denominator
    turns the per-slot comparison into pure integer arithmetic without
    changing any argmin or sign. Decisions equal greedy_decide exactly.
    """

    def __init__(self, cost: CostModel, params: SchedulerParams):
        terms = [[Fraction(params.v) * (cost.w[i][j] - cost.alpha[i])
                  for j in range(cost.n_controllers)]
                 for i in range(cost.n_switches)]
        self.scale = math.lcm(*(t.denominator for row in terms for t in row)) \
            if terms and terms[0] else 1
        self.const = [[int(t * self.scale) for t in row] for row in terms]

    def decide(self, q_s, q_c) -> Association:
        d = self.scale
        target = []
        for i, row in enumerate(self.const):
            qs = d * q_s[i]
            best_j, best_w = LOCAL, 0
            for j, k in enumerate(row):
                w = k + d * q_c[j] - qs
                if w <= 0 and (best_j == LOCAL or w < best_w):
                    best_j, best_w = j, w
            target.append(best_j)
        return Association(target=tuple(target))


class AssociationOnlyKernel:
    """Integer-scaled devolution-off decider (argmin v*W + Qc)."""

    def __init__(self, cost: CostModel, params: SchedulerParams):
        terms = [[Fraction(params.v) * cost.w[i][j]
                  for j in range(cost.n_controllers)]
                 for i in range(cost.n_switches)]
        self.scale = math.lcm(*(t.denominator for row in terms for t in row)) \
            if terms and terms[0] else 1
        self.const = [[int(t * self.scale) for t in row] for row in terms]

    def decide(self, q_s, q_c) -> Association:
        d = self.scale
        target = []
        for row in self.const:
            best_j, best_w = 0, row[0] + d * q_c[0]
            for j in range(1, len(row)):
                w = row[j] + d * q_c[j]
                if w < best_w:
                    best_j, best_w = j, w
            target.append(best_j)
        return Association(target=tuple(target))
