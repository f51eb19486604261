"""Core domain types and per-slot queue/cost mathematics.

Everything here is a pure function of its inputs. Queue backlogs and
request counts are nonnegative integers; costs stay exact (int or
Fraction) so that scheduler comparisons are equality checks, never
tolerance checks.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Rational = Union[int, Fraction]

#: Sentinel target meaning "process locally on the switch".
LOCAL = -1


class TopoKind(enum.Enum):
    FAT_TREE = "fat-tree"
    THREE_TIER = "three-tier"
    F10 = "f10"
    JELLYFISH = "jellyfish"


class Devolution(enum.Enum):
    ON = "on"
    OFF = "off"


@dataclass(frozen=True)
class Topology:
    """Labeled switch/host graph with pod structure.

    Switches are node ids 0..n_switches-1, hosts follow immediately
    after. ``pods`` groups non-core switch ids (empty for Jellyfish).
    """

    kind: TopoKind
    k: int
    switches: tuple[int, ...]
    hosts: tuple[int, ...]
    adjacency: dict[int, tuple[int, ...]]
    pods: tuple[tuple[int, ...], ...]

    @property
    def n_switches(self) -> int:
        return len(self.switches)

    @property
    def n_hosts(self) -> int:
        return len(self.hosts)

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edge list, each pair once with u < v."""
        out = []
        for u, nbrs in self.adjacency.items():
            for v in nbrs:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out


@dataclass(frozen=True)
class CostModel:
    """Hop-count matrix W (switch x controller) and per-switch alpha."""

    w: tuple[tuple[int, ...], ...]
    alpha: tuple[Rational, ...]

    def __post_init__(self):
        for i, row in enumerate(self.w):
            for j, hops in enumerate(row):
                if hops < 1:
                    raise ValueError(
                        f"w[{i}][{j}]={hops}: controllers sit on hosts, "
                        "so every switch is at least one hop away"
                    )
        if any(a < 0 for a in self.alpha):
            raise ValueError("alpha entries must be nonnegative")
        if len(self.alpha) != len(self.w):
            raise ValueError("alpha length must match w row count")

    @property
    def n_switches(self) -> int:
        return len(self.w)

    @property
    def n_controllers(self) -> int:
        return len(self.w[0]) if self.w else 0

    @classmethod
    def uniform_alpha(cls, w, alpha: Rational) -> "CostModel":
        w = tuple(tuple(row) for row in w)
        return cls(w=w, alpha=(alpha,) * len(w))


@dataclass(frozen=True)
class QueueState:
    """Per-switch and per-controller request backlogs."""

    q_s: tuple[int, ...]
    q_c: tuple[int, ...]

    def __post_init__(self):
        if any(q < 0 for q in self.q_s) or any(q < 0 for q in self.q_c):
            raise ValueError("queue backlogs must be nonnegative")

    @classmethod
    def zeros(cls, n_switches: int, n_controllers: int) -> "QueueState":
        return cls(q_s=(0,) * n_switches, q_c=(0,) * n_controllers)

    def total(self) -> int:
        return sum(self.q_s) + sum(self.q_c)


@dataclass(frozen=True)
class SlotInput:
    """One slot's exogenous inputs: arrivals and service amounts."""

    arrivals: tuple[int, ...]
    controller_service: tuple[int, ...]
    switch_service: tuple[int, ...]


@dataclass(frozen=True)
class Association:
    """Per-slot decision: each switch maps to LOCAL or one controller.

    At most one controller per switch holds structurally (one target
    per switch), so only index ranges need validation.
    """

    target: tuple[int, ...]

    def uploads(self) -> int:
        return sum(1 for t in self.target if t != LOCAL)

    def locals_(self) -> int:
        return sum(1 for t in self.target if t == LOCAL)


@dataclass(frozen=True)
class SchedulerParams:
    v: Rational = 0
    devolution: Devolution = Devolution.ON

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("v must be nonnegative")


def is_feasible(assoc: Association, n_switches: int, n_controllers: int) -> bool:
    """Check that every target is LOCAL or a valid controller index."""
    if len(assoc.target) != n_switches:
        return False
    return all(t == LOCAL or 0 <= t < n_controllers for t in assoc.target)


def step_switch_queue(q: int, routed_local: int, service: int) -> int:
    """Next switch backlog: service applies to backlog plus same-slot
    arrivals routed locally."""
    return max(q + routed_local - service, 0)


def step_controller_queue(q: int, routed_in: int, service: int) -> int:
    """Next controller backlog after receiving uploaded arrivals."""
    return max(q + routed_in - service, 0)


def slot_comm_cost(assoc: Association, arrivals: Sequence[int], cost: CostModel):
    """Communication cost of one slot: sum of W[i][j] * A_i over uploads."""
    total = 0
    for i, t in enumerate(assoc.target):
        if t != LOCAL:
            total += cost.w[i][t] * arrivals[i]
    return total


def slot_comp_cost(assoc: Association, arrivals: Sequence[int], cost: CostModel):
    """Computation cost of one slot: alpha_i * A_i over local switches."""
    total = 0
    for i, t in enumerate(assoc.target):
        if t == LOCAL:
            total += cost.alpha[i] * arrivals[i]
    return total


def lyapunov(q: QueueState) -> Fraction:
    """Quadratic potential: half the sum of squared backlogs."""
    return Fraction(sum(x * x for x in q.q_c) + sum(x * x for x in q.q_s), 2)
