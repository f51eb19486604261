"""Slot-by-slot simulation loop and run orchestration.

One run is a single-threaded deterministic loop: sample arrivals,
snapshot queues, decide, price the decision, update queues, account.
Sweeps rerun the same configuration over a V grid with common random
numbers.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import traffic as tr
from .metrics import Accumulator, MetricsRecord
from .model import (
    LOCAL,
    Association,
    CostModel,
    Devolution,
    QueueState,
    SchedulerParams,
    lyapunov,
    slot_comm_cost,
    slot_comp_cost,
    step_controller_queue,
    step_switch_queue,
)
from .scheduler import (
    AssociationOnlyKernel,
    GreedyKernel,
    jsq_decide,
    random_decide,
    static_decide,
)


class Scheme(enum.Enum):
    GREEDY = "greedy"
    STATIC = "static"
    RANDOM = "random"
    JSQ = "jsq"


@dataclass(frozen=True)
class RunConfig:
    cost: CostModel
    traffic: tr.TrafficConfig
    scheme: Scheme
    params: SchedulerParams
    horizon_slots: int
    run_seed: int = 0
    stride: int = 1
    log_lyapunov: bool = False

    def __post_init__(self):
        if self.horizon_slots < 1:
            raise ValueError("horizon must be at least one slot")
        if self.stride < 1:
            raise ValueError("stride must be positive")
        if self.cost.n_switches != self.traffic.n_switches \
                or self.cost.n_controllers != self.traffic.n_controllers:
            raise ValueError("cost model and traffic config sizes disagree")


@dataclass
class RunState:
    t: int
    queues: QueueState
    arrival_state: tr.ArrivalState
    acc: Accumulator = field(default_factory=Accumulator)


def apply_slot(queues: QueueState, assoc: Association, arrivals,
               ctrl_service, switch_service, cost: CostModel):
    """Price a forced association and advance the queues one slot.

    Returns (next_queues, f_slot, g_slot). Pure; used both by the run
    loop and by tests that force a specific association.
    """
    f_slot = slot_comm_cost(assoc, arrivals, cost)
    g_slot = slot_comp_cost(assoc, arrivals, cost)
    routed_in = [0] * len(queues.q_c)
    q_s = []
    for i, t in enumerate(assoc.target):
        if t == LOCAL:
            q_s.append(step_switch_queue(queues.q_s[i], arrivals[i],
                                         switch_service[i]))
        else:
            routed_in[t] += arrivals[i]
            q_s.append(step_switch_queue(queues.q_s[i], 0, switch_service[i]))
    q_c = tuple(step_controller_queue(queues.q_c[j], routed_in[j],
                                      ctrl_service[j])
                for j in range(len(queues.q_c)))
    return QueueState(q_s=tuple(q_s), q_c=q_c), f_slot, g_slot


class _Decider:
    """Binds one scheme's per-slot decision rule for a run."""

    def __init__(self, cfg: RunConfig):
        self.scheme = cfg.scheme
        n_s = cfg.cost.n_switches
        self.n_s = n_s
        if cfg.scheme is Scheme.GREEDY:
            if cfg.params.devolution is Devolution.ON:
                self.kernel = GreedyKernel(cfg.cost, cfg.params)
            else:
                self.kernel = AssociationOnlyKernel(cfg.cost, cfg.params)
        elif cfg.scheme is Scheme.STATIC:
            self.static = static_decide(cfg.cost)
        elif cfg.scheme is Scheme.RANDOM:
            self.rng = random.Random(cfg.run_seed)
            self.n_c = cfg.cost.n_controllers

    def decide(self, queues: QueueState) -> Association:
        if self.scheme is Scheme.GREEDY:
            return self.kernel.decide(queues.q_s, queues.q_c)
        if self.scheme is Scheme.STATIC:
            return self.static
        if self.scheme is Scheme.RANDOM:
            return random_decide(self.n_s, self.n_c, self.rng)
        return jsq_decide(queues, self.n_s)


def init_state(cfg: RunConfig) -> RunState:
    return RunState(
        t=0,
        queues=QueueState.zeros(cfg.cost.n_switches, cfg.cost.n_controllers),
        arrival_state=tr.ArrivalState(cfg.traffic),
    )


def step(state: RunState, cfg: RunConfig, decider: _Decider,
         services=None) -> MetricsRecord:
    """Advance one slot: arrivals, snapshot decision, costs, queue
    updates, metrics."""
    if services is None:
        services = tr.sample_slot_services(cfg.traffic)
    ctrl_service, switch_service = services
    arrivals = tr.sample_slot_arrivals(state.arrival_state)
    snapshot = state.queues
    assoc = decider.decide(snapshot)
    next_q, f_slot, g_slot = apply_slot(
        snapshot, assoc, arrivals, ctrl_service, switch_service, cfg.cost)
    lyap = drift = None
    if cfg.log_lyapunov:
        lyap = lyapunov(snapshot)
        drift = lyapunov(next_q) - lyap + cfg.params.v * (f_slot + g_slot)
    state.queues = next_q
    state.t += 1
    return state.acc.update(f_slot, g_slot, next_q, assoc.uploads(),
                            assoc.locals_(), lyap, drift)


@dataclass(frozen=True)
class RunResult:
    records: list[MetricsRecord]
    final: MetricsRecord
    mean_backlog: Fraction


def run(cfg: RunConfig) -> RunResult:
    """Execute the full horizon; keep one record per stride plus the
    final slot. Deterministic given (config, seeds)."""
    state = init_state(cfg)
    decider = _Decider(cfg)
    services = tr.sample_slot_services(cfg.traffic)
    records = []
    rec = None
    for t in range(cfg.horizon_slots):
        rec = step(state, cfg, decider, services)
        if t % cfg.stride == 0 or t == cfg.horizon_slots - 1:
            records.append(rec)
    return RunResult(records=records, final=rec,
                     mean_backlog=state.acc.mean_backlog())


@dataclass(frozen=True)
class SweepRow:
    v: object
    scheme: Scheme
    run_seed: int
    f_bar: Fraction
    g_bar: Fraction
    total_cost: Fraction
    mean_backlog: Fraction


def sweep(cfg: RunConfig, v_values) -> list[SweepRow]:
    """One run per V with identical seeds (common random numbers)."""
    if not v_values:
        raise ValueError("empty V grid")
    rows = []
    for v in v_values:
        vcfg = replace(cfg, params=replace(cfg.params, v=v))
        res = run(vcfg)
        rows.append(SweepRow(
            v=v,
            scheme=cfg.scheme,
            run_seed=cfg.run_seed,
            f_bar=res.final.f_bar,
            g_bar=res.final.g_bar,
            total_cost=res.final.f_bar + res.final.g_bar,
            mean_backlog=res.mean_backlog,
        ))
    return rows


def capacity_check(cfg: RunConfig) -> list[str]:
    """Warn when mean arrivals meet or exceed total service capacity."""
    t = cfg.traffic
    total_in = sum(tr.mean_arrival_rate(t, i) for i in range(t.n_switches))
    ctrl_cap = t.controller_capacity * t.n_controllers
    switch_cap = t.switch_capacity * t.n_switches
    warnings = []
    devolution_off = (cfg.scheme is Scheme.GREEDY
                      and cfg.params.devolution is Devolution.OFF)
    if devolution_off or cfg.scheme is not Scheme.GREEDY:
        if total_in >= ctrl_cap:
            warnings.append(
                f"supercritical without devolution: mean arrivals "
                f"{float(total_in):.2f}/slot >= controller capacity {ctrl_cap}"
            )
    elif total_in >= ctrl_cap + switch_cap:
        warnings.append(
            f"supercritical: mean arrivals {float(total_in):.2f}/slot >= "
            f"total capacity {ctrl_cap + switch_cap}"
        )
    return warnings
