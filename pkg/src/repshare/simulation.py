"""Agent-based e-market harness for stress-testing the sharing engine.

Buyers take turns requesting advice about sellers (round-robin pairs); all
other buyers are candidate advisors. A buyer's individual experience of a
seller is modelled as the seller's true quality plus Gaussian noise. Advisor
behaviour follows a fixed profile: honest, ballot stuffing, bad mouthing or
random rating.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    AdvisorCategory,
    EngineParams,
    Opinion,
    Rating,
    ReputationError,
    clamp_rating,
    validate_params,
)
from .filtering import Label
from .ledger import BuyerLedger
from .sharing import SharingOutcome, share_reputation
from .solicitation import ResponsePolicy, decay_delta, respond_policy, select_advisors

BALLOT_STUFFING_CAP = 0.99


class ScenarioError(ReputationError, ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class Role(str, enum.Enum):
    BUYER = "buyer"
    SELLER = "seller"


class BehaviorKind(str, enum.Enum):
    HONEST = "honest"
    BALLOT_STUFFER = "ballot_stuffer"
    BAD_MOUTHER = "bad_mouther"
    RANDOM = "random"


@dataclass(frozen=True)
class Behavior:
    """How an advisor reports. ``targets=None`` means the attack applies to every seller."""

    kind: BehaviorKind = BehaviorKind.HONEST
    targets: frozenset[str] | None = None
    shift: float = 0.0

    @property
    def is_liar(self) -> bool:
        return self.kind is not BehaviorKind.HONEST

    def targets_seller(self, seller: str | None) -> bool:
        return self.targets is None or seller in self.targets


HONEST = Behavior()


@dataclass(frozen=True)
class AgentProfile:
    id: str
    role: Role
    behavior: Behavior = HONEST
    quality: float | None = None  # sellers only, ground truth
    response_rate: float = 1.0  # chance of answering when not obliged to


@dataclass(frozen=True)
class TransactionValue:
    kind: str = "fixed"
    x: float = 1800.0
    lo: float = 0.0
    hi: float = 0.0

    def draw(self, rng: np.random.Generator) -> float:
        if self.kind == "fixed":
            return self.x
        return float(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class ScenarioConfig:
    engine: EngineParams
    agents: tuple[AgentProfile, ...]
    rounds: int
    transaction_value: TransactionValue = TransactionValue()
    ir_noise: float = 0.0
    advisor_noise: float | None = None  # defaults to ir_noise
    seed: int = 0

    @property
    def buyers(self) -> list[AgentProfile]:
        return [a for a in self.agents if a.role is Role.BUYER]

    @property
    def sellers(self) -> list[AgentProfile]:
        return [a for a in self.agents if a.role is Role.SELLER]

    @property
    def honest_noise(self) -> float:
        return self.ir_noise if self.advisor_noise is None else self.advisor_noise


def validate_scenario(config: ScenarioConfig) -> list[str]:
    errors = [f"engine: {e}" for e in validate_params(config.engine)]
    ids = [a.id for a in config.agents]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        errors.append(f"duplicate agent ids: {', '.join(dupes)}")
    if not config.buyers:
        errors.append("scenario needs at least one buyer")
    if not config.sellers:
        errors.append("scenario needs at least one seller")
    if not isinstance(config.rounds, int) or config.rounds < 1:
        errors.append(f"rounds must be a positive integer, got {config.rounds!r}")
    seller_ids = {s.id for s in config.sellers}
    for a in config.agents:
        if a.role is Role.SELLER:
            if a.quality is None or not (0.0 <= a.quality < 1.0):
                errors.append(f"seller {a.id}: quality must be in [0, 1), got {a.quality!r}")
        b = a.behavior
        if b.kind in (BehaviorKind.BALLOT_STUFFER, BehaviorKind.BAD_MOUTHER):
            if not (0.0 < b.shift < 1.0):
                errors.append(f"agent {a.id}: attack shift must be in (0, 1), got {b.shift!r}")
            if b.targets is not None and not b.targets <= seller_ids:
                missing = ", ".join(sorted(b.targets - seller_ids))
                errors.append(f"agent {a.id}: unknown target sellers {missing}")
        if not (0.0 <= a.response_rate <= 1.0):
            errors.append(f"agent {a.id}: response_rate must be in [0, 1]")
    for name in ("ir_noise", "advisor_noise"):
        v = getattr(config, name)
        if v is not None and (not math.isfinite(v) or v < 0):
            errors.append(f"{name} must be a non-negative real, got {v!r}")
    tv = config.transaction_value
    if tv.kind == "fixed":
        if tv.x < 0:
            errors.append(f"transaction value must be non-negative, got {tv.x!r}")
    elif tv.kind == "uniform":
        if not (0 <= tv.lo <= tv.hi):
            errors.append(f"uniform transaction value needs 0 <= lo <= hi, got ({tv.lo}, {tv.hi})")
    else:
        errors.append(f"unknown transaction value distribution {tv.kind!r}")
    return errors


def apply_attack(
    true_quality: float,
    behavior: Behavior,
    rng: np.random.Generator,
    seller: str | None = None,
    noise: float = 0.0,
) -> Rating:
    """The rating an advisor with ``behavior`` reports for a seller of ``true_quality``.

    Attackers report honestly (with noise) about sellers they do not target.
    """
    kind = behavior.kind
    if kind is BehaviorKind.RANDOM:
        return clamp_rating(rng.random())
    if kind is BehaviorKind.BALLOT_STUFFER and behavior.targets_seller(seller):
        return clamp_rating(min(BALLOT_STUFFING_CAP, true_quality + behavior.shift))
    if kind is BehaviorKind.BAD_MOUTHER and behavior.targets_seller(seller):
        return clamp_rating(max(0.0, true_quality - behavior.shift))
    if noise > 0:
        return clamp_rating(true_quality + rng.normal(0.0, noise))
    return clamp_rating(true_quality)


@dataclass(frozen=True)
class SimulationState:
    config: ScenarioConfig
    ledgers: Mapping[str, BuyerLedger]
    round: int = 0

    @classmethod
    def initial(cls, config: ScenarioConfig) -> SimulationState:
        delta = config.engine.delta_init
        return cls(config, {b.id: BuyerLedger(b.id, {}, delta) for b in config.buyers})

    def profile(self, agent: str) -> AgentProfile:
        for a in self.config.agents:
            if a.id == agent:
                return a
        raise KeyError(agent)


@dataclass(frozen=True)
class RoundTrace:
    round: int
    buyer: str
    seller: str
    x: float
    quality: float
    targets: tuple[str, ...]
    explored: frozenset[str]
    responders: tuple[str, ...]
    outcome: SharingOutcome
    delta_before: float
    delta_after: float
    ledgers: Mapping[str, BuyerLedger] = field(repr=False, default_factory=dict)

    @property
    def sr_absent(self) -> bool:
        return self.outcome.result.aggregate is None


def run_round(
    state: SimulationState,
    seller: str,
    buyer: str,
    x: float,
    rng: np.random.Generator,
) -> tuple[SimulationState, RoundTrace]:
    """One buyer asks the market about one seller and updates its advisor records."""
    cfg = state.config
    params = cfg.engine
    quality = state.profile(seller).quality
    individual = clamp_rating(quality + rng.normal(0.0, cfg.ir_noise)) if cfg.ir_noise > 0 else clamp_rating(quality)

    ledger = state.ledgers[buyer]
    candidates = [b.id for b in cfg.buyers if b.id != buyer]
    plan = select_advisors(ledger, candidates, params, rng)

    received, responders = [], []
    for advisor in plan.targets:
        profile = state.profile(advisor)
        policy = respond_policy(state.ledgers[advisor], buyer)
        if policy is ResponsePolicy.MAY_DECLINE and profile.response_rate < 1.0:
            if rng.random() >= profile.response_rate:
                continue
        reported = apply_attack(quality, profile.behavior, rng, seller, cfg.honest_noise)
        received.append(Opinion(advisor, seller, reported, state.round))
        responders.append(advisor)

    updated, outcome = share_reputation(ledger, plan, received, individual, x, params)
    delta_after = decay_delta(ledger.delta, params)
    updated = replace(updated, delta=delta_after)
    ledgers = dict(state.ledgers)
    ledgers[buyer] = updated
    new_state = replace(state, ledgers=ledgers, round=state.round + 1)
    trace = RoundTrace(
        state.round,
        buyer,
        seller,
        x,
        quality,
        plan.targets,
        plan.explored,
        tuple(responders),
        outcome,
        ledger.delta,
        delta_after,
        ledgers,
    )
    return new_state, trace


@dataclass(frozen=True)
class RoundMetrics:
    round: int
    buyer: str
    seller: str
    precision: float | None
    recall: float | None
    agg_error: float | None
    sr_absent: bool
    contamination: float
    admitted: int


@dataclass(frozen=True)
class AdvisorRow:
    round: int
    buyer: str
    advisor: str
    reputation: float
    category: AdvisorCategory


@dataclass(frozen=True)
class SimulationMetrics:
    rounds: tuple[RoundMetrics, ...]
    advisor_rows: tuple[AdvisorRow, ...]
    trajectories: Mapping[str, tuple[float | None, ...]]
    final_contamination: float
    liar_mean_reputation: float | None
    honest_mean_reputation: float | None


def _ratio(num: int, den: int) -> float | None:
    return None if den == 0 else num / den


def contamination(ledgers: Mapping[str, BuyerLedger], liars: Mapping[str, bool]) -> float:
    """Mean over buyers of the liar fraction in their reputed lists (empty list counts as 0)."""
    if not ledgers:
        return 0.0
    fractions = []
    for ledger in ledgers.values():
        reputed = ledger.members(AdvisorCategory.REPUTED)
        fractions.append(sum(liars.get(a, False) for a in reputed) / len(reputed) if reputed else 0.0)
    return math.fsum(fractions) / len(fractions)


def confusion(verdicts, liars: Mapping[str, bool]) -> tuple[int, int, int]:
    """(TP, FP, FN) counting a Dishonest verdict on a liar as a true positive."""
    tp = fp = fn = 0
    for v in verdicts:
        liar = liars.get(v.opinion.advisor, False)
        flagged = v.label is Label.DISHONEST
        tp += flagged and liar
        fp += flagged and not liar
        fn += (not flagged) and liar
    return tp, fp, fn


def _mean_reputation(ledgers: Mapping[str, BuyerLedger], advisors) -> float | None:
    values = [
        float(rec.reputation)
        for ledger in ledgers.values()
        for a, rec in ledger.records.items()
        if a in advisors
    ]
    return math.fsum(values) / len(values) if values else None


def compute_metrics(
    traces: Sequence[RoundTrace], ground_truth: Mapping[str, bool]
) -> SimulationMetrics:
    """Summarize a run. ``ground_truth`` maps agent id to whether it is a liar."""
    if not traces:
        raise ValueError("compute_metrics needs at least one round trace")
    rows, advisor_rows = [], []
    advisors = sorted({a for t in traces for l in t.ledgers.values() for a in l.records} | set(ground_truth))
    trajectories: dict[str, list[float | None]] = {a: [] for a in advisors}
    for t in traces:
        tp, fp, fn = confusion(t.outcome.verdicts, ground_truth)
        agg = t.outcome.result.aggregate
        rows.append(
            RoundMetrics(
                t.round,
                t.buyer,
                t.seller,
                _ratio(tp, tp + fp),
                _ratio(tp, tp + fn),
                None if agg is None else abs(float(agg) - t.quality),
                agg is None,
                contamination(t.ledgers, ground_truth),
                0 if t.outcome.aborted else len(t.outcome.admission.admitted),
            )
        )
        ledger = t.ledgers.get(t.buyer)
        if ledger is not None:
            for a in sorted(ledger.records):
                rec = ledger.records[a]
                advisor_rows.append(AdvisorRow(t.round, t.buyer, a, float(rec.reputation), rec.category))
        for a in advisors:
            trajectories[a].append(_mean_reputation(t.ledgers, {a}))
    last = traces[-1].ledgers
    liars = {a for a, is_liar in ground_truth.items() if is_liar}
    honest = {a for a, is_liar in ground_truth.items() if not is_liar}
    return SimulationMetrics(
        tuple(rows),
        tuple(advisor_rows),
        {a: tuple(v) for a, v in trajectories.items()},
        contamination(last, ground_truth),
        _mean_reputation(last, liars),
        _mean_reputation(last, honest),
    )


def simulate(config: ScenarioConfig) -> tuple[list[RoundTrace], SimulationMetrics]:
    """Run every round of ``config``; deterministic given ``config.seed``."""
    errors = validate_scenario(config)
    if errors:
        raise ScenarioError(errors)
    rng = np.random.default_rng(config.seed)
    buyers = [b.id for b in config.buyers]
    sellers = [s.id for s in config.sellers]
    state = SimulationState.initial(config)
    traces = []
    for k in range(config.rounds):
        x = config.transaction_value.draw(rng)
        state, trace = run_round(state, sellers[k % len(sellers)], buyers[k % len(buyers)], x, rng)
        traces.append(trace)
    truth = {b.id: b.behavior.is_liar for b in config.buyers}
    return traces, compute_metrics(traces, truth)


def run_scenario(config: ScenarioConfig) -> SimulationMetrics:
    return simulate(config)[1]


def market_population(
    n_buyers: int,
    n_sellers: int,
    liar_fraction: float = 0.0,
    behavior: Behavior = HONEST,
    qualities: Sequence[float] | None = None,
) -> tuple[AgentProfile, ...]:
    """Buyers ``b1..bn`` and sellers ``s1..sm``; the last ``round(liar_fraction * n)`` buyers get ``behavior``."""
    n_liars = int(round(liar_fraction * n_buyers))
    if qualities is None:
        qualities = [round(0.3 + 0.5 * j / max(n_sellers - 1, 1), 4) for j in range(n_sellers)]
    buyers = tuple(
        AgentProfile(f"b{i + 1}", Role.BUYER, behavior if i >= n_buyers - n_liars else HONEST)
        for i in range(n_buyers)
    )
    sellers = tuple(
        AgentProfile(f"s{j + 1}", Role.SELLER, quality=float(qualities[j])) for j in range(n_sellers)
    )
    return buyers + sellers
