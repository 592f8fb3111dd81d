"""Shared domain types, engine constants and bounded-rating arithmetic."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, fields

# Largest double strictly below 1; updates that would reach 1.0 are clamped here.
RATING_MAX = math.nextafter(1.0, 0.0)


class ReputationError(Exception):
    """Base class for all errors raised by the package."""


class RatingRangeError(ReputationError, ValueError):
    """A value does not lie in the half-open rating interval [0, 1)."""


class InvalidParamsError(ReputationError, ValueError):
    """Engine parameters violate one or more constraints."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class Rating(float):
    """A reputation value in [0, 1).

    Behaves exactly like a ``float``; construction rejects anything outside
    the half-open unit interval (including NaN).
    """

    __slots__ = ()

    def __new__(cls, value: float = 0.0) -> Rating:
        v = float(value)
        if math.isnan(v):
            raise RatingRangeError("rating must be a number, got NaN")
        if v < 0.0:
            raise RatingRangeError(f"rating must be >= 0, got {v!r}")
        if v >= 1.0:
            raise RatingRangeError(f"rating must be < 1, got {v!r}")
        return super().__new__(cls, v)

    def __repr__(self) -> str:
        return f"Rating({float(self)!r})"


def make_rating(v: float) -> Rating:
    """Validate ``v`` and wrap it as a :class:`Rating`."""
    return Rating(v)


def clamp_rating(v: float) -> Rating:
    """Clamp an arbitrary real into [0, 1) and wrap it."""
    return Rating(min(max(float(v), 0.0), RATING_MAX))


@dataclass(frozen=True)
class Opinion:
    """One advisor's report about a seller, received by a requesting buyer."""

    advisor: str
    seller: str
    reported: Rating
    time: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.reported, Rating):
            object.__setattr__(self, "reported", Rating(self.reported))


class AdvisorCategory(str, enum.Enum):
    REPUTED = "Reputed"
    NON_REPUTED = "NonReputed"
    DIS_REPUTED = "DisReputed"
    NEW = "New"


@dataclass(frozen=True)
class EngineParams:
    """Constants of the reputation-sharing engine.

    Defaults are the values of the published e-market case study; the
    exploration schedule (``delta_*``) and ``classify_eps`` are engine
    choices.
    """

    kappa: float = 0.95
    alpha_hat: float = 0.6
    epsilon_hat: float = 0.3
    lambda_decay: float = 0.001
    penalty_p: float = 1.5
    exp_base: float = 1.01
    j_step: float = 0.01
    rep_threshold: float = 0.38
    disrep_threshold: float = 0.15
    min_advisors: int = 2
    delta_init: float = 1.0
    delta_rate: float = 0.95
    delta_floor: float = 0.05
    classify_eps: float = 1e-12

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> EngineParams:
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidParamsError([f"unknown engine parameter {k!r}" for k in unknown])
        return cls(**data)

    def checked(self) -> EngineParams:
        """Return ``self`` or raise :class:`InvalidParamsError` with every violation."""
        errors = validate_params(self)
        if errors:
            raise InvalidParamsError(errors)
        return self


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def validate_params(p: EngineParams) -> list[str]:
    """Check every field constraint of ``p``.

    Returns:
        A list naming each violated constraint; empty when ``p`` is valid.
    """
    errors: list[str] = []

    def real(name: str) -> float | None:
        v = getattr(p, name)
        if not _is_real(v):
            errors.append(f"{name} must be a finite real, got {v!r}")
            return None
        return float(v)

    def unit_interval(name: str, lo_open: bool, hi_open: bool) -> None:
        v = real(name)
        if v is None:
            return
        lo_ok = v > 0.0 if lo_open else v >= 0.0
        hi_ok = v < 1.0 if hi_open else v <= 1.0
        if not (lo_ok and hi_ok):
            interval = f"{'(' if lo_open else '['}0, 1{')' if hi_open else ']'}"
            errors.append(f"{name} must be in {interval}, got {v!r}")

    unit_interval("kappa", True, False)
    unit_interval("alpha_hat", True, False)
    unit_interval("epsilon_hat", True, False)

    lam = real("lambda_decay")
    if lam is not None and lam <= 0.0:
        errors.append(f"lambda_decay must be > 0, got {lam!r}")
    pen = real("penalty_p")
    if pen is not None and pen < 1.0:
        errors.append(f"penalty_p must be ≥ 1, got {pen!r}")
    base = real("exp_base")
    if base is not None and base <= 1.0:
        errors.append(f"exp_base must be > 1, got {base!r}")
    js = real("j_step")
    if js is not None and js < 0.0:
        errors.append(f"j_step must be ≥ 0, got {js!r}")

    unit_interval("rep_threshold", True, True)
    rep = real("rep_threshold")
    dis = real("disrep_threshold")
    if dis is not None and dis <= 0.0:
        errors.append(f"disrep_threshold must be > 0, got {dis!r}")
    if rep is not None and dis is not None and dis >= rep:
        errors.append(
            f"disrep_threshold must be < rep_threshold, got {dis!r} >= {rep!r}"
        )

    ma = p.min_advisors
    if not isinstance(ma, int) or isinstance(ma, bool) or ma < 1:
        errors.append(f"min_advisors must be a positive integer, got {ma!r}")

    unit_interval("delta_init", True, False)
    unit_interval("delta_rate", True, True)
    floor = real("delta_floor")
    init = real("delta_init")
    if floor is not None:
        if floor < 0.0:
            errors.append(f"delta_floor must be ≥ 0, got {floor!r}")
        elif init is not None and floor > init:
            errors.append(f"delta_floor must be ≤ delta_init, got {floor!r} > {init!r}")
    eps = real("classify_eps")
    if eps is not None and eps < 0.0:
        errors.append(f"classify_eps must be ≥ 0, got {eps!r}")
    return errors


def bounded_growth(rate: float, amount: float, base: float) -> float:
    """``1 - base**(-rate * amount)``, the saturating curve used for weights and update factors."""
    return -math.expm1(-rate * amount * math.log(base))
