"""Reputation sharing among buyer agents in an e-market.

Buyers ask other buyers (advisors) for their view of a seller, discard
opinions that stray too far from their own experience, weight the remaining
ones by each advisor's honesty record and update advisor reputations in
proportion to the transaction value.
"""

from importlib import resources

from .aggregation import (
    ExclusionReason,
    NoHonestOpinionsError,
    SharedReputationResult,
    ZeroWeightWarning,
    aggregate,
    aggregate_contributors,
)
from .core import (
    AdvisorCategory,
    EngineParams,
    InvalidParamsError,
    Opinion,
    Rating,
    RatingRangeError,
    ReputationError,
    make_rating,
    validate_params,
)
from .filtering import EmptyOpinionsError, FilterVerdict, Label, classify, second_moment
from .ledger import (
    AdvisorRecord,
    BuyerLedger,
    omega,
    penalize,
    phi,
    recategorize,
    record_outcome,
    record_round,
    reward,
)
from .sharing import SharingOutcome, share_reputation
from .solicitation import (
    ResponsePolicy,
    SolicitationPlan,
    admit_opinions,
    decay_delta,
    respond_policy,
    select_advisors,
)
from .weighting import BehaviorStats, consolidated_zeta, incentive_j, percent_hpo, weight

__version__ = "0.1.0"


def data_path(name: str):
    """Path to a scenario file shipped with the package (e.g. ``case_study.json``)."""
    return resources.files(__name__).joinpath("data", name)
