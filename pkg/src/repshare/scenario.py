"""Scenario configuration files (JSON, strict)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import fields
from pathlib import Path

from .core import EngineParams, ReputationError, validate_params
from .simulation import (
    AgentProfile,
    Behavior,
    BehaviorKind,
    Role,
    ScenarioConfig,
    ScenarioError,
    TransactionValue,
    validate_scenario,
)

SCHEMA_VERSION = 1

_TOP_KEYS = {
    "schema_version", "engine", "agents", "rounds", "transaction_value",
    "ir_noise", "advisor_noise", "seed",
}
_AGENT_KEYS = {"id", "role", "behavior", "quality", "response_rate"}
_BEHAVIOR_KEYS = {"kind", "targets", "shift"}


class ScenarioParseError(ReputationError, ValueError):
    """The file is not well-formed JSON."""

    def __init__(self, path, message: str, line: int | None = None, column: int | None = None):
        self.path, self.line, self.column = path, line, column
        where = f"{path}" if line is None else f"{path}:{line}:{column}"
        super().__init__(f"{where}: {message}")


def _unknown(obj: dict, allowed: set[str], where: str, errors: list[str]) -> None:
    for key in sorted(set(obj) - allowed):
        errors.append(f"{where}: unknown key {key!r}")


def _number(value, where: str, errors: list[str], integer: bool = False):
    ok = isinstance(value, int) if integer else isinstance(value, (int, float))
    if not ok or isinstance(value, bool):
        errors.append(f"{where} must be {'an integer' if integer else 'a number'}, got {value!r}")
        return None
    return value if integer else float(value)


def _behavior(data, where: str, errors: list[str]) -> Behavior:
    if data is None:
        return Behavior()
    if not isinstance(data, dict):
        errors.append(f"{where} must be an object")
        return Behavior()
    _unknown(data, _BEHAVIOR_KEYS, where, errors)
    try:
        kind = BehaviorKind(data.get("kind", "honest"))
    except ValueError:
        errors.append(f"{where}.kind: unknown behavior {data.get('kind')!r}")
        return Behavior()
    targets = data.get("targets")
    if targets is not None:
        if not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
            errors.append(f"{where}.targets must be a list of seller ids")
            targets = None
        else:
            targets = frozenset(targets)
    shift = _number(data.get("shift", 0.0), f"{where}.shift", errors)
    return Behavior(kind, targets, 0.0 if shift is None else shift)


def _agent(data, k: int, errors: list[str]) -> AgentProfile | None:
    where = f"agents[{k}]"
    if not isinstance(data, dict):
        errors.append(f"{where} must be an object")
        return None
    _unknown(data, _AGENT_KEYS, where, errors)
    agent_id = data.get("id")
    if not isinstance(agent_id, str) or not agent_id:
        errors.append(f"{where}.id must be a non-empty string")
        return None
    try:
        role = Role(data.get("role"))
    except ValueError:
        errors.append(f"{where}.role must be 'buyer' or 'seller', got {data.get('role')!r}")
        return None
    quality = data.get("quality")
    if quality is not None:
        quality = _number(quality, f"{where}.quality", errors)
    rate = _number(data.get("response_rate", 1.0), f"{where}.response_rate", errors)
    return AgentProfile(
        agent_id, role, _behavior(data.get("behavior"), f"{where}.behavior", errors),
        quality, 1.0 if rate is None else rate,
    )


def _transaction(data, errors: list[str]) -> TransactionValue:
    if isinstance(data, (int, float)) and not isinstance(data, bool):
        return TransactionValue("fixed", float(data))
    if not isinstance(data, dict):
        errors.append("transaction_value must be a number or an object")
        return TransactionValue()
    kind = data.get("kind", "fixed")
    if kind == "fixed":
        _unknown(data, {"kind", "x"}, "transaction_value", errors)
        x = _number(data.get("x"), "transaction_value.x", errors)
        return TransactionValue("fixed", 0.0 if x is None else x)
    if kind == "uniform":
        _unknown(data, {"kind", "lo", "hi"}, "transaction_value", errors)
        lo = _number(data.get("lo"), "transaction_value.lo", errors)
        hi = _number(data.get("hi"), "transaction_value.hi", errors)
        return TransactionValue("uniform", lo=lo or 0.0, hi=hi or 0.0)
    errors.append(f"transaction_value.kind: unknown distribution {kind!r}")
    return TransactionValue()


def scenario_from_dict(data) -> ScenarioConfig:
    """Build and fully validate a scenario; raises :class:`ScenarioError` listing every problem."""
    if not isinstance(data, dict):
        raise ScenarioError(["scenario must be a JSON object"])
    errors: list[str] = []
    _unknown(data, _TOP_KEYS, "scenario", errors)
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        errors.append(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")

    engine_data = data.get("engine", {})
    engine = EngineParams()
    if not isinstance(engine_data, dict):
        errors.append("engine must be an object")
    else:
        known = {f.name for f in fields(EngineParams)}
        for key in sorted(set(engine_data) - known):
            errors.append(f"engine: unknown key {key!r}")
        engine = EngineParams(**{k: v for k, v in engine_data.items() if k in known})

    agents_data = data.get("agents")
    agents = []
    if not isinstance(agents_data, list):
        errors.append("agents must be a list")
    else:
        agents = [a for k, item in enumerate(agents_data) if (a := _agent(item, k, errors))]

    rounds = _number(data.get("rounds"), "rounds", errors, integer=True)
    seed = _number(data.get("seed", 0), "seed", errors, integer=True)
    ir_noise = _number(data.get("ir_noise", 0.0), "ir_noise", errors)
    advisor_noise = data.get("advisor_noise")
    if advisor_noise is not None:
        advisor_noise = _number(advisor_noise, "advisor_noise", errors)
    config = ScenarioConfig(
        engine,
        tuple(agents),
        rounds if rounds is not None else 0,
        _transaction(data.get("transaction_value", 1800.0), errors),
        ir_noise or 0.0,
        advisor_noise,
        seed or 0,
    )
    if errors:
        errors.extend(f"engine: {e}" for e in validate_params(engine))
    else:
        errors.extend(validate_scenario(config))
    if errors:
        raise ScenarioError(errors)
    return config


def scenario_to_dict(config: ScenarioConfig) -> dict:
    def behavior(b: Behavior) -> dict:
        out = {"kind": b.kind.value}
        if b.targets is not None:
            out["targets"] = sorted(b.targets)
        if b.kind in (BehaviorKind.BALLOT_STUFFER, BehaviorKind.BAD_MOUTHER):
            out["shift"] = b.shift
        return out

    agents = []
    for a in config.agents:
        item = {"id": a.id, "role": a.role.value}
        if a.role is Role.SELLER:
            item["quality"] = a.quality
        else:
            item["behavior"] = behavior(a.behavior)
        if a.response_rate != 1.0:
            item["response_rate"] = a.response_rate
        agents.append(item)
    tv = config.transaction_value
    tv_out = {"kind": "fixed", "x": tv.x} if tv.kind == "fixed" else {"kind": "uniform", "lo": tv.lo, "hi": tv.hi}
    out = {
        "schema_version": SCHEMA_VERSION,
        "engine": config.engine.to_dict(),
        "agents": agents,
        "rounds": config.rounds,
        "transaction_value": tv_out,
        "ir_noise": config.ir_noise,
        "seed": config.seed,
    }
    if config.advisor_noise is not None:
        out["advisor_noise"] = config.advisor_noise
    return out


def load_scenario_bytes(raw: bytes, path="<scenario>") -> ScenarioConfig:
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(path, f"not UTF-8 text ({exc.reason})") from None
    if not text.strip():
        raise ScenarioParseError(path, "empty file", 1, 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(path, exc.msg, exc.lineno, exc.colno) from None
    return scenario_from_dict(data)


def parse_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario file. ``OSError`` propagates for unreadable paths."""
    path = Path(path)
    return load_scenario_bytes(path.read_bytes(), path)


def digest_bytes(raw: bytes) -> str:
    return "sha256:" + hashlib.sha256(raw).hexdigest()


def scenario_digest(config: ScenarioConfig) -> str:
    """Digest of the scenario's canonical JSON form."""
    canonical = json.dumps(scenario_to_dict(config), sort_keys=True, separators=(",", ":"))
    return digest_bytes(canonical.encode("utf-8"))
