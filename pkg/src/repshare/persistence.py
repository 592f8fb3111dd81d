"""Buyer-ledger files and atomic writes."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .core import AdvisorCategory, Rating, ReputationError
from .ledger import AdvisorRecord, BuyerLedger
from .weighting import BehaviorStats

LEDGER_SCHEMA_VERSION = 1
LEDGER_KIND = "buyer_ledger"


class LedgerFormatError(ReputationError, ValueError):
    pass


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to a temporary sibling and rename it over ``path``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def ledger_to_dict(ledger: BuyerLedger) -> dict:
    return {
        "schema_version": LEDGER_SCHEMA_VERSION,
        "kind": LEDGER_KIND,
        "owner": ledger.owner,
        "delta": ledger.delta,
        "records": [
            {
                "advisor": rec.advisor,
                "reputation": float(rec.reputation),
                "honest_count": rec.stats.honest_count,
                "total_count": rec.stats.total_count,
                "category": rec.category.value,
            }
            for _, rec in sorted(ledger.records.items())
        ],
    }


def ledger_from_dict(data) -> BuyerLedger:
    if not isinstance(data, dict):
        raise LedgerFormatError("ledger file must contain a JSON object")
    version = data.get("schema_version")
    if version != LEDGER_SCHEMA_VERSION:
        raise LedgerFormatError(
            f"unsupported ledger schema_version {version!r} (expected {LEDGER_SCHEMA_VERSION})"
        )
    if data.get("kind") != LEDGER_KIND:
        raise LedgerFormatError(f"not a buyer ledger (kind={data.get('kind')!r})")
    try:
        records = {}
        for item in data["records"]:
            rec = AdvisorRecord(
                item["advisor"],
                Rating(item["reputation"]),
                BehaviorStats(int(item["honest_count"]), int(item["total_count"])),
                AdvisorCategory(item["category"]),
            )
            if rec.advisor in records:
                raise LedgerFormatError(f"duplicate advisor {rec.advisor!r}")
            records[rec.advisor] = rec
        return BuyerLedger(str(data["owner"]), records, float(data["delta"]))
    except LedgerFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise LedgerFormatError(f"malformed ledger: {exc!r}") from None


def persist_ledger(ledger: BuyerLedger, path) -> Path:
    text = json.dumps(ledger_to_dict(ledger), indent=2) + "\n"
    return atomic_write_text(path, text)


def load_ledger(path) -> BuyerLedger:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LedgerFormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return ledger_from_dict(data)
