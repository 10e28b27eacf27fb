from __future__ import annotations

import json
import logging
from datetime import datetime, timezone
from enum import Enum
from typing import Any

from pydantic import BaseModel, Field


PACKAGE_VERSION = "0.1.0"
logger = logging.getLogger(__name__)


class RunComponent(str, Enum):
    GROUP = "group"
    SPEC = "spec"
    STABILIZERS = "stabilizers"
    ANALYSIS = "analysis"
    METRIC = "metric"
    ORACLE = "oracle"
    CLI = "cli"


class RunAction(str, Enum):
    VALIDATED = "validated"
    BUILT = "built"
    VERIFIED = "verified"
    COMPUTED = "computed"
    REFUSED = "refused"
    ROW_FAILED = "row_failed"
    CONVENTION = "convention"
    CAPPED = "capped"


class RunEvent(BaseModel):
    timestamp: datetime
    component: RunComponent
    action: RunAction
    message: str = ""
    metadata: dict[str, str] = Field(default_factory=dict)


def utc_now() -> datetime:
    return datetime.now(timezone.utc)


def event_payload(event: RunEvent) -> dict[str, Any]:
    payload = event.model_dump(mode="json", exclude_none=True)
    if not payload.get("message"):
        payload.pop("message", None)
    return payload


def log_event(component: RunComponent, action: RunAction, message: str = "", **fields: Any) -> None:
    event = RunEvent(
        timestamp=utc_now(),
        component=component,
        action=action,
        message=message,
        metadata={name: str(value) for name, value in fields.items()},
    )
    logger.info(json.dumps(event_payload(event), sort_keys=True, default=str))


def run_metadata(command: str, target: str, fingerprint: str | None = None) -> str:
    parts = [f"xxz-codes {PACKAGE_VERSION}", f"command={command}", f"target={target}"]
    if fingerprint:
        parts.append(f"spec={fingerprint[:16]}")
    return "# " + " ".join(parts)
