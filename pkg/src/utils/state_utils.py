"""Bookkeeping shared by the verification workflow nodes."""
from collections.abc import Mapping
from typing import Any


def increment_step_count(state: Mapping[str, Any]) -> int:
    """Step counter after the calling node; a missing count starts at zero."""
    return int(state.get("step_count", 0)) + 1
