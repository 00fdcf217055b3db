"""Runtime knobs read from the environment."""

import os


def budget_override(default: int) -> int:
    """Return ``TREEMT_BUDGET`` as an int when set, else ``default``."""
    raw = os.environ.get("TREEMT_BUDGET")
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"TREEMT_BUDGET must be an integer, got {raw!r}") from None
