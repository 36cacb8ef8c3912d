"""Threshold reports: JSON, CSV and plain-text tables."""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import pandas as pd
from rich.console import Console
from rich.table import Table

from src.hierarchy.profile import ENTRY_LABELS, ENTRY_ORDER, ThresholdProfile
from src.utils.logging import get_logger

logger = get_logger(__name__)


def write_json(data: Dict[str, Any], path: Path) -> Path:
    """Write data with sorted keys so identical inputs give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
    logger.info("Wrote result", path=str(path))
    return path


def profile_table(profiles: Iterable[ThresholdProfile]) -> pd.DataFrame:
    """One row per (profile, threshold) in chain order."""
    rows = []
    for profile in profiles:
        for name in ENTRY_ORDER:
            entry = profile.entries[name]
            rows.append(
                {
                    "assemblage": profile.descriptor,
                    "n": profile.n,
                    "threshold": name,
                    "set": ENTRY_LABELS[name],
                    "value": entry.value,
                    "status": entry.status,
                }
            )
    return pd.DataFrame(rows, columns=["assemblage", "n", "threshold", "set", "value", "status"])


def write_csv(profiles: Iterable[ThresholdProfile], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile_table(profiles).to_csv(path, index=False, float_format="%.6f")
    return path


def format_text(profiles: Iterable[ThresholdProfile]) -> str:
    frame = profile_table(profiles)
    frame["value"] = frame["value"].map(lambda v: "-" if pd.isna(v) else f"{v:.6f}")
    return frame.to_string(index=False)


def print_profile(profile: ThresholdProfile, console: Optional[Console] = None) -> None:
    console = console or Console()
    table = Table(title=f"Critical visibilities: {profile.descriptor} (n={profile.n})")
    table.add_column("Set")
    table.add_column("Visibility", justify="right")
    table.add_column("Status")
    for name in ENTRY_ORDER:
        entry = profile.entries[name]
        value = "-" if entry.value is None else f"{entry.value:.6f}"
        table.add_row(ENTRY_LABELS[name], value, entry.status)
    console.print(table)
