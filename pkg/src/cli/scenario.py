"""Scenario files: what to compute, on which assemblage, and where to write it."""

import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.measurements import Assemblage, assemblage_from_json, builtin_assemblage
from src.simgrid import PreProcessing
from src.utils.errors import InvalidInputError

Task = Literal["jm", "sim-det", "nwise", "ncopy", "sim-grid", "clone-bound", "profile", "fuzz"]

# parameters that must be present for each task
REQUIRED: Dict[str, tuple] = {
    "jm": (),
    "sim-det": ("n",),
    "nwise": ("n",),
    "ncopy": ("n",),
    "sim-grid": ("n",),
    "clone-bound": ("n",),
    "profile": ("n",),
    "fuzz": ("d", "m", "k", "n", "count"),
}


class Scenario(BaseModel):
    """One task on one assemblage.

    ``assemblage`` is a builtin name ("pauli-xyz", "pauli-xz", "xzh") or an
    inline assemblage object. Subsets are 1-based here.
    """

    model_config = ConfigDict(extra="forbid")

    task: Task
    assemblage: Optional[Union[str, Dict[str, Any]]] = None
    eta: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    sweep: Optional[List[float]] = None
    n: Optional[int] = Field(default=None, ge=1)
    subset: Optional[List[int]] = None
    ell: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    pre: Optional[List[List[List[float]]]] = None
    d: Optional[int] = Field(default=None, ge=2)
    m: Optional[int] = Field(default=None, ge=1)
    k: Optional[int] = Field(default=None, ge=2)
    count: Optional[int] = Field(default=None, ge=0)
    seed: int = 0
    trials: Optional[int] = Field(default=None, ge=1)
    output: Optional[Path] = None
    csv: Optional[Path] = None
    records: Optional[Path] = None

    @model_validator(mode="after")
    def check_parameters(self):
        missing = [name for name in REQUIRED[self.task] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"task '{self.task}' needs {', '.join(missing)}")
        if self.task != "fuzz" and self.assemblage is None:
            if self.task != "clone-bound" or self.d is None or self.m is None:
                raise ValueError(f"task '{self.task}' needs an assemblage")
        if self.eta is not None and self.sweep is not None:
            raise ValueError("give either eta or sweep, not both")
        if self.sweep is not None:
            if not self.sweep:
                raise ValueError("sweep must list at least one visibility")
            if any(not 0.0 <= v <= 1.0 for v in self.sweep):
                raise ValueError("sweep visibilities must lie in [0, 1]")
            if self.task not in ("jm", "sim-det", "nwise", "ncopy"):
                raise ValueError(f"sweep is not supported for task '{self.task}'")
        if self.subset is not None:
            if self.task != "jm":
                raise ValueError("subset only applies to the jm task")
            if not self.subset or len(set(self.subset)) != len(self.subset) or min(self.subset) < 1:
                raise ValueError("subset must list distinct 1-based setting indices")
        return self

    def load_assemblage(self) -> Assemblage:
        if isinstance(self.assemblage, str):
            return builtin_assemblage(self.assemblage)
        return assemblage_from_json(self.assemblage)

    def descriptor(self) -> str:
        return self.assemblage if isinstance(self.assemblage, str) else "inline"

    def zero_based_subset(self, settings: int) -> Optional[List[int]]:
        if self.subset is None:
            return None
        if max(self.subset) > settings:
            raise InvalidInputError(f"subset {self.subset} refers past setting {settings}")
        return [x - 1 for x in self.subset]

    def pre_processings(self) -> List[PreProcessing]:
        return [PreProcessing.from_rows(rows) for rows in self.pre or []]


def load_scenario(path: Path) -> Scenario:
    """Read a JSON or YAML scenario file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            if path.suffix.lower() in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                data = json.load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise InvalidInputError(f"cannot parse scenario {path}: {e}") from e
    if not isinstance(data, dict):
        raise InvalidInputError(f"scenario {path} must hold a mapping")
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise InvalidInputError(f"invalid scenario {path}: {e}") from e
