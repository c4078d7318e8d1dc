from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..base.errors import InputError
from ..base.policy import RankPolicy
from ..link.cv import CvScheme
from ..link.smoother import LinkKind
from ..simgen.designs import ModelName, SimConfig
from ..store.csv import Transform

__all__ = ["Command", "RunConfig", "parse_rank_grid", "MODEL_ALIASES"]

Command = Literal["simulate", "fit", "cv", "predict", "diagnose"]

# command-line spellings of the simulation designs
MODEL_ALIASES = {"finite-dim": "finite_dim", "null": "null_model"}


def parse_rank_grid(text: str) -> List[int]:
    """"a..b" -> [a, ..., b]; a comma list "2,5,8" is read as given.

    Raises:
        InputError: If the text is neither form or the range is empty
    """
    try:
        if ".." in text:
            a, b = (int(v) for v in text.split("..", 1))
            grid = list(range(a, b + 1))
        else:
            grid = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise InputError(f"invalid rank grid {text!r}; expected a..b or a comma list") from e
    if not grid:
        raise InputError(f"rank grid {text!r} is empty")
    return grid


class RunConfig(BaseModel):
    """Everything a command reads besides its input files.

    Replaying the JSON printed by --echo-config through --config reproduces the
    run. Fields a command does not use are ignored by it.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    data: Optional[str] = None
    out: Optional[str] = None
    fit: Optional[str] = None
    slices: int = Field(default=10, ge=1)
    rank: Optional[int] = Field(default=None, ge=1)
    rank_grid: Optional[List[int]] = None
    dirs: Optional[int] = Field(default=None, ge=1)
    scheme: Optional[CvScheme] = None
    link: LinkKind = "nw"
    seed: int = 0
    rel_tol: float = Field(default=1e-10, gt=0, lt=1)
    abs_floor: float = Field(default=0.0, ge=0)
    transform: Transform = "none"
    train_rows: Optional[int] = Field(default=None, ge=2)
    model: ModelName = "example1"
    n: Optional[int] = Field(default=None, ge=2)
    grid_size: Optional[int] = Field(default=None, ge=1)
    noise_sd: float = Field(default=0.3, ge=0)
    hurst: float = Field(default=0.75, gt=0, lt=1)
    brownian: bool = False
    k_max: int = Field(default=10, ge=1)
    workers: int = Field(default=4, ge=1)

    @field_validator("model", mode="before")
    @classmethod
    def _model_alias(cls, value):
        return MODEL_ALIASES.get(value, value)

    @field_validator("rank_grid")
    @classmethod
    def _positive_grid(cls, grid: Optional[List[int]]) -> Optional[List[int]]:
        if grid is not None:
            if not grid or min(grid) < 1:
                raise ValueError("rank grid entries must be positive")
            if len(set(grid)) != len(grid):
                raise ValueError("rank grid entries must be distinct")
        return grid

    @model_validator(mode="after")
    def _command_inputs(self) -> "RunConfig":
        needs = {
            "simulate": ["out"],
            "fit": ["data", "out", "rank"],
            "cv": ["data", "rank_grid", "dirs"],
            "predict": ["fit", "data"],
            "diagnose": ["data"],
        }[self.command]
        missing = [name for name in needs if getattr(self, name) is None]
        if missing:
            flags = ", ".join("--" + name.replace("_", "-") for name in missing)
            raise ValueError(f"{self.command} needs {flags}")
        return self

    @property
    def policy(self) -> RankPolicy:
        return RankPolicy(rel_tol=self.rel_tol, abs_floor=self.abs_floor)

    def sim_config(self) -> SimConfig:
        return SimConfig(
            model=self.model,
            n=self.n,
            grid_size=self.grid_size,
            noise_sd=self.noise_sd,
            seed=self.seed,
            hurst=self.hurst,
        )
