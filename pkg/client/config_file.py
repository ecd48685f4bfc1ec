"""
Run configuration read from a TOML file.

    [problem]
    p = 2
    f = "0"
    g = "1"
    d = "u"
    rho = "u*(1-u)"

    [problem.at_0]          # optional power-law descriptors
    d = { constant = 1, exponent = 1 }

    [solver]
    tol = 1e-4
    stima_k = [0.3]

    [profile]
    t_window = [-20, 20]

    [sweep]
    mode = "power-law"
"""
import tomllib
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from engine.coefficients.model import CoefficientSet, EndpointAsymptotics, PowerLawMeta
from engine.errors import ExpressionSyntaxError


class ConfigError(ValueError):
    """Configuration file is missing, malformed or inconsistent."""


class PowerLawConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    constant: float = Field(gt=0)
    exponent: float


class EndpointConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    d: PowerLawConfig | None = None
    rho: PowerLawConfig | None = None
    chain_condition: bool | None = None

    def asymptotics(self, endpoint: Literal[0, 1]) -> EndpointAsymptotics:
        def meta(entry: PowerLawConfig | None) -> PowerLawMeta | None:
            if entry is None:
                return None
            return PowerLawMeta(constant=entry.constant, exponent=entry.exponent, endpoint=endpoint)

        return EndpointAsymptotics(d=meta(self.d), rho=meta(self.rho), chain_condition=self.chain_condition)


class ProblemConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    p: float = Field(gt=1.0)
    f: str = "0"
    g: str = "1"
    d: str
    rho: str
    at_0: EndpointConfig = Field(default_factory=EndpointConfig)
    at_1: EndpointConfig = Field(default_factory=EndpointConfig)

    def coefficients(self) -> CoefficientSet:
        return CoefficientSet.from_expressions(
            p=self.p, f=self.f, g=self.g, d=self.d, rho=self.rho,
            endpoint_meta_0=self.at_0.asymptotics(0),
            endpoint_meta_1=self.at_1.asymptotics(1),
        )


class SolverConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tol: float | None = Field(default=None, gt=0)
    grid: int | None = Field(default=None, gt=16, description="Grid for hypotheses and running means")
    stima_k: list[float] = Field(default_factory=list)


class ProfileConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    c: float | None = None
    t_window: tuple[float, float] = (-20.0, 20.0)

    @field_validator("t_window")
    @classmethod
    def _contains_anchor(cls, value: tuple[float, float]) -> tuple[float, float]:
        if not (value[0] <= 0.0 <= value[1] and value[0] < value[1]):
            raise ValueError(f"t_window {value} must contain 0")
        return value


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["power-law", "speed"] = "power-law"
    p: list[float] = Field(default_factory=lambda: [1.5, 2.0, 3.0])
    delta: list[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    r: list[float] = Field(default_factory=lambda: [0.5, 1.0, 1.5])
    numeric: bool = Field(default=False, description="Also shoot for c* and classify at threshold")
    c_offsets: list[float] = Field(default_factory=lambda: [0.0, 0.5, 1.0, 1.5, 2.0])
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _non_empty(self) -> "SweepConfig":
        if self.mode == "power-law" and not (self.p and self.delta and self.r):
            raise ValueError("power-law sweep needs non-empty p, delta and r lists")
        if self.mode == "speed" and not self.c_offsets:
            raise ValueError("speed sweep needs at least one c offset")
        if any(offset < 0 for offset in self.c_offsets):
            raise ValueError("c offsets are measured above c* and must be non-negative")
        return self


class OutputConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    directory: Path = Path("exports")
    prefix: str = "wave"


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    problem: ProblemConfig | None = None
    solver: SolverConfig = Field(default_factory=SolverConfig)
    c: float | None = None
    profile: ProfileConfig = Field(default_factory=ProfileConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    def coefficients(self) -> CoefficientSet:
        if self.problem is None:
            raise ConfigError("configuration has no [problem] table")
        try:
            return self.problem.coefficients()
        except ExpressionSyntaxError as exc:
            raise ConfigError(f"bad coefficient expression: {exc}") from exc
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc


def load_config(path: Path) -> RunConfig:
    """
    Read and validate a TOML run configuration.

    Raises:
        ConfigError: If the file cannot be read, parsed or validated
    """
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path} is not valid TOML: {exc}") from exc
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from exc
