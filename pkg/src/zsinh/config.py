"""Run configuration: the JSON schema shared by the CLI and the service.

Physical parameters travel as decimal strings so a config file never loses
precision to a JSON writer; they are parsed to floats on validation and
re-emitted with shortest-roundtrip formatting, making
parse -> serialize -> parse the identity on values.
"""

from __future__ import annotations

import json
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_serializer, field_validator

from .errors import DomainError
from .functions import AnalyticFunction, PSDSpec, atom_mixture, kobol_mgf, nts_mgf, rational_psd

SCHEMA_VERSION = 1


def _to_float(v) -> float:
    if isinstance(v, bool):
        raise ValueError("expected a number or decimal string")
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        return float(v)
    raise ValueError(f"expected a number or decimal string, got {type(v)}")


class _DecimalFields(BaseModel):
    """Base for models whose float fields serialize as decimal strings."""

    @field_serializer("*", when_used="json")
    def _floats_as_strings(self, v):
        if isinstance(v, float):
            return repr(v)
        return v


class KobolModel(_DecimalFields):
    kind: Literal["kobol"] = "kobol"
    c: float
    nu: float
    lam: float = Field(alias="lambda", default=1.01)
    mu: float = 0.0

    model_config = {"populate_by_name": True}

    _v = field_validator("c", "nu", "lam", "mu", mode="before")(_to_float)


class NTSModel(_DecimalFields):
    kind: Literal["nts"] = "nts"
    delta: float
    nu: float
    lam: float = Field(alias="lambda", default=1.01)
    mu: float = 0.0

    model_config = {"populate_by_name": True}

    _v = field_validator("delta", "nu", "lam", "mu", mode="before")(_to_float)


class MixtureModel(_DecimalFields):
    kind: Literal["mixture"] = "mixture"
    w: float
    mu: float
    base: "KobolModel"

    _v = field_validator("w", "mu", mode="before")(_to_float)


class RationalPSDModel(_DecimalFields):
    kind: Literal["rational_psd"] = "rational_psd"
    a_plus: float
    a_minus: float
    m_plus: float
    m_minus: float

    _v = field_validator("a_plus", "a_minus", "m_plus", "m_minus", mode="before")(_to_float)


ModelSpec = Union[KobolModel, NTSModel, MixtureModel, RationalPSDModel]


class Overrides(_DecimalFields):
    """Optional contour/grid knobs; absent fields mean engine defaults."""

    r_minus: Optional[float] = None
    r_plus: Optional[float] = None
    reduce: Optional[float] = None
    M: Optional[float] = None
    M1: Optional[float] = None
    p: Optional[float] = None
    phi: Optional[float] = None
    trap_N: Optional[int] = None
    trap_r: Optional[float] = None
    trap_M: Optional[float] = None
    N: Optional[int] = None
    N1: Optional[int] = None

    _v = field_validator(
        "r_minus", "r_plus", "reduce", "M", "M1", "p", "phi", "trap_r", "trap_M",
        mode="before",
    )(lambda v: None if v is None else _to_float(v))

    def engine_kwargs(self) -> dict:
        out = {}
        for key in ("r_minus", "r_plus", "reduce", "M", "M1", "p", "phi",
                    "trap_N", "trap_r", "trap_M"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.N is not None:
            out["N_override"] = self.N
        return out

    def filter_kwargs(self) -> dict:
        out = {}
        if self.N is not None:
            out["N"] = self.N
        if self.N1 is not None:
            out["N1"] = self.N1
        if self.r_plus is not None:
            out["r_plus"] = self.r_plus
        return out


class RunConfig(_DecimalFields):
    schema_version: int = SCHEMA_VERSION
    task: Literal["moment", "filter", "bench"]
    model: ModelSpec = Field(discriminator="kind")
    n: Optional[int] = None
    n_range: Optional[tuple[int, int]] = None
    method: Literal["trap", "sinh1", "sinh2", "sinh3", "log", "auto"] = "auto"
    eps: float = 1e-15
    overrides: Overrides = Field(default_factory=Overrides)
    bench_methods: Optional[list[str]] = None
    bench_repeats: int = 5

    _v = field_validator("eps", mode="before")(_to_float)

    def require_n(self) -> int:
        if self.n is None:
            raise DomainError("config needs 'n' for this task")
        return self.n

    def require_n_range(self) -> tuple[int, int]:
        if self.n_range is None:
            raise DomainError("config needs 'n_range' for this task")
        lo, hi = self.n_range
        return int(lo), int(hi)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, exclude_none=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        version = data.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise DomainError(f"unsupported schema_version {version}")
        return cls.model_validate(data)


def build_function(model: ModelSpec) -> AnalyticFunction:
    if isinstance(model, KobolModel):
        return kobol_mgf(model.c, model.nu, model.lam, model.mu)
    if isinstance(model, NTSModel):
        return nts_mgf(model.delta, model.nu, model.lam, model.mu)
    if isinstance(model, MixtureModel):
        return atom_mixture(model.w, model.mu, build_function(model.base))
    raise DomainError(f"model kind '{model.kind}' is not a moment model")


def build_psd(model: ModelSpec) -> tuple[PSDSpec, object]:
    if isinstance(model, RationalPSDModel):
        return rational_psd(model.a_plus, model.a_minus, model.m_plus, model.m_minus)
    raise DomainError(f"model kind '{model.kind}' is not a PSD model")
