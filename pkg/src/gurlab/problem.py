"""JSON problem files: observables, a state and parameters, with complex numbers as [re, im]."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from .errors import GurError, ProblemFileError
from .qmat import Observable, State, density_state, observable, pure_state

ComplexPair = tuple[float, float]


class StateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["pure", "density"]
    data: Union[list[ComplexPair], list[list[ComplexPair]]]


class ProblemModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int
    observables: dict[str, list[list[ComplexPair]]]
    state: StateModel
    params: dict[str, ComplexPair] = {}

    @field_validator("dim")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("dim must be >= 1")
        return v


@dataclass
class Problem:
    dim: int
    observables: dict[str, Observable]
    state: State
    params: dict[str, complex] = field(default_factory=dict)


def _to_complex(nested) -> np.ndarray:
    a = np.asarray(nested, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def _from_complex(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [_from_complex(v) for v in a]


def parse_problem(text: str) -> Problem:
    """Parse and validate a problem file; errors carry line or field context."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        model = ProblemModel.model_validate(raw)
    except ValidationError as exc:
        msgs = "; ".join(f"{'.'.join(str(p) for p in e['loc'])}: {e['msg']}" for e in exc.errors())
        raise ProblemFileError(f"invalid problem file: {msgs}") from None

    n = model.dim
    obs = {}
    for name, m in model.observables.items():
        a = _to_complex(m)
        if a.shape != (n, n):
            raise ProblemFileError(f"observables.{name}: expected {n}x{n} matrix, got shape {a.shape}")
        try:
            obs[name] = observable(a, name=name)
        except GurError as exc:
            raise ProblemFileError(f"observables.{name}: {exc}") from None

    data = _to_complex(model.state.data)
    expected = (n,) if model.state.kind == "pure" else (n, n)
    if data.shape != expected:
        raise ProblemFileError(f"state.data: expected shape {expected}, got {data.shape}")
    try:
        state = pure_state(data) if model.state.kind == "pure" else density_state(data)
    except GurError as exc:
        raise ProblemFileError(f"state: {exc}") from None

    params = {k: complex(v[0], v[1]) for k, v in model.params.items()}
    return Problem(n, obs, state, params)


def load_problem(path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def problem_to_dict(state: State, observables: dict, params: dict | None = None) -> dict:
    """Serialize to the problem-file schema. Floats keep full round-trip precision."""
    mats = {k: np.asarray(v.matrix if isinstance(v, Observable) else v, dtype=complex) for k, v in observables.items()}
    dim = state.dim
    if state.kind == "pure":
        sd = {"kind": "pure", "data": _from_complex(state.vector)}
    else:
        sd = {"kind": "density", "data": _from_complex(state.rho)}
    return {
        "dim": dim,
        "observables": {k: _from_complex(m) for k, m in mats.items()},
        "state": sd,
        "params": {k: [complex(v).real, complex(v).imag] for k, v in (params or {}).items()},
    }


def dump_problem(state: State, observables: dict, params: dict | None = None) -> str:
    return json.dumps(problem_to_dict(state, observables, params), indent=2)
