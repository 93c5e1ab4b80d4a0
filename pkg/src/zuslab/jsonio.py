"""JSON encoding for problem files and reports.

Complex numbers are ``[re, im]`` pairs, matrices nested row lists of them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import jsonschema
import numpy as np

from .errors import SchemaError, ValidationError
from .linalg import DEFAULT_TOL, ToleranceConfig
from .objects import BipartiteState, PvmFamily, validate_family, validate_pvm, validate_state

SCHEMA_VERSION = "zuslab/1"

_complex = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_matrix = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _complex}}
_pvm = {
    "type": "object",
    "required": ["projections"],
    "properties": {
        "projections": {"type": "array", "minItems": 1, "items": _matrix},
        "labels": {"type": "array", "items": {"type": ["string", "integer"]}},
        "name": {"type": "string"},
    },
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["version", "state"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "state": {
            "type": "object",
            "required": ["d_a", "d_b", "rho"],
            "properties": {
                "d_a": {"type": "integer", "minimum": 1},
                "d_b": {"type": "integer", "minimum": 1},
                "rho": _matrix,
            },
        },
        "pvm_families": {"type": "object", "additionalProperties": {"type": "array", "items": _pvm}},
        "algebra_generators": {"type": "array", "items": _matrix},
        "tolerances": {
            "type": "object",
            "properties": {k: {"type": "number", "minimum": 0} for k in ("eq_tol", "rank_tol", "psd_tol")},
            "additionalProperties": False,
        },
        "seed": {"type": "integer"},
        "metadata": {"type": "object"},
    },
}


def encode_matrix(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def decode_matrix(data) -> np.ndarray:
    a = np.asarray(data, dtype=float)
    if a.ndim != 3 or a.shape[2] != 2:
        raise SchemaError("matrix must be a nested array of [re, im] pairs")
    return a[..., 0] + 1j * a[..., 1]


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy data: complex matrices to [re, im] form, scalars to floats."""
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            if obj.ndim == 2:
                return encode_matrix(obj)
            return [to_jsonable(x) for x in obj]
        return obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


def encode_state(state: BipartiteState) -> dict:
    return {"d_a": state.d_a, "d_b": state.d_b, "rho": encode_matrix(state.rho)}


def encode_pvm(pvm) -> dict:
    out = {"projections": [encode_matrix(p) for p in pvm.projections], "labels": list(pvm.labels)}
    if pvm.name:
        out["name"] = pvm.name
    return out


def encode_family(fam: PvmFamily) -> list:
    return [encode_pvm(p) for p in fam]


@dataclass
class ProblemFile:
    state: BipartiteState
    pvm_families: dict = field(default_factory=dict)  # name -> PvmFamily
    algebra_generators: list | None = None
    tolerances: ToleranceConfig = DEFAULT_TOL
    seed: int | None = None
    metadata: dict = field(default_factory=dict)
    version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        out = {"version": self.version, "state": encode_state(self.state),
               "pvm_families": {k: encode_family(f) for k, f in self.pvm_families.items()}}
        if self.algebra_generators is not None:
            out["algebra_generators"] = [encode_matrix(g) for g in self.algebra_generators]
        if self.tolerances != DEFAULT_TOL:
            out["tolerances"] = dict(self.tolerances.__dict__)
        if self.seed is not None:
            out["seed"] = self.seed
        if self.metadata:
            out["metadata"] = to_jsonable(self.metadata)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1)


def parse_problem(data: dict, tol_override: ToleranceConfig | None = None) -> ProblemFile:
    """Schema-check, then run every embedded object through its validator."""
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"schema violation at '{path}': {exc.message}", path=path) from None
    tol = ToleranceConfig(**data.get("tolerances", {}))
    if tol_override is not None:
        tol = tol_override
    st = data["state"]
    state = validate_state(decode_matrix(st["rho"]), st["d_a"], st["d_b"], tol)
    fams = {}
    for name, members in data.get("pvm_families", {}).items():
        pvms = []
        for i, p in enumerate(members):
            try:
                pvms.append(validate_pvm([decode_matrix(m) for m in p["projections"]], tol,
                                         labels=p.get("labels"), name=p.get("name", f"{name}[{i}]")))
            except ValidationError as exc:
                exc.details.setdefault("family", name)
                exc.details.setdefault("member", i)
                raise
        fams[name] = validate_family(pvms, state.d_a, name=name)
    gens = data.get("algebra_generators")
    if gens is not None:
        gens = [decode_matrix(g) for g in gens]
        for g in gens:
            if g.shape != (state.d_a, state.d_a):
                raise SchemaError(f"algebra generator of shape {g.shape} does not act on C^{state.d_a}")
    return ProblemFile(state, fams, gens, tol, data.get("seed"), data.get("metadata", {}), data["version"])


def load_problem(path, tol_override: ToleranceConfig | None = None) -> ProblemFile:
    try:
        with open(path) as fp:
            data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
    return parse_problem(data, tol_override)
