"""Job documents: a human-writable YAML (or JSON) description of one check.

Example::

    space: {kind: bergman_ball, n: 1, alpha: 0}
    operator: {kind: composition}
    m: 1
    phi: ["0.5*z"]
    psi: "1"
    truncation: 60
    quad: {radial: 64, angular: 128}          # optional
    tolerances: {rel: 1.0e-8, divergence_cap: 1.0e12}   # optional
"""

from __future__ import annotations

from dataclasses import asdict, fields

import yaml

from .errors import HSError, ParseError, SchemaError, ValidationError
from .hs import HSJob, Tolerances, make_job
from .parser import format_poly, parse_poly
from .series import VectorSymbol
from .spaces import OperatorKind, OpKind, SourceSpace, SpaceKind

REQUIRED = ("space", "operator", "m", "phi", "psi", "truncation")
OPTIONAL = ("quad", "tolerances", "format")


def _number(value, where, integer=False):
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, str):
        # YAML 1.1 reads "1e-8" (no dot) as a string
        try:
            value = float(value)
        except ValueError:
            raise SchemaError(f"{where}: expected a number, got {value!r}") from None
    if not isinstance(value, (int, float)):
        raise SchemaError(f"{where}: expected a number, got {value!r}")
    if integer:
        if float(value) != int(value):
            raise SchemaError(f"{where}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _mapping(doc, key):
    value = doc[key]
    if not isinstance(value, dict):
        raise SchemaError(f"{key}: expected a mapping, got {type(value).__name__}")
    return value


def _enum(cls, value, where):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(k.value for k in cls)
        raise SchemaError(f"{where}: unknown kind {value!r} (expected one of {allowed})") from None


def parse_document(data) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = yaml.safe_load(data)
    except yaml.YAMLError as exc:
        raise SchemaError(f"not a valid YAML/JSON document: {exc}") from None
    if not isinstance(doc, dict):
        raise SchemaError("job document must be a mapping at top level")
    missing = [k for k in REQUIRED if k not in doc]
    if missing:
        raise SchemaError(f"missing required field(s): {', '.join(missing)}")
    unknown = [k for k in doc if k not in REQUIRED + OPTIONAL]
    if unknown:
        raise SchemaError(f"unknown field(s): {', '.join(map(str, unknown))}")
    return doc


def load_job(data, truncation=None, quad=None) -> HSJob:
    """Parse and fully validate a job document (bytes or str).

    ``truncation`` and ``quad = (n_rad, n_ang)`` override the document.
    """
    doc = parse_document(data)

    space = _mapping(doc, "space")
    kind = _enum(SpaceKind, space.get("kind"), "space.kind")
    n = _number(space.get("n"), "space.n", integer=True)
    alpha = space.get("alpha")
    alpha = None if alpha is None else _number(alpha, "space.alpha")

    op = _mapping(doc, "operator")
    op_kind = _enum(OpKind, op.get("kind"), "operator.kind")
    t = op.get("t")
    t = None if t is None else _number(t, "operator.t")

    m = _number(doc["m"], "m", integer=True)
    if m < 1:
        raise ValidationError("m must be >= 1")
    phi_src = doc["phi"]
    if not isinstance(phi_src, list) or not phi_src:
        raise SchemaError("phi: expected a nonempty list of expressions")
    psi_src = doc["psi"]

    K = truncation if truncation is not None else _number(doc["truncation"], "truncation", integer=True)

    n_rad = n_ang = None
    if quad is not None:
        n_rad, n_ang = quad
    elif "quad" in doc:
        q = _mapping(doc, "quad")
        n_rad = _number(q.get("radial"), "quad.radial", integer=True)
        n_ang = _number(q.get("angular"), "quad.angular", integer=True)

    tol_kwargs = {}
    if "tolerances" in doc:
        tdoc = _mapping(doc, "tolerances")
        known = {f.name: f for f in fields(Tolerances)}
        for key, value in tdoc.items():
            if key not in known:
                raise SchemaError(f"tolerances: unknown field {key!r}")
            if key == "auto_refine":
                tol_kwargs[key] = bool(value)
            elif key == "grid_points":
                tol_kwargs[key] = _number(value, f"tolerances.{key}", integer=True)
            else:
                tol_kwargs[key] = _number(value, f"tolerances.{key}")

    try:
        source = SourceSpace(kind, n, alpha)
        operator = OperatorKind(op_kind, t)
        phi = VectorSymbol([parse_poly(str(e), m) for e in phi_src])
        psi = parse_poly(str(psi_src), m)
        return make_job(source, operator, phi, psi, K, n_rad, n_ang, Tolerances(**tol_kwargs))
    except ParseError:
        raise
    except (HSError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc


def job_document(job: HSJob) -> dict:
    """Echo a job as a document dict; ``load_job`` of its YAML gives the job back."""
    src, op = job.source, job.operator
    space = {"kind": src.kind.value, "n": src.n}
    if src.alpha is not None:
        space["alpha"] = src.alpha
    operator = {"kind": op.kind.value}
    if op.t is not None:
        operator["t"] = op.t
    axis = job.rule if job.m == 1 else job.rule.axis
    return {
        "space": space,
        "operator": operator,
        "m": job.m,
        "phi": [format_poly(c) for c in job.phi],
        "psi": format_poly(job.psi),
        "truncation": job.truncation,
        "quad": {"radial": axis.n_rad, "angular": axis.angular_count},
        "tolerances": asdict(job.tolerances),
    }


def dump_job(job: HSJob) -> str:
    return yaml.safe_dump(job_document(job), sort_keys=False)
