"""Report documents and their two serialized forms.

The structured form is JSON.  Floats are written with ``repr`` (shortest
round-trip form, at most 17 significant digits), so parsing it back gives a
bit-identical :class:`ReportDocument`.  The table form is CSV-like text with
footer lines and every number printed with 17 significant digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

from .hs import HSJob, HSReport
from .jobs import job_document

FORMAT_VERSION = 1
_INF = "+inf"


@dataclass
class ReportDocument:
    job: dict
    sup_phi: float
    sup_phi_bound: float
    partial_sums: list
    characterization: float
    tail_bound: float | None
    comparability: object
    verdict: str
    exponent: float
    rule: dict
    phi_modulus_sq_range: list | None = None
    notes: list = field(default_factory=list)
    wall_clock_s: float | None = None

    @property
    def S_K(self) -> float:
        return self.partial_sums[-1][1]


def build_document(job: HSJob, report: HSReport, wall_clock_s=None) -> ReportDocument:
    comp = report.comparability
    if isinstance(comp, tuple):
        comp = {"c_lo": comp[0], "c_hi": comp[1], "x_range": list(report.comparability_range)}
    x_range = list(report.x_range) if report.x_range else None
    return ReportDocument(
        job=job_document(job),
        sup_phi=report.sup_phi,
        sup_phi_bound=report.sup_phi_bound,
        partial_sums=[[k, s] for k, s in enumerate(report.partial_sums)],
        characterization=report.characterization_value,
        tail_bound=report.tail_bound,
        comparability=comp,
        verdict=report.verdict.value,
        exponent=report.exponent,
        phi_modulus_sq_range=x_range,
        rule={
            "beta": report.beta,
            "m": report.m,
            "radial": report.n_rad,
            "angular": report.n_ang,
            "refinement_change": report.refinement_change,
        },
        notes=list(report.notes),
        wall_clock_s=wall_clock_s,
    )


def _encode(value):
    if isinstance(value, float) and math.isinf(value):
        return _INF if value > 0 else "-inf"
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _decode_float(value):
    if value == _INF:
        return math.inf
    if value == "-inf":
        return -math.inf
    return value


def emit_structured(doc: ReportDocument) -> bytes:
    body = {"format_version": FORMAT_VERSION, **_encode(asdict(doc))}
    return (json.dumps(body, indent=2, allow_nan=False) + "\n").encode("utf-8")


def parse_structured(data) -> ReportDocument:
    body = json.loads(data)
    body.pop("format_version", None)
    body["characterization"] = _decode_float(body["characterization"])
    return ReportDocument(**body)


def fmt(x) -> str:
    """17-significant-digit rendering used by the table form."""
    if x is None:
        return "unavailable"
    x = float(x)
    if math.isinf(x):
        return _INF if x > 0 else "-inf"
    return format(x, ".17g")


def emit_table(doc: ReportDocument) -> bytes:
    lines = ["k,S_k"]
    lines += [f"{k},{fmt(s)}" for k, s in doc.partial_sums]
    lines.append(f"characterization={fmt(doc.characterization)}")
    lines.append(f"tail_bound={fmt(doc.tail_bound)}")
    comp = doc.comparability
    if isinstance(comp, dict):
        lines.append(f"comparability={fmt(comp['c_lo'])},{fmt(comp['c_hi'])}")
    else:
        lines.append(f"comparability={comp}")
    lines.append(f"sup_phi={fmt(doc.sup_phi)}")
    lines.append(f"verdict={doc.verdict}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def emit_report(doc: ReportDocument, format: str = "structured") -> bytes:
    if format == "structured":
        return emit_structured(doc)
    if format == "table":
        return emit_table(doc)
    raise ValueError(f"unknown report format {format!r}")


def convergence_table(doc: ReportDocument) -> bytes:
    """(k, S_k, characterization, S_k / characterization) rows."""
    I = doc.characterization
    lines = ["k,S_k,characterization,ratio"]
    for k, s in doc.partial_sums:
        ratio = s / I if I and math.isfinite(I) else None
        lines.append(f"{k},{fmt(s)},{fmt(I)},{fmt(ratio)}")
    return ("\n".join(lines) + "\n").encode("utf-8")
