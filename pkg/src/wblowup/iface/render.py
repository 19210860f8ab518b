"""Text and JSON rendering of results.

JSON is emitted compactly with sorted keys, so output is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import singledispatch

from ..blowup import BlowupElement, BlowupSetup, ExactnessReport, Presentation
from ..gring import GradedRing
from ..intlat import SmithForm
from ..polyring import IntPolynomial
from .dsl import render_setup


@dataclass(frozen=True)
class PieceTable:
    """Smith data of consecutive graded pieces, degree 0 upwards."""
    pieces: tuple[SmithForm, ...]


@dataclass(frozen=True)
class PresentationResult:
    presentation: Presentation
    pieces: PieceTable
    note: str = ""


@dataclass(frozen=True)
class GysinResult:
    alpha: IntPolynomial
    value: IntPolynomial


@dataclass(frozen=True)
class ChernOutput:
    element: BlowupElement
    correction: IntPolynomial
    keel_form: IntPolynomial | None


@dataclass(frozen=True)
class VerifyResult:
    reports: tuple[ExactnessReport, ...]

    @property
    def exact(self):
        return all(r.exact for r in self.reports)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def group_text(sf: SmithForm) -> str:
    parts = []
    if sf.free_rank == 1:
        parts.append("Z")
    elif sf.free_rank > 1:
        parts.append(f"Z^{sf.free_rank}")
    parts += [f"Z/{d}" for d in sf.torsion]
    return " + ".join(parts) if parts else "0"


def smith_json(degree: int, sf: SmithForm) -> dict:
    return {"degree": degree, "free_rank": sf.free_rank, "torsion": list(sf.torsion)}


def poly_json(f: IntPolynomial) -> list:
    terms = []
    for m, c in f.sorted_terms():
        terms.append({"coefficient": c,
                      "monomial": {n: e for n, e in zip(f.sig.names, m) if e}})
    return terms


def ring_json(R: GradedRing) -> dict:
    return {"generators": [{"name": n, "degree": d}
                           for n, d in zip(R.sig.names, R.sig.degrees)],
            "relations": [poly_json(r) for r in R.relations],
            "text": str(R)}


@singledispatch
def to_text(result) -> str:
    return str(result)


@singledispatch
def to_json(result):
    raise TypeError(f"no JSON rendering for {type(result).__name__}")


@to_text.register
def _(result: GradedRing):
    return str(result)


@to_json.register
def _(result: GradedRing):
    return ring_json(result)


@to_text.register
def _(result: PieceTable):
    return "\n".join(f"A^{k} = {group_text(sf)}" for k, sf in enumerate(result.pieces))


@to_json.register
def _(result: PieceTable):
    return [smith_json(k, sf) for k, sf in enumerate(result.pieces)]


@to_text.register
def _(result: PresentationResult):
    p = result.presentation
    lines = [str(p.ring)]
    if result.note:
        lines.append(result.note)
    if p.valid_through is not None:
        lines.append(f"valid through degree {p.valid_through}")
    lines.append(to_text(result.pieces))
    return "\n".join(lines)


@to_json.register
def _(result: PresentationResult):
    p = result.presentation
    out = {"kind": p.kind, "presentation": ring_json(p.ring),
           "valid_through": p.valid_through, "pieces": to_json(result.pieces)}
    if result.note:
        out["note"] = result.note
    return out


@to_text.register
def _(result: IntPolynomial):
    return str(result)


@to_json.register
def _(result: IntPolynomial):
    return {"text": str(result), "terms": poly_json(result)}


@to_text.register
def _(result: GysinResult):
    return str(result.value)


@to_json.register
def _(result: GysinResult):
    return {"class": to_json(result.alpha), "gysin": to_json(result.value)}


@to_text.register
def _(result: BlowupElement):
    return f"y-part: {result.y}\nexceptional part: {result.exc}"


@to_json.register
def _(result: BlowupElement):
    return {"y_part": to_json(result.y), "exc_part": to_json(result.exc)}


@to_text.register
def _(result: ChernOutput):
    lines = [to_text(result.element), f"correction factor S: {result.correction}"]
    if result.keel_form is not None:
        lines.append(f"in A*(Y)[t]: {result.keel_form}")
    return "\n".join(lines)


@to_json.register
def _(result: ChernOutput):
    out = {"total_chern": to_json(result.element), "correction": to_json(result.correction)}
    if result.keel_form is not None:
        out["keel_form"] = to_json(result.keel_form)
    return out


@to_text.register
def _(result: VerifyResult):
    lines = [r.describe() for r in result.reports]
    lines.append("exact" if result.exact else "NOT exact")
    return "\n".join(lines)


@to_json.register
def _(result: VerifyResult):
    return {"exact": result.exact,
            "degrees": [{"degree": r.degree, "exact": r.exact, "well_defined": r.well_defined,
                         "surjective": r.surjective, "image_in_kernel": r.image_in_kernel,
                         "kernel_in_image": r.kernel_in_image} for r in result.reports]}


@to_text.register
def _(result: BlowupSetup):
    return render_setup(result)


def render(result, fmt: str = "text") -> str:
    if fmt == "json":
        return dumps(to_json(result)) + "\n"
    if fmt == "text":
        return to_text(result) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
