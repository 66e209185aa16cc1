"""JSON encoding/decoding for the data the CLI and tests exchange.

Rationals serialize as integers when integral and "p/q" strings otherwise;
sections as {"open": [...], "values": {point: rational}}; matrices as
arrays of arrays whose entries are bare rationals (constant sections) or
section objects; k-forms with 1-based strictly increasing multi-indices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .exterior import KForm
from .modules import SectionMatrix, SectionVector
from .rings import Polynomial
from .sections import StructureSection
from .site import FiniteSpace, OpenSet, validate_topology


def fraction_to_json(q: Fraction) -> Any:
    q = Fraction(q)
    return int(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_from_json(obj: Any) -> Fraction:
    if isinstance(obj, bool):
        raise ValueError(f"not a rational: {obj!r}")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, str):
        return Fraction(obj)
    raise ValueError(f"not a rational: {obj!r}")


def space_to_json(space: FiniteSpace) -> dict:
    return {"points": list(space.points),
            "opens": [list(space.labels_of(m)) for m in sorted(space.opens)]}


def space_from_json(obj: dict) -> FiniteSpace:
    return validate_topology(obj["points"], obj["opens"])


def section_to_json(s: StructureSection) -> dict:
    return {"open": list(s.domain.labels),
            "values": {p: fraction_to_json(v) for p, v in zip(s.domain.labels, s.values)}}


def section_from_json(domain: OpenSet, obj: Any) -> StructureSection:
    if isinstance(obj, dict) and "values" in obj:
        declared = domain.space.open_set(obj.get("open", domain.labels))
        if declared != domain:
            raise ValueError(f"section declared over {declared}, expected {domain}")
        return StructureSection.from_mapping(
            domain, {p: fraction_from_json(v) for p, v in obj["values"].items()})
    return StructureSection.constant(domain, fraction_from_json(obj))


def entry_to_json(s: StructureSection) -> Any:
    """Bare rational for constant sections, full section object otherwise."""
    if s.domain.size and all(v == s.values[0] for v in s.values):
        return fraction_to_json(s.values[0])
    if s.domain.size == 0:
        return 0
    return section_to_json(s)


def matrix_to_json(m: SectionMatrix) -> list:
    return [[entry_to_json(e) for e in row] for row in m.entries]


def matrix_from_json(domain: OpenSet, obj: Sequence) -> SectionMatrix:
    return SectionMatrix(domain, [[section_from_json(domain, e) for e in row] for row in obj])


def vector_to_json(v: SectionVector) -> list:
    return [entry_to_json(e) for e in v.entries]


def vector_from_json(domain: OpenSet, obj: Sequence) -> SectionVector:
    return SectionVector(domain, [section_from_json(domain, e) for e in obj])


def kform_to_json(f: KForm) -> dict:
    coeffs = {}
    for idx in sorted(f.coeffs):
        key = "[" + ",".join(str(i + 1) for i in idx) + "]"
        coeffs[key] = entry_to_json(f.coeffs[idx])
    return {"degree": f.degree, "rank": f.rank, "coeffs": coeffs}


def _parse_multi_index(key: str) -> tuple[int, ...]:
    body = key.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"bad multi-index {key!r}")
    inner = body[1:-1].strip()
    if not inner:
        return ()
    return tuple(int(part) - 1 for part in inner.split(","))


def kform_from_json(domain: OpenSet, obj: dict) -> KForm:
    degree, rank = int(obj["degree"]), int(obj["rank"])
    coeffs = {_parse_multi_index(k): section_from_json(domain, v)
              for k, v in obj.get("coeffs", {}).items()}
    return KForm(domain, rank, degree, coeffs)


def polynomial_to_json(p: Polynomial) -> list:
    return [entry_to_json(c) if isinstance(c, StructureSection) else fraction_to_json(c)
            for c in p.coeffs]
