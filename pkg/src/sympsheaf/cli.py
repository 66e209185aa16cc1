"""Command-line surface: one JSON problem file in, one report out.

Exit codes: 0 success, 1 domain errors (degenerate form, non-unit
determinant, failed check, incompatible family), 2 malformed input.  The
JSON report is byte-stable for a fixed input file and seed; text mode is a
human-readable rendering of the same data.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import jsonio
from .charpoly import cayley_hamilton_check, char_poly, eigen_sections
from .errors import AlgebraError
from .exterior import wedge
from .presheaf import ConstantPresheaf, FunctionPresheaf, check_completeness, sample_grid
from .sections import StructureSection
from .symplectic import (
    darboux_basis,
    is_symplectic_map,
    skew_normal_form,
    standard_J,
)
from .modules import determinant_adjugate

SUBCOMMANDS = ("darboux", "normal-form", "check-symplectic", "charpoly",
               "eigen", "sheaf-check", "wedge")


def _load_problem(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        problem = json.load(fh)
    space = jsonio.space_from_json(problem["space"])
    open_labels = problem.get("open")
    U = space.whole if open_labels is None else space.open_set(open_labels)
    return problem, space, U


def _report(command: str, status: str, result=None, certificate=None, error=None) -> dict:
    report = {"command": command, "status": status, "result": result}
    if certificate is not None:
        report["certificate"] = certificate
    if error is not None:
        report["error"] = error
    return report


def _run_darboux(problem, space, U, seed):
    omega = jsonio.matrix_from_json(U, problem["form"])
    basis = darboux_basis(omega)
    result = {
        "m": basis.m,
        "basis": [jsonio.vector_to_json(v) for v in basis.s + basis.t],
        "change_of_basis": jsonio.matrix_to_json(basis.change_of_basis),
    }
    certificate = {"gram": jsonio.matrix_to_json(basis.gram)}
    return 0, _report("darboux", "ok", result, certificate)


def _run_normal_form(problem, space, U, seed):
    omega = jsonio.matrix_from_json(U, problem["form"])
    m, P = skew_normal_form(omega)
    gram = P.transpose() @ omega @ P
    result = {"m": m, "change_of_basis": jsonio.matrix_to_json(P)}
    certificate = {"gram": jsonio.matrix_to_json(gram)}
    return 0, _report("normal-form", "ok", result, certificate)


def _run_check_symplectic(problem, space, U, seed):
    M = jsonio.matrix_from_json(U, problem["matrix"])
    if "form" in problem:
        omega = jsonio.matrix_from_json(U, problem["form"])
    else:
        if M.rows % 2:
            raise AlgebraError("no reference form given and the rank is odd")
        omega = standard_J(U, M.rows // 2)
    ok = is_symplectic_map(M, omega)
    det, _ = determinant_adjugate(M)
    result = {"symplectic": ok, "det": jsonio.entry_to_json(det)}
    certificate = {"pullback": jsonio.matrix_to_json(M.transpose() @ omega @ M)}
    if ok:
        return 0, _report("check-symplectic", "ok", result, certificate)
    return 1, _report("check-symplectic", "NotSymplectic", result, certificate)


def _run_charpoly(problem, space, U, seed):
    M = jsonio.matrix_from_json(U, problem["matrix"])
    p = char_poly(M)
    residue = cayley_hamilton_check(M)
    result = {"monic": True, "coeffs": jsonio.polynomial_to_json(p)}
    certificate = {"cayley_hamilton_residue": jsonio.matrix_to_json(residue)}
    return 0, _report("charpoly", "ok", result, certificate)


def _run_eigen(problem, space, U, seed):
    M = jsonio.matrix_from_json(U, problem["matrix"])
    report = eigen_sections(M)
    pairs = [{"lambda": jsonio.entry_to_json(p.lam),
              "vector": jsonio.vector_to_json(p.vector)} for p in report.pairs]
    residues = [jsonio.vector_to_json((M @ p.vector) - p.vector.scale(p.lam))
                for p in report.pairs]
    result = {"pairs": pairs, "omitted_points": list(report.omitted_points)}
    certificate = {"residues": residues}
    return 0, _report("eigen", "ok", result, certificate)


def _axiom_witness_json(presheaf, witness):
    if witness is None:
        return None
    if hasattr(witness, "cover"):  # a compatible family
        return {"family": [{"open": list(V.labels), "section": _presheaf_section_json(s)}
                           for V, s in zip(witness.cover, witness.sections)]}
    left, right = witness
    return {"left": _presheaf_section_json(left), "right": _presheaf_section_json(right)}


def _presheaf_section_json(s):
    if isinstance(s, StructureSection):
        return jsonio.section_to_json(s)
    return jsonio.fraction_to_json(Fraction(s))


def _run_sheaf_check(problem, space, U, seed):
    kind = problem.get("presheaf", "functions")
    grid = [jsonio.fraction_from_json(g) for g in problem["grid"]] if "grid" in problem \
        else sample_grid(seed)
    if kind == "functions":
        presheaf = FunctionPresheaf(space, grid)
    elif kind == "constant":
        presheaf = ConstantPresheaf(space, grid)
    else:
        raise ValueError(f"unknown presheaf kind {kind!r}")
    cover = [space.open_set(labels) for labels in problem["cover"]]
    report = check_completeness(presheaf, U, cover)
    result = {
        "S1": {"axiom": "S1", "status": report.s1.status,
               "witness": _axiom_witness_json(presheaf, report.s1.witness)},
        "S2": {"axiom": "S2", "status": report.s2.status,
               "witness": _axiom_witness_json(presheaf, report.s2.witness)},
    }
    if report.passed:
        return 0, _report("sheaf-check", "ok", result)
    return 1, _report("sheaf-check", "CompletenessFailure", result)


def _run_wedge(problem, space, U, seed):
    xi = jsonio.kform_from_json(U, problem["xi"])
    eta = jsonio.kform_from_json(U, problem["eta"])
    out = wedge(xi, eta)
    result = {"form": jsonio.kform_to_json(out),
              "degree_overflow": out.degree > out.rank}
    return 0, _report("wedge", "ok", result)


_HANDLERS = {
    "darboux": _run_darboux,
    "normal-form": _run_normal_form,
    "check-symplectic": _run_check_symplectic,
    "charpoly": _run_charpoly,
    "eigen": _run_eigen,
    "sheaf-check": _run_sheaf_check,
    "wedge": _run_wedge,
}


def _render_value(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_render_value(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(value, list):
        lines = []
        for v in value:
            if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}- {json.dumps(v)}")  # matrix row / vector
            elif isinstance(v, (dict, list)):
                lines.append(_render_value(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
        return "\n".join(lines)
    return f"{pad}{value}"


def _emit(report: dict, mode: str, stream) -> None:
    if mode == "json":
        stream.write(json.dumps(report, indent=2) + "\n")
    else:
        stream.write(f"{report['command']}: {report['status']}\n")
        for key in ("result", "certificate", "error"):
            if report.get(key) is not None:
                stream.write(f"{key}:\n")
                stream.write(_render_value(report[key], 1) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sympsheaf",
        description="Exact symplectic algebra over sheaves on finite spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="JSON problem file")
        p.add_argument("--output", choices=("json", "text"), default="text")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized self-checks (sampled grids)")
    args = parser.parse_args(argv)
    stream = sys.stdout
    try:
        problem, space, U = _load_problem(args.input)
        code, report = _HANDLERS[args.command](problem, space, U, args.seed)
    except AlgebraError as exc:
        error = {"name": type(exc).__name__, "message": str(exc)}
        witness = getattr(exc, "points", None) or getattr(exc, "witness", None)
        if witness is not None:
            error["witness"] = _jsonable(witness)
        _emit(_report(args.command, type(exc).__name__, error=error), args.output, stream)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError, IndexError) as exc:
        error = {"name": "MalformedInput", "message": f"{type(exc).__name__}: {exc}"}
        _emit(_report(args.command, "MalformedInput", error=error), args.output, stream)
        return 2
    _emit(report, args.output, stream)
    return code


def _jsonable(value):
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return jsonio.fraction_to_json(value)
    if isinstance(value, StructureSection):
        return jsonio.section_to_json(value)
    if isinstance(value, (str, int, bool)) or value is None:
        return value
    return repr(value)


if __name__ == "__main__":
    sys.exit(main())
