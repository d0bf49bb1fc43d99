"""Input documents (TOML/JSON) and machine-readable report construction.

An input document names a basis, lists the nonzero brackets as rational
strings, and gives the automorphism matrix row-major.  Reports are
plain dicts with a fixed key order so serialized output is byte-stable
across runs; rationals are serialized as "p" or "p/q" strings and
polynomials as ascending coefficient arrays.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from . import algebra as builders
from .algebra import LieAlgebra, validate
from .analysis import RigidityVerdict
from .linalg import RatMatrix
from .poly import RatPoly

TOOL_NAME = "nilrigid"
TOOL_VERSION = "0.1.0"


class InputError(ValueError):
    """The input document cannot be parsed into an algebra/matrix pair."""


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    try:
        if isinstance(s, bool):
            raise TypeError
        if isinstance(s, int):
            return Fraction(s)
        if isinstance(s, str):
            return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as err:
        raise InputError(f"cannot parse rational {s!r}: {err}") from None
    raise InputError(f"cannot parse rational {s!r}: expected string or integer")


def poly_coeff_strings(p: RatPoly) -> list[str]:
    return [rational_str(c) for c in p.coeffs]


@dataclass(frozen=True)
class InputDocument:
    """Parsed form of an algebra + automorphism description."""

    dim: int
    basis: tuple[str, ...]
    brackets: tuple[tuple[str, str, tuple[tuple[str, Fraction], ...]], ...]
    matrix: RatMatrix
    metadata: dict

    def build(self) -> tuple[LieAlgebra, RatMatrix]:
        index = {name: i for i, name in enumerate(self.basis)}
        structure: dict[tuple[int, int], list[Fraction]] = {}
        for left, right, result in self.brackets:
            if left not in index or right not in index:
                raise InputError(f"bracket names [{left},{right}] do not resolve in the basis")
            i, j = index[left], index[right]
            if i == j:
                raise InputError(f"bracket [{left},{left}] must be zero; do not list it")
            vec = [Fraction(0)] * self.dim
            for name, coeff in result:
                if name not in index:
                    raise InputError(f"bracket result name {name!r} does not resolve")
                vec[index[name]] = coeff
            if i > j:
                i, j = j, i
                vec = [-c for c in vec]
            if (i, j) in structure:
                raise InputError(f"duplicate bracket entry for [{self.basis[i]},{self.basis[j]}]")
            structure[(i, j)] = vec
        alg = LieAlgebra(self.dim, list(self.basis), structure)
        return alg, self.matrix


def parse_input_mapping(doc: dict) -> InputDocument:
    try:
        alg_block = doc["algebra"]
        dim = int(alg_block["dim"])
        basis = [str(n) for n in alg_block["basis"]]
        bracket_list = alg_block.get("brackets", [])
        matrix_block = doc["automorphism"]["matrix"]
    except (KeyError, TypeError) as err:
        raise InputError(f"missing or malformed section: {err}") from None
    if dim <= 0:
        raise InputError("dimension must be positive")
    if len(basis) != dim:
        raise InputError("basis name count != dim")

    brackets = []
    for entry in bracket_list:
        try:
            left = str(entry["left"])
            right = str(entry["right"])
            result = tuple(sorted((str(k), parse_rational(v)) for k, v in entry["result"].items()))
        except (KeyError, TypeError, AttributeError) as err:
            raise InputError(f"malformed bracket entry {entry!r}: {err}") from None
        brackets.append((left, right, result))

    flat: list[Fraction] = []
    if matrix_block and isinstance(matrix_block[0], (list, tuple)):
        rows = list(matrix_block)
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise InputError(f"matrix must be {dim}x{dim}")
        for r in rows:
            flat.extend(parse_rational(x) for x in r)
    else:
        if len(matrix_block) != dim * dim:
            raise InputError(f"row-major matrix must have {dim * dim} entries")
        flat = [parse_rational(x) for x in matrix_block]
    matrix = RatMatrix(dim, dim, flat)

    metadata = dict(doc.get("metadata", {}))
    return InputDocument(dim, tuple(basis), tuple(brackets), matrix, metadata)


def load_input_file(path: str) -> InputDocument:
    """Parse a .toml or .json description (extension-detected, TOML default)."""
    try:
        if path.endswith(".json"):
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        else:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
    except OSError as err:
        raise InputError(f"cannot read {path}: {err}") from None
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as err:
        raise InputError(f"cannot parse {path}: {err}") from None
    if not isinstance(doc, dict):
        raise InputError("input document must be a table/object")
    return parse_input_mapping(doc)


# -- built-in examples -----------------------------------------------------------


def example_pair(name: str) -> tuple[LieAlgebra, RatMatrix]:
    """The named built-in example: algebra plus automorphism matrix."""
    if name == "smale":
        return builders.smale_algebra(), builders.smale_automorphism_matrix()
    if name == "free32":
        return builders.free32_algebra(), builders.free32_automorphism_matrix()
    if name == "heisenberg":
        return builders.heisenberg(), builders.heisenberg_example_matrix()
    if name == "cat2":
        return builders.abelian(2), builders.cat_map_matrix()
    raise InputError(f"unknown example {name!r} (choose from smale, free32, heisenberg, cat2)")


EXAMPLE_NAMES = ("smale", "free32", "heisenberg", "cat2")


def input_document_dict(alg: LieAlgebra, matrix: RatMatrix, name: str | None = None) -> dict:
    """Serialize a pair back into the document shape (JSON-compatible)."""
    brackets = []
    for (i, j), vec in sorted(alg.structure.items()):
        result = {alg.basis_names[k]: rational_str(c) for k, c in enumerate(vec) if c != 0}
        brackets.append({"left": alg.basis_names[i], "right": alg.basis_names[j], "result": result})
    doc = {
        "metadata": {"name": name} if name else {},
        "algebra": {"dim": alg.dim, "basis": list(alg.basis_names), "brackets": brackets},
        "automorphism": {"matrix": [rational_str(e) for e in matrix.entries]},
    }
    return doc


# -- report builders ---------------------------------------------------------------


def _tool_block() -> dict:
    return {"name": TOOL_NAME, "version": TOOL_VERSION}


def validation_dict(alg: LieAlgebra, matrix: RatMatrix, auto_ok: bool, lattice_ok: bool, message: str | None) -> dict:
    rep = validate(alg)
    return {
        "algebra_valid": rep.valid,
        "jacobi_ok": rep.jacobi_ok,
        "nilpotent": rep.nilpotent,
        "nilpotency_step": rep.step,
        "bracket_preserving": auto_ok,
        "lattice_preserving": lattice_ok,
        "determinant": rational_str(matrix.det()) if matrix.rows == matrix.cols else None,
        "message": message,
        "failures": list(rep.failures),
    }


def eigenvalue_dict(e) -> dict:
    return {
        "re": e.root.value.real,
        "im": e.root.value.imag,
        "radius": e.root.radius,
        "is_real": e.root.is_real,
        "modulus": e.modulus,
        "grade": e.grade,
        "stable": e.stable,
        "escape_speed": e.escape_speed,
    }


def verdict_report(verdict: RigidityVerdict, input_name: str, tol: float) -> dict:
    gr = verdict.grading
    sp = verdict.spectrum
    report = {
        "tool": _tool_block(),
        "input": {"name": input_name, "dim": verdict.automorphism.algebra.dim},
        "tolerance": tol,
        "validation": {
            "bracket_preserving": verdict.automorphism.bracket_preserving,
            "lattice_preserving": verdict.automorphism.lattice_preserving,
        },
        "lower_central_series_dims": [s.dim for s in gr.lcs] if gr else None,
        "grading": {
            "grade_dims": [g.dim for g in gr.grades],
            "carnot_verified": gr.carnot_verified,
            "grade_polynomials": [poly_coeff_strings(p) for p in gr.grade_polys],
        }
        if gr
        else None,
        "spectrum": {
            "simple": sp.simple_spectrum,
            "hyperbolic": sp.hyperbolic,
            "eigenvalues": [eigenvalue_dict(e) for e in sp.eigenvalues],
            "tie_witnesses": list(sp.tie_witnesses),
        }
        if sp
        else None,
        "sortedness": {
            "unstable": verdict.sorted_unstable,
            "stable": verdict.sorted_stable,
        },
        "irreducibility": [
            {
                "level": r.level,
                "polynomial": poly_coeff_strings(r.induced_poly),
                "irreducible": r.irreducible,
                "factors": [
                    {"coefficients": poly_coeff_strings(f), "multiplicity": m} for f, m in r.factors
                ],
                "warning": r.integrality_warning,
            }
            for r in verdict.irreducibility
        ]
        if verdict.irreducibility is not None
        else None,
        "verdict": verdict.verdict,
        "witnesses": list(verdict.witnesses),
    }
    return report


def geometry_report(input_name: str, outcomes: Sequence) -> dict:
    return {
        "tool": _tool_block(),
        "input": {"name": input_name},
        "checks": [
            {"name": o.name, "status": o.status, "detail": o.detail} for o in outcomes
        ],
        "passed": all(o.status != "fail" for o in outcomes),
    }


def perturb_report(input_name: str, data, pairing, mode: Sequence[int] | None, pairing_power: int) -> dict:
    return {
        "tool": _tool_block(),
        "input": {"name": input_name},
        "shear_data": {
            "inverted": data.inverted,
            "lambda_w": float(data.lambda_w),
            "lambda_u": float(data.lambda_u),
            "base_matrix": [rational_str(e) for e in data.base_matrix.entries],
            "base_dim": data.base_matrix.rows,
            "u": [float(x) for x in data.u],
        }
        if data is not None
        else None,
        "mode": list(mode) if mode is not None else None,
        "pairing_power": pairing_power if data is not None else None,
        "left": [pairing.left.real, pairing.left.imag] if pairing is not None else None,
        "right": [pairing.right.real, pairing.right.imag] if pairing is not None else None,
        "witness": bool(pairing.witness) if pairing is not None else False,
    }


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=False)


# -- JSON schemas (draft-07 style) ----------------------------------------------------

_TOOL_SCHEMA = {
    "type": "object",
    "required": ["name", "version"],
    "properties": {"name": {"type": "string"}, "version": {"type": "string"}},
}

_EIGENVALUE_SCHEMA = {
    "type": "object",
    "required": ["re", "im", "radius", "is_real", "modulus", "grade", "stable", "escape_speed"],
    "properties": {
        "re": {"type": "number"},
        "im": {"type": "number"},
        "radius": {"type": "number", "minimum": 0},
        "is_real": {"type": "boolean"},
        "modulus": {"type": "number", "minimum": 0},
        "grade": {"type": "integer", "minimum": 1},
        "stable": {"type": "boolean"},
        "escape_speed": {"type": "number", "minimum": 0},
    },
}

VERDICT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "tool", "input", "tolerance", "validation", "lower_central_series_dims",
        "grading", "spectrum", "sortedness", "irreducibility", "verdict", "witnesses",
    ],
    "properties": {
        "tool": _TOOL_SCHEMA,
        "input": {"type": "object", "required": ["name", "dim"]},
        "tolerance": {"type": "number"},
        "validation": {"type": "object"},
        "lower_central_series_dims": {
            "anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "integer"}}]
        },
        "grading": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["grade_dims", "carnot_verified", "grade_polynomials"],
                    "properties": {
                        "grade_dims": {"type": "array", "items": {"type": "integer"}},
                        "carnot_verified": {"type": "boolean"},
                        "grade_polynomials": {
                            "type": "array",
                            "items": {"type": "array", "items": {"type": "string"}},
                        },
                    },
                },
            ]
        },
        "spectrum": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["simple", "hyperbolic", "eigenvalues"],
                    "properties": {
                        "simple": {"type": "boolean"},
                        "hyperbolic": {"type": "boolean"},
                        "eigenvalues": {"type": "array", "items": _EIGENVALUE_SCHEMA},
                    },
                },
            ]
        },
        "sortedness": {
            "type": "object",
            "required": ["unstable", "stable"],
            "properties": {
                "unstable": {"anyOf": [{"type": "null"}, {"type": "boolean"}]},
                "stable": {"anyOf": [{"type": "null"}, {"type": "boolean"}]},
            },
        },
        "irreducibility": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["level", "polynomial", "irreducible", "factors"],
                    },
                },
            ]
        },
        "verdict": {"enum": ["rigid", "not_rigid", "inapplicable", "undecided"]},
        "witnesses": {"type": "array", "items": {"type": "string"}},
    },
}

GEOMETRY_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["tool", "input", "checks", "passed"],
    "properties": {
        "tool": _TOOL_SCHEMA,
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status", "detail"],
                "properties": {"status": {"enum": ["pass", "fail", "skip"]}},
            },
        },
        "passed": {"type": "boolean"},
    },
}

PERTURB_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["tool", "input", "shear_data", "left", "right", "witness"],
    "properties": {
        "tool": _TOOL_SCHEMA,
        "shear_data": {
            "anyOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["inverted", "lambda_w", "lambda_u", "base_matrix", "u"],
                    "properties": {
                        "inverted": {"type": "boolean"},
                        "lambda_w": {"type": "number"},
                        "lambda_u": {"type": "number"},
                    },
                },
            ]
        },
        "left": {"anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}}]},
        "right": {"anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}}]},
        "witness": {"type": "boolean"},
    },
}

VALIDATE_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "tool", "input", "algebra_valid", "jacobi_ok", "nilpotent", "nilpotency_step",
        "bracket_preserving", "lattice_preserving", "determinant", "failures",
    ],
    "properties": {
        "tool": _TOOL_SCHEMA,
        "algebra_valid": {"type": "boolean"},
        "jacobi_ok": {"type": "boolean"},
        "nilpotent": {"type": "boolean"},
        "nilpotency_step": {"anyOf": [{"type": "null"}, {"type": "integer"}]},
        "bracket_preserving": {"type": "boolean"},
        "lattice_preserving": {"type": "boolean"},
        "determinant": {"anyOf": [{"type": "null"}, {"type": "string"}]},
        "failures": {"type": "array", "items": {"type": "string"}},
    },
}

GRADING_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": [
        "tool", "input", "lower_central_series_dims", "grade_dims",
        "carnot_verified", "grade_polynomials",
    ],
    "properties": {
        "tool": _TOOL_SCHEMA,
        "lower_central_series_dims": {"type": "array", "items": {"type": "integer"}},
        "grade_dims": {"type": "array", "items": {"type": "integer"}},
        "carnot_verified": {"type": "boolean"},
        "grade_polynomials": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
    },
}

INPUT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["algebra", "automorphism"],
    "properties": {
        "metadata": {"type": "object"},
        "algebra": {
            "type": "object",
            "required": ["dim", "basis"],
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "basis": {"type": "array", "items": {"type": "string"}},
                "brackets": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["left", "right", "result"],
                    },
                },
            },
        },
        "automorphism": {"type": "object", "required": ["matrix"]},
    },
}
