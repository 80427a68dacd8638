"""JSON encodings for scalars, matrices, curves and reports.

Rationals are strings "a/b"; tower elements are {"level": k, "coeffs": [...]}
at the lowest level containing them.  Matrices are {"rows", "cols",
"entries"}; Laurent entries are {degree: scalar} maps.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .field import FieldConfig, FieldElem
from .laurent import LaurentPoly
from .matrix import LaurentMatrix, Matrix
from .tuple_rank import RankCertificate
from .witness import CheckResult, ConfigPoint, TargetCorner, VerificationReport, WitnessCurve


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- fields and scalars ------------------------------------------------------------------


def config_to_json(cfg: FieldConfig) -> dict:
    if not cfg.is_tower:
        return {"kind": "rational"}
    return {"kind": "tower", "p": cfg.p, "adjoined": [scalar_to_json(a) for a in cfg.adjoined]}


def config_from_json(obj) -> FieldConfig:
    kind = obj.get("kind", "tower")
    if kind == "rational":
        return FieldConfig.rational()
    cfg = FieldConfig.tower(int(obj["p"]))
    for a in obj.get("adjoined", []):
        level = cfg.max_level
        cfg._adjoin(_coeffs(cfg, a, level))
    return cfg


def scalar_to_json(e: FieldElem):
    if not e.config.is_tower:
        v = Fraction(e.value)
        return f"{v.numerator}/{v.denominator}"
    t = e.trimmed()
    return {"level": t.level, "coeffs": [str(c) for c in t.value]}


def _coeffs(cfg: FieldConfig, obj, level: int | None = None) -> tuple[int, ...]:
    if isinstance(obj, dict):
        coeffs = [int(c) for c in obj["coeffs"]]
        lev = int(obj.get("level", (len(coeffs) - 1).bit_length()))
    else:
        return cfg.element(obj).value
    d = 2**lev
    if len(coeffs) > d:
        raise ValueError("too many coefficients for the declared level")
    coeffs += [0] * (d - len(coeffs))
    if level is not None and lev < level:
        coeffs += [0] * (2**level - d)
    return tuple(c % cfg.p for c in coeffs)


def scalar_from_json(cfg: FieldConfig, obj) -> FieldElem:
    if isinstance(obj, dict):
        if not cfg.is_tower:
            raise ValueError("tower scalar given for a rational field")
        return cfg.element(list(_coeffs(cfg, obj)))
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise ValueError(f"cannot read scalar {obj!r}")
    return cfg.element(Fraction(obj) if isinstance(obj, str) else obj)


# -- matrices ------------------------------------------------------------------------------


def matrix_to_json(M: Matrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": [[scalar_to_json(e) for e in row] for row in M.tolist()]}


def matrix_from_json(cfg: FieldConfig, obj) -> Matrix:
    if isinstance(obj, list):
        obj = {"entries": obj, "rows": len(obj), "cols": len(obj[0]) if obj else 0}
    rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ValueError("matrix entries do not match rows/cols")
    if rows == 0 or cols == 0:
        return Matrix.zeros(cfg, rows, cols)
    return Matrix.from_rows(cfg, [[scalar_from_json(cfg, e) for e in r] for r in entries])


def poly_to_json(a: LaurentPoly) -> dict:
    return {str(k): scalar_to_json(c) for k, c in sorted(a.terms.items())}


def poly_from_json(cfg: FieldConfig, obj) -> LaurentPoly:
    return LaurentPoly(cfg, {int(k): scalar_from_json(cfg, v) for k, v in obj.items()})


def laurent_matrix_to_json(M: LaurentMatrix) -> dict:
    return {"rows": M.rows, "cols": M.cols, "entries": [[poly_to_json(e) for e in row] for row in M.tolist()]}


def laurent_matrix_from_json(cfg: FieldConfig, obj) -> LaurentMatrix:
    rows, cols, entries = int(obj["rows"]), int(obj["cols"]), obj["entries"]
    if len(entries) != rows or any(len(r) != cols for r in entries):
        raise ValueError("Laurent matrix entries do not match rows/cols")
    by_degree: dict[int, list[list]] = {}
    for i, row in enumerate(entries):
        for j, poly in enumerate(row):
            for k, v in poly.items():
                grid = by_degree.setdefault(int(k), [[0] * cols for _ in range(rows)])
                grid[i][j] = scalar_from_json(cfg, v)
    terms = {k: Matrix.from_rows(cfg, grid) for k, grid in by_degree.items()}
    return LaurentMatrix(cfg, (rows, cols), terms)


# -- composite objects -----------------------------------------------------------------------


def certificate_to_json(cert: RankCertificate) -> dict:
    out = {
        "value": "infinity" if cert.value == math.inf else cert.value,
        "witness": None if cert.witness_coeffs is None else [scalar_to_json(c) for c in cert.witness_coeffs],
        "search_domain": cert.search_domain,
        "certified": cert.certified,
        "level": cert.level,
    }
    if cert.details:
        out["details"] = {k: {str(a): b for a, b in v.items()} if isinstance(v, dict) else v for k, v in cert.details.items()}
    return out


def point_to_json(x: ConfigPoint) -> dict:
    return {
        "N": x.N,
        "sym": [matrix_to_json(M) for M in x.sym],
        "alt": [matrix_to_json(M) for M in x.alt],
        "col": matrix_to_json(x.col),
    }


def point_from_json(cfg: FieldConfig, obj) -> ConfigPoint:
    N = int(obj["N"])
    col = matrix_from_json(cfg, obj["col"]) if "col" in obj else None
    return ConfigPoint(
        cfg,
        N,
        tuple(matrix_from_json(cfg, M) for M in obj.get("sym", [])),
        tuple(matrix_from_json(cfg, M) for M in obj.get("alt", [])),
        col,
        tuple(obj.get("fin", [])),
    )


def target_to_json(t: TargetCorner) -> dict:
    return {
        "l": t.l,
        "sym": [matrix_to_json(M) for M in t.sym],
        "alt": [matrix_to_json(M) for M in t.alt],
        "col": matrix_to_json(t.col),
    }


def target_from_json(cfg: FieldConfig, obj) -> TargetCorner:
    l = int(obj["l"])
    col = matrix_from_json(cfg, obj["col"]) if "col" in obj else None
    return TargetCorner(
        cfg,
        l,
        tuple(matrix_from_json(cfg, M) for M in obj.get("sym", [])),
        tuple(matrix_from_json(cfg, M) for M in obj.get("alt", [])),
        col,
    )


def curve_to_json(W: WitnessCurve) -> dict:
    c, k = W.det_certificate
    return {"G": laurent_matrix_to_json(W.G), "det": {"c": scalar_to_json(c), "k": k}}


def curve_from_json(cfg: FieldConfig, obj) -> WitnessCurve:
    G = laurent_matrix_from_json(cfg, obj["G"])
    det = obj["det"]
    return WitnessCurve(G, (scalar_from_json(cfg, det["c"]), int(det["k"])))


def report_to_json(report: VerificationReport) -> dict:
    return {
        "passed": report.passed,
        "checks": len(report.checks),
        "failures": [check_to_json(c) for c in report.failures],
    }


def check_to_json(c: CheckResult) -> dict:
    return {"name": c.name, "component": c.component, "row": c.row, "col": c.col, "detail": c.detail}
