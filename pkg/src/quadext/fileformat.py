"""JSON documents for algebras, derivations, metrics and contexts.

Rationals are strings "p/q" (or "p"); floats are rejected. Indices are 0-based.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError
from .exactlin import Mat, Subspace
from .liealg import LieAlgebra, QuadraticLieAlgebra


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{where}: expected a rational string, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if not isinstance(x, str):
        raise InputError(f"{where}: expected a rational string, got {type(x).__name__}")
    try:
        return Fraction(x.strip())
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse rational {x!r}") from None


def mat_to_json(M: Mat) -> list:
    return [[fmt(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def mat_from_json(rows, where: str, shape: tuple[int, int] | None = None) -> Mat:
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise InputError(f"{where}: expected a list of rows")
    n = len(rows)
    m = len(rows[0]) if rows else (shape[1] if shape else 0)
    for i, r in enumerate(rows):
        if len(r) != m:
            raise InputError(f"{where}[{i}]: row length {len(r)} != {m}")
    M = Mat(n, m, [[parse_rational(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(rows)])
    if shape is not None and M.shape != shape:
        raise InputError(f"{where}: shape {M.shape} != {shape}")
    return M


def to_jsonable(x: Any):
    """Best-effort conversion of report payloads."""
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, Mat):
        return mat_to_json(x)
    if isinstance(x, Subspace):
        return {"dim": x.dim, "basis": [[fmt(v) for v in vec] for vec in x.vectors()]}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------- algebras

@dataclass
class AlgebraFile:
    name: str
    algebra: LieAlgebra
    form: Mat | None = None
    tags: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def quadratic(self) -> QuadraticLieAlgebra:
        if self.form is None:
            raise InputError(f"{self.name}: no form given")
        return QuadraticLieAlgebra(self.algebra, self.form)


def algebra_to_json(name: str, alg: LieAlgebra, form: Mat | None = None, tags: dict | None = None) -> dict:
    n = alg.dim
    entries = []
    for j in range(n):
        for k in range(j + 1, n):
            for i in range(n):
                v = alg.c[i][j][k]
                if v:
                    entries.append({"j": j, "k": k, "i": i, "value": fmt(v)})
    return {
        "name": name,
        "dim": n,
        "basis": list(alg.labels),
        "brackets": entries,
        "form": mat_to_json(form) if form is not None else None,
        "tags": tags or {},
    }


def _index(x, n: int, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
        raise InputError(f"{where}: index {x!r} out of range 0..{n - 1}")
    return x


def algebra_from_json(doc: dict, where: str = "algebra") -> AlgebraFile:
    """Loads without validating Jacobi; callers run the verifier."""
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object")
    for key in ("dim", "brackets"):
        if key not in doc:
            raise InputError(f"{where}: missing field {key!r}")
    n = doc["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise InputError(f"{where}.dim: expected a non-negative integer")
    basis = doc.get("basis") or [f"e{i + 1}" for i in range(n)]
    if len(basis) != n:
        raise InputError(f"{where}.basis: {len(basis)} labels for dim {n}")
    explicit: dict[tuple[int, int, int], Fraction] = {}
    if not isinstance(doc["brackets"], list):
        raise InputError(f"{where}.brackets: expected a list")
    for t, e in enumerate(doc["brackets"]):
        w = f"{where}.brackets[{t}]"
        if not isinstance(e, dict):
            raise InputError(f"{w}: expected an object")
        for key in ("j", "k", "i", "value"):
            if key not in e:
                raise InputError(f"{w}: missing field {key!r}")
        j, k, i = (_index(e[key], n, f"{w}.{key}") for key in ("j", "k", "i"))
        v = parse_rational(e["value"], f"{w}.value")
        if j == k:
            if v:
                raise InputError(f"{w}: [e_j, e_j] must vanish")
            continue
        key = (i, j, k)
        if key in explicit and explicit[key] != v:
            raise InputError(f"{w}: duplicate entry with a different value")
        twin = (i, k, j)
        if twin in explicit and explicit[twin] != -v:
            raise InputError(f"{w}: contradicts the skew counterpart entry")
        explicit[key] = v
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for (i, j, k), v in explicit.items():
        c[i][j][k] = v
        c[i][k][j] = -v
    alg = LieAlgebra(c, basis, validate=False)
    form = None
    if doc.get("form") is not None:
        form = mat_from_json(doc["form"], f"{where}.form", (n, n))
    tags = doc.get("tags") or {}
    if not isinstance(tags, dict):
        raise InputError(f"{where}.tags: expected an object")
    return AlgebraFile(str(doc.get("name", "")), alg, form, tags)


# -------------------------------------------------------- other documents

def maps_from_json(doc: dict, where: str = "derivations") -> list[Mat]:
    if not isinstance(doc, dict) or "maps" not in doc:
        raise InputError(f"{where}: expected an object with 'maps'")
    n = doc.get("dim")
    shape = (n, n) if isinstance(n, int) else None
    return [mat_from_json(m, f"{where}.maps[{t}]", shape) for t, m in enumerate(doc["maps"])]


def maps_to_json(maps: list[Mat]) -> dict:
    n = maps[0].rows if maps else 0
    return {"dim": n, "maps": [mat_to_json(M) for M in maps]}


def metric_from_json(doc: dict, where: str = "metric") -> Mat:
    """Either {dim, form} or a full algebra document carrying a form."""
    if not isinstance(doc, dict) or doc.get("form") is None:
        raise InputError(f"{where}: expected an object with 'form'")
    n = doc.get("dim")
    shape = (n, n) if isinstance(n, int) else None
    return mat_from_json(doc["form"], f"{where}.form", shape)


def context_from_json(doc: dict, where: str = "context"):
    from .doublecentral import DoubleExtensionContext

    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected an object")
    for key in ("h", "r"):
        if key not in doc:
            raise InputError(f"{where}: missing field {key!r}")
    hf = algebra_from_json(doc["h"], f"{where}.h")
    if hf.form is None:
        raise InputError(f"{where}.h: a form is required")
    h = QuadraticLieAlgebra(LieAlgebra(hf.algebra.c, hf.algebra.labels), hf.form)
    r = doc["r"]
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise InputError(f"{where}.r: expected a non-negative integer")
    p = h.dim
    phi = [mat_from_json(m, f"{where}.phi[{t}]", (p, p)) for t, m in enumerate(doc.get("phi") or [])]
    if not phi:
        phi = None
    elif len(phi) != r:
        raise InputError(f"{where}.phi: {len(phi)} maps for r = {r}")

    def tensor(key, last):
        raw = doc.get(key)
        if raw is None:
            return None
        try:
            return [[[parse_rational(raw[i][j][k], f"{where}.{key}[{i}][{j}][{k}]") for k in range(last)]
                     for j in range(r)] for i in range(r)]
        except (IndexError, TypeError, KeyError):
            raise InputError(f"{where}.{key}: expected an r x r x {last} tensor") from None

    return DoubleExtensionContext.make(h, r, phi, tensor("psi", p), tensor("omega", r))


def context_to_json(ctx) -> dict:
    r, p = ctx.r, ctx.p
    return {
        "h": algebra_to_json("h", ctx.h_alg.alg, ctx.h_alg.form),
        "r": r,
        "phi": [mat_to_json(M) for M in ctx.phi],
        "psi": [[[fmt(x) for x in ctx.psi[i][j]] for j in range(r)] for i in range(r)],
        "omega": [[[fmt(x) for x in ctx.omega[i][j]] for j in range(r)] for i in range(r)],
    }


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from None


def write_json(path: str | Path, doc: Any) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")
