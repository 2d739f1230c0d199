"""Problem files (format ``ks-1``) and deterministic JSON output.

A matrix is ``{"rows": r, "cols": c, "re": [[...]], "im": [[...]]}``; ``im``
may be omitted on input.  A subspace is a list of spanning vectors, each a
list of reals or ``{"re": [...], "im": [...]}``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from typing import Any

import numpy as np

from .hilbert import Subspace, orthonormalize
from .krein import KreinSpace
from .numkernel import Tolerances

FORMAT = "ks-1"
CLEAN_REL = 1e-13


class ProblemError(ValueError):
    """Malformed or inconsistent problem file."""


@dataclass(frozen=True, eq=False)
class Problem:
    space: KreinSpace
    operator: np.ndarray | None
    subspace: Subspace
    tolerances: Tolerances
    seed: int
    w11: np.ndarray | None = None
    w12: np.ndarray | None = None


def _real_grid(obj, name: str, rows: int, cols: int) -> np.ndarray:
    try:
        A = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        raise ProblemError(f"{name} must be a numeric array") from None
    if rows * cols == 0:
        return np.zeros((rows, cols))
    if A.shape != (rows, cols):
        raise ProblemError(f"{name} has shape {A.shape}, expected {(rows, cols)}")
    return A


def parse_matrix(obj: Any, name: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict):
        raise ProblemError(f"{name} must be an object with rows, cols, re[, im]")
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
    except (KeyError, TypeError, ValueError):
        raise ProblemError(f"{name} needs integer rows and cols") from None
    if rows < 0 or cols < 0:
        raise ProblemError(f"{name} has negative dimensions")
    if "re" not in obj:
        raise ProblemError(f"{name} is missing 're'")
    M = _real_grid(obj["re"], f"{name}.re", rows, cols).astype(np.complex128)
    if "im" in obj:
        M = M + 1j * _real_grid(obj["im"], f"{name}.im", rows, cols)
    if not np.all(np.isfinite(M)):
        raise ProblemError(f"{name} has non-finite entries")
    return M


def _parse_vector(obj: Any, n: int, idx: int) -> np.ndarray:
    name = f"subspace[{idx}]"
    if isinstance(obj, dict):
        if "re" not in obj:
            raise ProblemError(f"{name} is missing 're'")
        re = _real_grid([obj["re"]], name, 1, n)[0]
        im = _real_grid([obj.get("im", [0.0] * n)], name, 1, n)[0]
        v = re + 1j * im
    else:
        v = _real_grid([obj], name, 1, n)[0].astype(np.complex128)
    if not np.all(np.isfinite(v)):
        raise ProblemError(f"{name} has non-finite entries")
    return v


def _parse_tolerances(obj: Any, base: Tolerances) -> Tolerances:
    if obj is None:
        return base
    if not isinstance(obj, dict):
        raise ProblemError("tolerances must be an object")
    known = {f.name for f in fields(Tolerances)}
    unknown = set(obj) - known
    if unknown:
        raise ProblemError(f"unknown tolerance fields: {sorted(unknown)}")
    try:
        return replace(base, **{k: float(v) for k, v in obj.items()})
    except (TypeError, ValueError) as exc:
        raise ProblemError(f"bad tolerances: {exc}") from None


def parse_problem(data: Any, need_operator: bool = True) -> Problem:
    if not isinstance(data, dict):
        raise ProblemError("problem must be a JSON object")
    if data.get("version") != FORMAT:
        raise ProblemError(f"version must be {FORMAT!r}")
    W = parse_matrix(data["operator"], "operator") if "operator" in data else None
    if W is None and need_operator:
        raise ProblemError("missing 'operator'")
    if W is not None and W.shape[0] != W.shape[1]:
        raise ProblemError("operator must be square")

    if "space" in data:
        sp = data["space"]
        if not isinstance(sp, dict) or "J" not in sp:
            raise ProblemError("space must be an object with dim and J")
        J = parse_matrix(sp["J"], "space.J")
        n = int(sp.get("dim", J.shape[0]))
        try:
            space = KreinSpace(n, J)
        except ValueError as exc:
            raise ProblemError(f"space.J: {exc}") from None
    elif W is not None:
        n = W.shape[0]
        space = KreinSpace.hilbert(n)
    else:
        raise ProblemError("need 'space' or 'operator' to fix the dimension")
    if W is not None and W.shape[0] != n:
        raise ProblemError(f"operator is {W.shape[0]}x{W.shape[0]} but the space has dimension {n}")

    vecs = data.get("subspace", [])
    if not isinstance(vecs, list):
        raise ProblemError("subspace must be a list of vectors")
    cols = [_parse_vector(v, n, i) for i, v in enumerate(vecs)]
    tol = _parse_tolerances(data.get("tolerances"), Tolerances())
    S = orthonormalize(np.column_stack(cols), tol) if cols else Subspace.zero(n)

    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ProblemError("seed must be an integer")
    w11 = parse_matrix(data["w11"], "w11") if "w11" in data else None
    w12 = parse_matrix(data["w12"], "w12") if "w12" in data else None
    return Problem(space, W, S, tol, seed, w11, w12)


def load_problem(text: str, need_operator: bool = True) -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc}") from None
    return parse_problem(data, need_operator)


def _clean(x: float, cutoff: float) -> float:
    if abs(x) <= cutoff:
        return 0.0
    y = float(f"{x:.15g}")
    return 0.0 if y == 0 else y


def matrix_to_json(M) -> dict:
    """Matrix object with entries below ``1e-13 * max|M|`` zeroed and 15 significant digits."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    top = float(np.abs(A).max()) if A.size else 0.0
    cut = CLEAN_REL * top
    re = [[_clean(v, cut) for v in row] for row in A.real.tolist()]
    im = [[_clean(v, cut) for v in row] for row in A.imag.tolist()]
    return {"rows": A.shape[0], "cols": A.shape[1], "re": re, "im": im}


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return matrix_to_json(obj) if obj.ndim == 2 else [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return _clean(x, 0.0)
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"
