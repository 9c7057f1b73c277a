"""Problem data model: constraint systems, linear objectives, privacy parameters.

The optimization problem is

    maximize c.x  subject to  A x <= b,  x >= 0,

where only the coefficient matrix ``A`` is sensitive. Public knowledge about
``A`` consists of its zero pattern (``zero_mask``) and an entrywise upper
bound (``sup_A``); together they describe the set of matrices the true ``A``
is known to belong to.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class SchemaError(ValueError):
    """A problem document is malformed; the message names the offending field."""


class DimensionError(ValueError):
    """Array shapes in a problem are inconsistent."""


class MembershipError(ValueError):
    """An entry of A exceeds its public upper bound sup_A."""


class FeasibilityAssumptionError(ValueError):
    """The worst-case region {x >= 0 : sup_A x <= b} is empty.

    The pipeline requires one point feasible under every realization of the
    bounded constraint set; the worst-case region is exactly that
    intersection, so emptiness means no amount of tightening can preserve
    feasibility.
    """


def _as_matrix(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PrivacyParams:
    """Privacy budget (epsilon, delta) and adjacency bound k.

    ``k`` bounds how far a single coefficient may move between two inputs
    that must be rendered indistinguishable.
    """

    epsilon: float
    delta: float
    k: float

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be a positive finite real, got {self.epsilon}")
        if not (0 < self.delta < 0.5):
            raise ValueError(f"delta must lie in the open interval (0, 1/2), got {self.delta}")
        if not (self.k > 0 and math.isfinite(self.k)):
            raise ValueError(f"k must be a positive finite real, got {self.k}")

    @property
    def sigma(self) -> float:
        """Noise scale k/epsilon."""
        return self.k / self.epsilon


@dataclass(frozen=True)
class ConstraintSystem:
    """Inequality system A x <= b with public structure.

    ``zero_mask`` marks structurally-zero coefficients (public; never
    privatized). ``sup_A`` is the entrywise supremum of the public bound set;
    masked entries must have ``sup_A == 0``. Arrays are frozen read-only so
    instances can be shared across threads.
    """

    A: np.ndarray
    b: np.ndarray
    zero_mask: np.ndarray
    sup_A: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A, "A")
        sup_A = _as_matrix(self.sup_A, "sup_A")
        b = np.asarray(self.b, dtype=float)
        mask = np.asarray(self.zero_mask, dtype=bool)
        m, n = A.shape
        if b.shape != (m,):
            raise DimensionError(f"b must have shape ({m},), got {b.shape}")
        if sup_A.shape != (m, n):
            raise DimensionError(f"sup_A must have shape ({m}, {n}), got {sup_A.shape}")
        if mask.shape != (m, n):
            raise DimensionError(f"zero_mask must have shape ({m}, {n}), got {mask.shape}")
        if np.any(A[mask] != 0.0):
            i, j = next(zip(*np.nonzero(mask & (A != 0.0))))
            raise ValueError(f"A[{i}][{j}] is masked as structurally zero but equals {A[i, j]}")
        if np.any(sup_A[mask] != 0.0):
            i, j = next(zip(*np.nonzero(mask & (sup_A != 0.0))))
            raise ValueError(f"sup_A[{i}][{j}] must be 0 at masked entries, got {sup_A[i, j]}")
        object.__setattr__(self, "A", _readonly(A))
        object.__setattr__(self, "b", _readonly(b))
        object.__setattr__(self, "zero_mask", _readonly(mask))
        object.__setattr__(self, "sup_A", _readonly(sup_A))

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def row_nonzero_counts(self) -> np.ndarray:
        """Number of non-masked coefficients in each row."""
        return (~self.zero_mask).sum(axis=1)


@dataclass(frozen=True)
class LinearProgram:
    """Linear objective c over a constraint system, with implicit x >= 0."""

    c: np.ndarray
    system: ConstraintSystem
    privacy: PrivacyParams | None = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        n = self.system.shape[1]
        if c.shape != (n,):
            raise DimensionError(f"c must have shape ({n},), got {c.shape}")
        object.__setattr__(self, "c", _readonly(c))

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant of the objective: the Euclidean norm of c."""
        return float(np.linalg.norm(self.c))


@dataclass(frozen=True)
class ValidatedProblem:
    """A problem that passed :func:`validate`, plus the feasibility witness.

    ``witness`` satisfies sup_A x <= b and x >= 0, certifying that a point
    exists that is feasible under every realization of the bound set.
    """

    problem: LinearProgram
    witness: np.ndarray

    @property
    def system(self) -> ConstraintSystem:
        return self.problem.system


def _require(condition: bool, field_name: str, message: str):
    if not condition:
        raise SchemaError(f"{field_name}: {message}")


def _finite_matrix(doc: dict, key: str) -> np.ndarray:
    _require(key in doc, key, "missing required field")
    value = doc[key]
    _require(isinstance(value, list) and value and all(isinstance(r, list) for r in value),
             key, "must be a non-empty array of arrays")
    width = len(value[0])
    _require(width > 0 and all(len(r) == width for r in value), key, "rows must all have the same length")
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{key}: entries must be numbers ({exc})") from None
    _require(bool(np.isfinite(arr).all()), key, "entries must be finite")
    return arr


def _finite_vector(doc: dict, key: str) -> np.ndarray:
    _require(key in doc, key, "missing required field")
    value = doc[key]
    _require(isinstance(value, list) and value, key, "must be a non-empty array")
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{key}: entries must be numbers ({exc})") from None
    _require(arr.ndim == 1, key, "must be a flat array")
    _require(bool(np.isfinite(arr).all()), key, "entries must be finite")
    return arr


def load_problem(text: str) -> LinearProgram:
    """Parse a JSON problem document.

    Schema::

        { "c": [n], "A": [m][n], "b": [m], "sup_A": [m][n],
          "zero_mask": [m][n] (optional),
          "privacy": {"epsilon": e, "delta": d, "k": k} (optional) }

    When ``zero_mask`` is absent it is inferred from the zero entries of
    ``A``. Raises :class:`SchemaError` naming the offending field, or
    :class:`DimensionError` on shape mismatches.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"document: not valid JSON ({exc})") from None
    _require(isinstance(doc, dict), "document", "top level must be a JSON object")

    A = _finite_matrix(doc, "A")
    sup_A = _finite_matrix(doc, "sup_A")
    b = _finite_vector(doc, "b")
    c = _finite_vector(doc, "c")
    m, n = A.shape
    if b.shape[0] != m:
        raise DimensionError(f"b has length {b.shape[0]} but A has {m} rows")
    if sup_A.shape != (m, n):
        raise DimensionError(f"sup_A has shape {sup_A.shape} but A has shape {(m, n)}")
    if c.shape[0] != n:
        raise DimensionError(f"c has length {c.shape[0]} but A has {n} columns")

    if "zero_mask" in doc:
        raw = doc["zero_mask"]
        _require(isinstance(raw, list) and all(isinstance(r, list) for r in raw),
                 "zero_mask", "must be an array of arrays of booleans")
        _require(all(isinstance(v, bool) for r in raw for v in r),
                 "zero_mask", "entries must be booleans")
        mask = np.asarray(raw, dtype=bool)
        if mask.shape != (m, n):
            raise DimensionError(f"zero_mask has shape {mask.shape} but A has shape {(m, n)}")
    else:
        mask = A == 0.0

    privacy = None
    if "privacy" in doc:
        block = doc["privacy"]
        _require(isinstance(block, dict), "privacy", "must be an object")
        for key in ("epsilon", "delta", "k"):
            _require(key in block, f"privacy.{key}", "missing required field")
            _require(isinstance(block[key], (int, float)) and math.isfinite(block[key]),
                     f"privacy.{key}", "must be a finite number")
        try:
            privacy = PrivacyParams(block["epsilon"], block["delta"], block["k"])
        except ValueError as exc:
            raise SchemaError(f"privacy: {exc}") from None

    system = ConstraintSystem(A=A, b=b, zero_mask=mask, sup_A=sup_A)
    return LinearProgram(c=c, system=system, privacy=privacy)


def validate(p: LinearProgram) -> ValidatedProblem:
    """Check the standing assumptions and return the problem tagged as valid.

    Checks, in order: every entry of A is within its public bound, the
    bounds are finite, and the worst-case region {x >= 0 : sup_A x <= b} is
    non-empty (established constructively by a phase-1 feasibility solve).
    The worst-case region equals the intersection of the feasible regions of
    all matrices in the bound set, so its witness point stays feasible under
    any tightening. Deterministic and side-effect free.
    """
    from .simplex import phase1_feasible

    sys_ = p.system
    if not np.isfinite(sys_.sup_A).all():
        i, j = next(zip(*np.nonzero(~np.isfinite(sys_.sup_A))))
        raise MembershipError(f"sup_A[{i}][{j}] is not finite; the bound set must be bounded")
    over = sys_.A > sys_.sup_A
    if over.any():
        i, j = next(zip(*np.nonzero(over)))
        raise MembershipError(
            f"A[{i}][{j}] = {sys_.A[i, j]} exceeds sup_A[{i}][{j}] = {sys_.sup_A[i, j]}")

    worst = ConstraintSystem(A=sys_.sup_A, b=sys_.b, zero_mask=sys_.zero_mask, sup_A=sys_.sup_A)
    witness = phase1_feasible(worst)
    if witness is None:
        raise FeasibilityAssumptionError(
            "the worst-case region {x >= 0 : sup_A x <= b} is empty; no point is feasible "
            "under every realization of the bounded constraint set, so tightened constraints "
            "cannot be guaranteed feasible")
    return ValidatedProblem(problem=p, witness=witness)
