"""Distances induced by valuations, axiom verification, and searches.

A valuation that is lower or upper (per its verdict) induces a distance
by one of four formula rows, keyed by monotonicity direction and which
axiom holds:

    row 1  isotone,  lower:  d(x,y) = v(x) + v(y) - 2 f_minus(x,y)
    row 2  antitone, lower:  d(x,y) = v(x) + v(y) - 2 f_plus(x,y)
    row 3  isotone,  upper:  d(x,y) = 2 f_plus(x,y) - v(x) - v(y)
    row 4  antitone, upper:  d(x,y) = 2 f_minus(x,y) - v(x) - v(y)

For strictly monotone valuations on finite posets the result is a
metric; merely monotone ones give a quasimetric (symmetric, triangle
inequality, but distinct elements may sit at distance zero).
``verify_axioms`` establishes the verdict by scanning all triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union
import warnings as _warnings

import numpy as np

from .errors import (
    DomainConditionFailed,
    EmptyFilterIntersection,
    NotNormalized,
    RowMismatch,
    UnknownElement,
    UnknownTarget,
)
from .poset import Poset
from .valuation import (
    DEFAULT_TOLERANCE,
    Valuation,
    ValuationVerdict,
    WeightFunction,
    Witness,
    check_valuation,
    ideal_sums,
    log_transform,
    make_valuation,
)

METRIC = "metric"
QUASIMETRIC = "quasimetric"
NOT_QUASIMETRIC = "not_quasimetric"

# row -> (isotone_direction, uses_lower_axiom)
_ROWS = {1: (True, True), 2: (False, True), 3: (True, False), 4: (False, False)}


def _names_of(names_or_poset: Union[Poset, Sequence[str]]) -> tuple[str, ...]:
    if isinstance(names_or_poset, Poset):
        return names_or_poset.elements
    return tuple(names_or_poset)


def verify_axioms(
    d: np.ndarray,
    names_or_poset: Union[Poset, Sequence[str]],
    tolerance: float = DEFAULT_TOLERANCE,
):
    """Scan all ordered triples for the triangle inequality and all pairs
    for separation.  Returns (verdict, witnesses); witnesses are
    ("triangle", x, y, z, d_xz, d_xy + d_yz) and ("zero_distance", x, y, d_xy)
    tuples in lexicographic order.  Degenerate triples are included, which
    also catches negative entries."""
    names = _names_of(names_or_poset)
    d = np.asarray(d, dtype=float)
    n = len(names)
    if d.shape != (n, n):
        raise ValueError(f"distance table shape {d.shape} does not match {n} elements")
    if np.abs(d - d.T).max(initial=0.0) > tolerance:
        raise ValueError("distance table is not symmetric")
    if n and np.abs(np.diagonal(d)).max() > tolerance:
        raise ValueError("distance table has a nonzero diagonal")
    witnesses = []
    for y in range(n):
        bound = d[:, y][:, None] + d[y, :][None, :]
        bad = np.argwhere(d - bound > tolerance)
        for x, z in bad:
            witnesses.append(
                ("triangle", names[x], names[y], names[z], float(d[x, z]), float(bound[x, z]))
            )
    zero_pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if abs(d[i, j]) <= tolerance:
                zero_pairs.append(("zero_distance", names[i], names[j], float(d[i, j])))
    if witnesses:
        verdict = NOT_QUASIMETRIC
    elif zero_pairs:
        verdict = QUASIMETRIC
    else:
        verdict = METRIC
    return verdict, tuple(sorted(witnesses + zero_pairs))


@dataclass(frozen=True)
class DistanceTable:
    """Symmetric distances induced by a valuation via one formula row."""

    poset: Poset
    valuation: Valuation
    table_row: int
    matrix: np.ndarray
    verdict: str
    violation_witnesses: tuple

    def d(self, x: str, y: str) -> float:
        return float(self.matrix[self.poset.index(x), self.poset.index(y)])

    def to_text(self, delimiter: str = "\t") -> str:
        """Matrix as delimited text with a header row of element names."""
        names = self.poset.elements
        lines = [delimiter.join(("",) + names)]
        for i, x in enumerate(names):
            lines.append(delimiter.join([x] + [repr(float(v)) for v in self.matrix[i]]))
        return "\n".join(lines) + "\n"


def _row_domain_ok(p: Poset, row: int) -> Optional[tuple[str, str]]:
    """First pair violating the row's nonemptiness condition, if any."""
    leq = p.leq_matrix
    n = len(p)
    use_ideals = row in (1, 4)
    for i in range(n):
        for j in range(i, n):
            mask = (leq[:, i] & leq[:, j]) if use_ideals else (leq[i, :] & leq[j, :])
            if not mask.any():
                return (p.elements[i], p.elements[j])
    return None


def induce_metric(
    v: Valuation,
    row: Optional[int] = None,
    check: Optional[ValuationVerdict] = None,
    prefer: str = "lower",
) -> DistanceTable:
    """Fill the distance table for the row the valuation satisfies.

    When the valuation is both a lower and an upper valuation the caller
    picks the row (the two candidate tables then coincide entrywise);
    ``prefer`` breaks the tie, lower first by default.
    """
    iso = v.isotone_direction  # raises NonMonotone for untagged functions
    verdict = check if check is not None else check_valuation(v)
    candidates = {}
    if iso:
        candidates = {1: verdict.is_lower, 3: verdict.is_upper}
    else:
        candidates = {2: verdict.is_lower, 4: verdict.is_upper}
    if row is None:
        order = [1, 2, 3, 4] if prefer == "lower" else [3, 4, 1, 2]
        row = next((r for r in order if candidates.get(r)), None)
        if row is None:
            raise RowMismatch(
                f"valuation ({v.monotonicity}) is neither a lower nor an upper valuation"
            )
    else:
        if row not in _ROWS:
            raise RowMismatch(f"no such row: {row}")
        if _ROWS[row][0] != iso:
            raise RowMismatch(f"row {row} needs the opposite monotonicity direction")
        if not candidates.get(row):
            raise RowMismatch(f"valuation does not satisfy the axiom of row {row}")
        pair = _row_domain_ok(v.poset, row)
        if pair is not None:
            raise DomainConditionFailed(f"row {row} domain condition fails at pair {pair}")
    p = v.poset
    n = len(p)
    mat = np.zeros((n, n), dtype=float)
    names = p.elements
    for i in range(n):
        for j in range(i + 1, n):
            vm = v.f_minus(names[i], names[j])
            vp = v.f_plus(names[i], names[j])
            s = v.value(names[i]) + v.value(names[j])
            if row == 1:
                dij = s - 2.0 * vm
            elif row == 2:
                dij = s - 2.0 * vp
            elif row == 3:
                dij = 2.0 * vp - s
            else:
                dij = 2.0 * vm - s
            mat[i, j] = mat[j, i] = dij
    verdict_str, wits = verify_axioms(mat, p, v.tolerance)
    return DistanceTable(p, v, row, mat, verdict_str, wits)


@dataclass(frozen=True)
class BoundGapResult:
    """Per-pair slack of d_v against its f_plus/f_minus envelope."""

    gaps: Mapping[tuple[str, str], float]
    equality: bool
    table: DistanceTable

    @property
    def row(self) -> int:
        return self.table.table_row


def bound_gap(v: Valuation, check: Optional[ValuationVerdict] = None) -> BoundGapResult:
    """gap(x,y) = bound(x,y) - d_v(x,y), nonnegative for any upper or
    lower valuation; all gaps vanish exactly when the valuation is both."""
    verdict = check if check is not None else check_valuation(v)
    table = induce_metric(v, check=verdict)
    p = v.poset
    names = p.elements
    gaps: dict[tuple[str, str], float] = {}
    equality = True
    tol = v.tolerance
    for i, x in enumerate(names):
        for y in names[i:]:
            vm = v.f_minus(x, y)
            vp = v.f_plus(x, y)
            bound = (vp - vm) if v.isotone_direction else (vm - vp)
            gap = bound - table.d(x, y)
            gaps[(x, y)] = gap
            if not (abs(gap) <= tol):
                equality = False
    return BoundGapResult(gaps, equality, table)


# -- information-content distance --------------------------------------------


@dataclass(frozen=True)
class JCDistanceTable:
    """Information-content distance from normalized weights."""

    poset: Poset
    weights: WeightFunction
    info: Mapping[str, float]
    included: tuple[str, ...]
    excluded: tuple[str, ...]
    matrix: np.ndarray
    verdict: str
    violation_witnesses: tuple

    def d(self, x: str, y: str) -> float:
        try:
            i = self.included.index(x)
            j = self.included.index(y)
        except ValueError:
            raise UnknownElement(f"{x!r} or {y!r} not in the included elements") from None
        return float(self.matrix[i, j])


def jc_distance(
    p: Poset, t: WeightFunction, tolerance: float = DEFAULT_TOLERANCE
) -> JCDistanceTable:
    """dist(x,y) = I(x) + I(y) - 2 sup{I(z) : z above both}, with
    I(x) = -log of the cumulative mass below x.

    Elements whose ideal carries no mass get I = +inf and are excluded
    from the table and verdict (with a warning); every included pair
    must share an upper bound.
    """
    if not t.normalized:
        raise NotNormalized(f"weights sum to {float(t._vec.sum())}, expected 1")
    mass = ideal_sums(p, t)
    info: dict[str, float] = {}
    included: list[str] = []
    excluded: list[str] = []
    for x in p.elements:
        if mass[x] <= 0.0:
            info[x] = float("inf")
            excluded.append(x)
        else:
            info[x] = -math.log(mass[x])
            included.append(x)
    if excluded:
        _warnings.warn(
            f"elements with zero cumulative mass excluded from the distance table: {excluded}",
            stacklevel=2,
        )
    leq = p.leq_matrix
    ivec = np.array([info[x] for x in p.elements])
    m = len(included)
    mat = np.zeros((m, m), dtype=float)
    for a in range(m):
        for b in range(a + 1, m):
            i, j = p.index(included[a]), p.index(included[b])
            up = leq[i, :] & leq[j, :]
            if not up.any():
                raise EmptyFilterIntersection(
                    f"elements {included[a]!r} and {included[b]!r} share no upper bound"
                )
            iplus = float(ivec[up].max())
            mat[a, b] = mat[b, a] = info[included[a]] + info[included[b]] - 2.0 * iplus
    verdict, wits = verify_axioms(mat, included, tolerance)
    return JCDistanceTable(
        p, t, info, tuple(included), tuple(excluded), mat, verdict, wits
    )


# -- counterexample search ----------------------------------------------------

TARGET_JC_TRIANGLE = "jc_triangle"
TARGET_LOG_LOWER_FAILS = "log_lower_fails"
TARGET_LOG_UPPER_FAILS = "log_upper_fails"
_TARGETS = (TARGET_JC_TRIANGLE, TARGET_LOG_LOWER_FAILS, TARGET_LOG_UPPER_FAILS)

_GRID_DENOMINATOR = 4


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _grid_points(n: int):
    """All weight vectors with entries k/4 summing to 1, lexicographic."""
    for comp in _compositions(_GRID_DENOMINATOR, n):
        yield np.array(comp, dtype=float) / _GRID_DENOMINATOR


def _candidate_weights(n: int, seed: int):
    yield from _grid_points(n)
    rng = np.random.default_rng(seed)
    while True:
        yield rng.dirichlet(np.ones(n))


@dataclass(frozen=True)
class SearchResult:
    target: str
    weights: WeightFunction
    witness: object
    iterations: int


def search_counterexample(
    p: Poset,
    target: str,
    budget: int = 100_000,
    seed: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Optional[SearchResult]:
    """Deterministic grid-then-random search over the probability simplex
    for a weight vector exhibiting the target violation.

    Targets: ``jc_triangle`` (a triangle violation of the
    information-content distance), ``log_lower_fails`` and
    ``log_upper_fails`` (the log of the cumulative lower valuation fails
    the respective axiom).  Returns None when the budget is exhausted.
    """
    if target not in _TARGETS:
        raise UnknownTarget(f"unknown target {target!r}; expected one of {_TARGETS}")
    if budget <= 0:
        raise ValueError("budget must be positive")
    n = len(p)
    names = p.elements
    for count, vec in enumerate(_candidate_weights(n, seed), start=1):
        if count > budget:
            break
        wf = WeightFunction(p, {x: float(vec[i]) for i, x in enumerate(names)}, tolerance)
        if target == TARGET_JC_TRIANGLE:
            with _warnings.catch_warnings():
                _warnings.simplefilter("ignore")
                table = jc_distance(p, wf, tolerance)
            triangles = [w for w in table.violation_witnesses if w[0] == "triangle"]
            if triangles:
                best = max(triangles, key=lambda w: w[4] - w[5])
                return SearchResult(target, wf, best, count)
        else:
            mass = ideal_sums(p, wf)
            if min(mass.values()) <= 0.0:
                continue
            logged = log_transform(make_valuation(p, mass, tolerance))
            verdict = check_valuation(logged)
            if target == TARGET_LOG_LOWER_FAILS and not verdict.is_lower:
                wit = next(w for w in verdict.witnesses if w.axiom.startswith("lower"))
                return SearchResult(target, wf, wit, count)
            if target == TARGET_LOG_UPPER_FAILS and not verdict.is_upper:
                wit = next(w for w in verdict.witnesses if w.axiom.startswith("upper"))
                return SearchResult(target, wf, wit, count)
    return None
