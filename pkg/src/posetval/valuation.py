"""Real-valued functions on posets and the upper/lower valuation axioms.

The central object is :class:`Valuation`: a total map from poset
elements to reals together with its monotonicity tag.  ``f_minus`` and
``f_plus`` give the extremal value over common lower/upper bounds, with
``sup({}) = -inf`` and ``inf({}) = +inf``.  An isotone (antitone) v is a
*lower valuation* when every pair has a nonempty ideal (filter)
intersection and

    v(x) + v(y) <= f_minus(x, y) + f_plus(x, y)

holds for all pairs; the *upper valuation* axiom reverses the
inequality and swaps the nonemptiness condition.  ``check_valuation``
tests both axioms exhaustively; the Monjardet and Leclerc checkers test
the older definitions for cross-validation.
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .errors import (
    NonMonotone,
    NonPositiveValue,
    PreconditionUnmet,
    UnknownElement,
    WeightPosetMismatch,
    ZeroScale,
)
from .poset import Poset

DEFAULT_TOLERANCE = 1e-9

STRICTLY_ISOTONE = "strictly_isotone"
ISOTONE_NOT_STRICT = "isotone_not_strict"
STRICTLY_ANTITONE = "strictly_antitone"
ANTITONE_NOT_STRICT = "antitone_not_strict"
CONSTANT = "constant"
NONE = "none"

_ISOTONE_TAGS = (STRICTLY_ISOTONE, ISOTONE_NOT_STRICT, CONSTANT)
_ANTITONE_TAGS = (STRICTLY_ANTITONE, ANTITONE_NOT_STRICT)
_STRICT_TAGS = (STRICTLY_ISOTONE, STRICTLY_ANTITONE)


def classify_monotonicity(
    poset: Poset, values: Mapping[str, float], tolerance: float = DEFAULT_TOLERANCE
) -> str:
    """Tag a total map by scanning all strictly comparable pairs.

    Constant maps (both isotone and antitone within tolerance) get the
    ``constant`` tag; downstream code routes them through the isotone
    branch by convention.
    """
    missing = [x for x in poset.elements if x not in values]
    if missing:
        raise WeightPosetMismatch(f"values not total over poset elements (missing {missing})")
    vec = np.array([float(values[x]) for x in poset.elements])
    strict = poset.leq_matrix & ~np.eye(len(poset), dtype=bool)
    lo, hi = np.nonzero(strict)
    if len(lo) == 0:
        return CONSTANT
    diffs = vec[hi] - vec[lo]
    iso = bool((diffs >= -tolerance).all())
    anti = bool((diffs <= tolerance).all())
    if iso and anti:
        return CONSTANT
    if iso:
        return STRICTLY_ISOTONE if bool((diffs > tolerance).all()) else ISOTONE_NOT_STRICT
    if anti:
        return STRICTLY_ANTITONE if bool((diffs < -tolerance).all()) else ANTITONE_NOT_STRICT
    return NONE


@dataclass(frozen=True)
class Valuation:
    """Total real labeling of a poset with a verified monotonicity tag."""

    poset: Poset
    values: Mapping[str, float]
    monotonicity: str
    tolerance: float = DEFAULT_TOLERANCE
    _vec: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        missing = [x for x in self.poset.elements if x not in self.values]
        extra = [x for x in self.values if x not in self.poset]
        if missing or extra:
            raise WeightPosetMismatch(
                f"values not total over poset elements (missing {missing}, extra {extra})"
            )
        vec = np.array([float(self.values[x]) for x in self.poset.elements])
        vec.flags.writeable = False
        object.__setattr__(self, "_vec", vec)

    @property
    def isotone_direction(self) -> bool:
        """True when f_minus/f_plus use the isotone case split."""
        if self.monotonicity == NONE:
            raise NonMonotone("function is neither isotone nor antitone")
        return self.monotonicity in _ISOTONE_TAGS

    @property
    def is_strict(self) -> bool:
        return self.monotonicity in _STRICT_TAGS

    def value(self, x: str) -> float:
        if x not in self.poset:
            raise UnknownElement(f"unknown element {x!r}")
        return float(self.values[x])

    def _extremal(self, mask: np.ndarray, use_sup: bool) -> float:
        if not mask.any():
            return float("-inf") if use_sup else float("inf")
        vals = self._vec[mask]
        return float(vals.max() if use_sup else vals.min())

    def f_minus(self, x: str, y: str) -> float:
        """Extremal value over common lower bounds (sup if isotone, inf if
        antitone); -inf/+inf respectively when there are none."""
        i, j = self.poset.index(x), self.poset.index(y)
        mask = self.poset.leq_matrix[:, i] & self.poset.leq_matrix[:, j]
        return self._extremal(mask, use_sup=self.isotone_direction)

    def f_plus(self, x: str, y: str) -> float:
        """Extremal value over common upper bounds (inf if isotone, sup if
        antitone); +inf/-inf respectively when there are none."""
        i, j = self.poset.index(x), self.poset.index(y)
        mask = self.poset.leq_matrix[i, :] & self.poset.leq_matrix[j, :]
        return self._extremal(mask, use_sup=not self.isotone_direction)


def make_valuation(
    poset: Poset, values: Mapping[str, float], tolerance: float = DEFAULT_TOLERANCE
) -> Valuation:
    """Build a Valuation, classifying its monotonicity by exhaustive scan."""
    tag = classify_monotonicity(poset, values, tolerance)
    return Valuation(poset, dict(values), tag, tolerance)


@dataclass(frozen=True)
class Witness:
    """One failed inequality: lhs > rhs beyond tolerance for the named axiom."""

    x: str
    y: str
    lhs: float
    rhs: float
    axiom: str
    via: Optional[str] = None

    def sort_key(self):
        return (self.x, self.y, self.axiom, self.via or "")


@dataclass(frozen=True)
class ValuationVerdict:
    is_lower: bool
    is_upper: bool
    domain_lower_ok: bool
    domain_upper_ok: bool
    witnesses: tuple[Witness, ...]

    @property
    def domain_condition_ok(self) -> bool:
        return self.domain_lower_ok and self.domain_upper_ok


def check_valuation(v: Valuation) -> ValuationVerdict:
    """Exhaustively test the lower and upper valuation axioms.

    The nonemptiness condition is part of each axiom: a pair with an
    empty required intersection yields a domain witness instead of an
    arithmetic comparison against an infinite bound.
    """
    iso = v.isotone_direction
    p = v.poset
    leq = p.leq_matrix
    vec = v._vec
    tol = v.tolerance
    names = p.elements
    n = len(p)
    witnesses: list[Witness] = []
    lower_ok = upper_ok = True
    dom_lower_ok = dom_upper_ok = True
    for i in range(n):
        for j in range(i, n):
            down = leq[:, i] & leq[:, j]
            up = leq[i, :] & leq[j, :]
            has_down = bool(down.any())
            has_up = bool(up.any())
            if iso:
                vm = float(vec[down].max()) if has_down else float("-inf")
                vp = float(vec[up].min()) if has_up else float("inf")
                lower_dom, upper_dom = has_down, has_up
            else:
                vm = float(vec[down].min()) if has_down else float("inf")
                vp = float(vec[up].max()) if has_up else float("-inf")
                lower_dom, upper_dom = has_up, has_down
            s = float(vec[i] + vec[j])
            if not lower_dom:
                lower_ok = dom_lower_ok = False
                witnesses.append(Witness(names[i], names[j], s, float("-inf"), "lower_domain"))
            elif not (s <= vm + vp + tol):
                lower_ok = False
                witnesses.append(Witness(names[i], names[j], s, vm + vp, "lower"))
            if not upper_dom:
                upper_ok = dom_upper_ok = False
                witnesses.append(Witness(names[i], names[j], float("inf"), s, "upper_domain"))
            elif not (vm + vp <= s + tol):
                upper_ok = False
                witnesses.append(Witness(names[i], names[j], vm + vp, s, "upper"))
    witnesses.sort(key=Witness.sort_key)
    return ValuationVerdict(lower_ok, upper_ok, dom_lower_ok, dom_upper_ok, tuple(witnesses))


def check_valuation_monjardet(v: Valuation, which: str = "both") -> ValuationVerdict:
    """Monjardet's definition: bound by v(z) for every common upper (lower)
    bound z instead of by f_plus (f_minus).  Isotone functions only; the
    lower check needs a bottom element, the upper check a top."""
    if which not in ("lower", "upper", "both"):
        raise ValueError(f"which must be lower/upper/both, got {which!r}")
    if not v.isotone_direction:
        raise PreconditionUnmet("Monjardet checks are defined for isotone functions")
    p = v.poset
    do_lower = which in ("lower", "both")
    do_upper = which in ("upper", "both")
    if do_lower and p.bottom() is None:
        raise PreconditionUnmet("Monjardet lower check requires a bottom element")
    if do_upper and p.top() is None:
        raise PreconditionUnmet("Monjardet upper check requires a top element")
    leq = p.leq_matrix
    vec = v._vec
    tol = v.tolerance
    names = p.elements
    n = len(p)
    witnesses: list[Witness] = []
    lower_ok = upper_ok = True
    for i in range(n):
        for j in range(i, n):
            down = leq[:, i] & leq[:, j]
            up = leq[i, :] & leq[j, :]
            s = float(vec[i] + vec[j])
            if do_lower and down.any():
                vm = float(vec[down].max())
                for z in np.flatnonzero(up):
                    if not (s <= vm + float(vec[z]) + tol):
                        lower_ok = False
                        witnesses.append(
                            Witness(names[i], names[j], s, vm + float(vec[z]), "lower", via=names[z])
                        )
            if do_upper and up.any():
                vp = float(vec[up].min())
                for z in np.flatnonzero(down):
                    if not (vp + float(vec[z]) <= s + tol):
                        upper_ok = False
                        witnesses.append(
                            Witness(names[i], names[j], vp + float(vec[z]), s, "upper", via=names[z])
                        )
    witnesses.sort(key=Witness.sort_key)
    return ValuationVerdict(
        lower_ok if do_lower else True,
        upper_ok if do_upper else True,
        True,
        True,
        tuple(witnesses),
    )


def _is_strictly_isotone(v: Valuation) -> bool:
    # a constant tag is vacuously strict when no strictly comparable pair exists
    if v.monotonicity == STRICTLY_ISOTONE:
        return True
    if v.monotonicity == CONSTANT:
        strict = v.poset.leq_matrix & ~np.eye(len(v.poset), dtype=bool)
        return not strict.any()
    return False


def check_valuation_leclerc(v: Valuation, which: str = "both") -> ValuationVerdict:
    """Leclerc's definition on semilattices: v(x) + v(y) against
    v(x join y) + v(x meet y), tested whenever the missing extremum
    exists.  Requires strict isotonicity."""
    if which not in ("lower", "upper", "both"):
        raise ValueError(f"which must be lower/upper/both, got {which!r}")
    if not _is_strictly_isotone(v):
        raise PreconditionUnmet("Leclerc checks require a strictly isotone function")
    p = v.poset
    cls = p.classify()
    do_lower = which in ("lower", "both")
    do_upper = which in ("upper", "both")
    if do_lower and not cls.is_meet_semilattice:
        raise PreconditionUnmet("Leclerc lower check requires a meet-semilattice")
    if do_upper and not cls.is_join_semilattice:
        raise PreconditionUnmet("Leclerc upper check requires a join-semilattice")
    tol = v.tolerance
    witnesses: list[Witness] = []
    lower_ok = upper_ok = True
    names = p.elements
    for i, x in enumerate(names):
        for y in names[i:]:
            m = p.meet(x, y)
            jn = p.join(x, y)
            if m is None or jn is None:
                continue
            s = v.value(x) + v.value(y)
            both = v.value(jn) + v.value(m)
            if do_lower and not (s <= both + tol):
                lower_ok = False
                witnesses.append(Witness(x, y, s, both, "lower"))
            if do_upper and not (both <= s + tol):
                upper_ok = False
                witnesses.append(Witness(x, y, both, s, "upper"))
    witnesses.sort(key=Witness.sort_key)
    return ValuationVerdict(
        lower_ok if do_lower else True,
        upper_ok if do_upper else True,
        True,
        True,
        tuple(witnesses),
    )


# -- weighting functions ----------------------------------------------------


@dataclass(frozen=True)
class WeightFunction:
    """Nonnegative per-element weights; normalized when they sum to one."""

    poset: Poset
    weights: Mapping[str, float]
    tolerance: float = DEFAULT_TOLERANCE
    _vec: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        missing = [x for x in self.poset.elements if x not in self.weights]
        extra = [x for x in self.weights if x not in self.poset]
        if missing or extra:
            raise WeightPosetMismatch(
                f"weights not total over poset elements (missing {missing}, extra {extra})"
            )
        vec = np.array([float(self.weights[x]) for x in self.poset.elements])
        if (vec < 0).any():
            bad = self.poset.elements[int(np.argmin(vec))]
            raise ValueError(f"negative weight at element {bad!r}")
        vec.flags.writeable = False
        object.__setattr__(self, "_vec", vec)

    @property
    def normalized(self) -> bool:
        return abs(float(self._vec.sum()) - 1.0) <= self.tolerance

    @classmethod
    def uniform(cls, poset: Poset, tolerance: float = DEFAULT_TOLERANCE) -> "WeightFunction":
        n = len(poset)
        return cls(poset, {x: 1.0 / n for x in poset.elements}, tolerance)

    @classmethod
    def constant(cls, poset: Poset, value: float = 1.0, tolerance: float = DEFAULT_TOLERANCE) -> "WeightFunction":
        return cls(poset, {x: value for x in poset.elements}, tolerance)


def parse_weights_text(text: str, poset: Poset, tolerance: float = DEFAULT_TOLERANCE) -> WeightFunction:
    """Parse ``element value`` lines; totality over the poset is enforced."""
    from .errors import ParseError

    weights: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected 'element value', got {line!r}")
        try:
            weights[tokens[0]] = float(tokens[1])
        except ValueError:
            raise ParseError(lineno, f"not a number: {tokens[1]!r}") from None
    return WeightFunction(poset, weights, tolerance)


def parse_values_text(text: str, poset: Poset, tolerance: float = DEFAULT_TOLERANCE) -> Valuation:
    """Parse ``element value`` lines into a Valuation (may be negative)."""
    from .errors import ParseError

    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(lineno, f"expected 'element value', got {line!r}")
        try:
            values[tokens[0]] = float(tokens[1])
        except ValueError:
            raise ParseError(lineno, f"not a number: {tokens[1]!r}") from None
    return make_valuation(poset, values, tolerance)


def ideal_sums(p: Poset, weights: WeightFunction) -> dict[str, float]:
    """Cumulative mass below each element (the raw sums, no warnings)."""
    vec = weights._vec @ p.leq_matrix
    return {x: float(vec[i]) for i, x in enumerate(p.elements)}


def filter_sums(p: Poset, weights: WeightFunction) -> dict[str, float]:
    vec = p.leq_matrix @ weights._vec
    return {x: float(vec[i]) for i, x in enumerate(p.elements)}


def cumulative_lower(p: Poset, t: WeightFunction) -> Valuation:
    """Sum of t over the principal ideal of each element.

    On a meet-semilattice this is an isotone lower valuation (strictly
    isotone for strictly positive t); elsewhere the construction still
    makes sense but the guarantee is gone, so a warning is emitted.
    """
    if t.poset is not p and t.poset != p:
        raise WeightPosetMismatch("weight function belongs to a different poset")
    if not p.classify().is_meet_semilattice:
        _warnings.warn(
            "cumulative lower valuation on a poset that is not a meet-semilattice; "
            "the lower-valuation guarantee does not apply",
            stacklevel=2,
        )
    return make_valuation(p, ideal_sums(p, t), t.tolerance)


def cumulative_upper(p: Poset, t: WeightFunction) -> Valuation:
    """Sum of t over the principal filter of each element (antitone dual)."""
    if t.poset is not p and t.poset != p:
        raise WeightPosetMismatch("weight function belongs to a different poset")
    if not p.classify().is_join_semilattice:
        _warnings.warn(
            "cumulative upper valuation on a poset that is not a join-semilattice; "
            "the lower-valuation guarantee does not apply",
            stacklevel=2,
        )
    return make_valuation(p, filter_sums(p, t), t.tolerance)


def cardinal_ideal_valuation(p: Poset, tolerance: float = DEFAULT_TOLERANCE) -> Valuation:
    """The ideal-size valuation |down x| (strictly isotone)."""
    sizes = p.leq_matrix.sum(axis=0)
    return make_valuation(p, {x: float(sizes[i]) for i, x in enumerate(p.elements)}, tolerance)


def cardinal_filter_valuation(p: Poset, tolerance: float = DEFAULT_TOLERANCE) -> Valuation:
    """The filter-size valuation |up x| (strictly antitone)."""
    sizes = p.leq_matrix.sum(axis=1)
    return make_valuation(p, {x: float(sizes[i]) for i, x in enumerate(p.elements)}, tolerance)


def kappa_valuation(
    p: Poset, k: Iterable[str], a: float, tolerance: float = DEFAULT_TOLERANCE
) -> Valuation:
    """kappa(x) = a - |{k' in K : x <= k'}|.

    With K the meet-irreducibles and a = |K| this counts the
    meet-irreducibles that do not dominate x; for any K and a on a
    join-semilattice the result is an upper valuation.
    """
    mask = np.zeros(len(p), dtype=bool)
    for x in k:
        mask[p.index(x)] = True
    counts = (p.leq_matrix & mask[None, :]).sum(axis=1)
    return make_valuation(p, {x: float(a) - float(counts[i]) for i, x in enumerate(p.elements)}, tolerance)


# -- transforms --------------------------------------------------------------


def affine_transform(v: Valuation, k: float, a: float) -> Valuation:
    """Pointwise k*v + a.  Negative k interchanges isotone/antitone and,
    downstream, the lower/upper verdicts."""
    if k == 0:
        raise ZeroScale("affine scale factor must be nonzero")
    return make_valuation(v.poset, {x: k * v.value(x) + a for x in v.poset.elements}, v.tolerance)


def log_transform(v: Valuation) -> Valuation:
    """Pointwise natural log of a strictly positive valuation."""
    for x in v.poset.elements:
        if v.value(x) <= 0.0:
            raise NonPositiveValue(f"value at {x!r} is {v.value(x)}, cannot take log")
    return make_valuation(v.poset, {x: math.log(v.value(x)) for x in v.poset.elements}, v.tolerance)


def log_affine_transform(v: Valuation, k: float, a: float, negate: bool = False) -> Valuation:
    """log(k*v + a), optionally negated; k*v + a must stay strictly positive."""
    if k == 0:
        raise ZeroScale("affine scale factor must be nonzero")
    out: dict[str, float] = {}
    for x in v.poset.elements:
        w = k * v.value(x) + a
        if w <= 0.0:
            raise NonPositiveValue(f"k*v + a at {x!r} is {w}, cannot take log")
        out[x] = -math.log(w) if negate else math.log(w)
    return make_valuation(v.poset, out, v.tolerance)
