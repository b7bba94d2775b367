"""Named posets, small finite groups, and their subgroup lattices.

The named posets are the worked counterexamples plus standard
auxiliaries (pentagon, diamond, chains, boolean lattices).  Groups are
plain multiplication tables; subgroup enumeration closes the cyclic
subgroups under pairwise join, which reaches every subgroup of a finite
group.  The subgroup poset is ordered by inclusion and carries the
cardinality and log-cardinality valuations.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    InvalidGroup,
    OrderCapExceeded,
    ParseError,
    UnknownElement,
    UnknownName,
)
from .poset import Poset, build_poset
from .valuation import DEFAULT_TOLERANCE, Valuation, make_valuation

_FIXTURE_COVERS = {
    # bottom, three atoms, two coatoms, top: |down x| is not a lower valuation here
    "P1": [
        ("0", "a"), ("0", "b"), ("0", "c"),
        ("a", "d"), ("a", "e"), ("b", "d"), ("b", "e"), ("c", "d"), ("c", "e"),
        ("d", "1"), ("e", "1"),
    ],
    # the four-element boolean lattice
    "M2": [("0", "p"), ("0", "q"), ("p", "1"), ("q", "1")],
    # three minimal elements pairwise joined below a common top; the
    # information-content distance can violate the triangle inequality here
    "JC": [
        ("z1", "a"), ("z2", "a"),
        ("z1", "b"), ("z3", "b"),
        ("z2", "c"), ("z3", "c"),
        ("a", "1"), ("b", "1"), ("c", "1"),
    ],
    # pentagon: the smallest non-modular lattice
    "N5": [("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
    # diamond: modular but not distributive
    "M3": [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
}

_CHAIN_RE = re.compile(r"^chain\((\d+)\)$")
_BOOLEAN_RE = re.compile(r"^boolean\((\d+)\)$")


def named_poset(name: str) -> Poset:
    """Look up a fixture by name: P1, M2, JC, N5, M3, chain(n), boolean(n)."""
    if name in _FIXTURE_COVERS:
        return build_poset(_FIXTURE_COVERS[name])
    m = _CHAIN_RE.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownName(f"chain length must be at least 1: {name}")
        width = len(str(n))
        labels = [f"c{i:0{width}d}" for i in range(1, n + 1)]
        return build_poset(zip(labels, labels[1:]), elements=labels)
    m = _BOOLEAN_RE.match(name)
    if m:
        n = int(m.group(1))
        if not 1 <= n <= 8:
            raise UnknownName(f"boolean lattice exponent must be in 1..8: {name}")
        covers = []
        for bits in itertools.product("01", repeat=n):
            lo = "".join(bits)
            for i, b in enumerate(bits):
                if b == "0":
                    covers.append((lo, lo[:i] + "1" + lo[i + 1:]))
        return build_poset(covers)
    raise UnknownName(
        f"unknown poset fixture {name!r}; expected P1, M2, JC, N5, M3, chain(n) or boolean(n)"
    )


# -- finite groups ------------------------------------------------------------

_ASSOC_CHECK_MAX_ORDER = 64


class FiniteGroup:
    """A finite group as an n x n multiplication table over element indices."""

    __slots__ = ("table", "names", "name", "identity")

    def __init__(
        self,
        table: np.ndarray,
        names: Optional[Sequence[str]] = None,
        name: str = "G",
        check: bool = True,
    ):
        table = np.asarray(table, dtype=np.int64)
        n = table.shape[0]
        if table.shape != (n, n):
            raise InvalidGroup(f"table must be square, got {table.shape}")
        if n == 0:
            raise InvalidGroup("a group has at least one element")
        if ((table < 0) | (table >= n)).any():
            raise InvalidGroup("table entries must be element indices")
        self.table = table
        self.table.flags.writeable = False
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        if len(self.names) != n:
            raise InvalidGroup("names length does not match table order")
        self.name = name
        self.identity = self._find_identity()
        if check:
            self._validate()

    def _find_identity(self) -> int:
        n = self.order
        idx = np.arange(n)
        for e in range(n):
            if (self.table[e, :] == idx).all() and (self.table[:, e] == idx).all():
                return e
        raise InvalidGroup("table has no identity element")

    def _validate(self):
        n = self.order
        t = self.table
        for a in range(n):
            if self.identity not in t[a, :]:
                raise InvalidGroup(f"element {self.names[a]!r} has no inverse")
        if n <= _ASSOC_CHECK_MAX_ORDER:
            # left[a,b,c] = t[t[a,b],c]; right[a,b,c] = t[a,t[b,c]]
            if not np.array_equal(t[t], t[:, t]):
                raise InvalidGroup("table is not associative")

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mult(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(np.flatnonzero(self.table[a, :] == self.identity)[0])

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order {self.order})"

    # -- constructors ---------------------------------------------------

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        if n < 1:
            raise InvalidGroup("cyclic group order must be positive")
        idx = np.arange(n)
        table = (idx[:, None] + idx[None, :]) % n
        return cls(table, names=[str(i) for i in range(n)], name=f"Z{n}")

    @classmethod
    def from_permutations(cls, perms: Sequence[tuple[int, ...]], name: str) -> "FiniteGroup":
        perms = [tuple(p) for p in perms]
        lookup = {p: i for i, p in enumerate(perms)}
        n = len(perms)
        table = np.zeros((n, n), dtype=np.int64)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                composed = tuple(p[q[k]] for k in range(len(q)))
                table[i, j] = lookup[composed]
        names = ["".join(str(v) for v in p) for p in perms]
        return cls(table, names=names, name=name)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroup":
        if not 1 <= n <= 5:
            raise InvalidGroup("symmetric group supported for 1 <= n <= 5")
        perms = sorted(itertools.permutations(range(n)))
        return cls.from_permutations(perms, name=f"S{n}")

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of the regular n-gon (order 2n)."""
        if n < 1:
            raise InvalidGroup("dihedral parameter must be positive")
        rotations = [tuple((k + i) % n for k in range(n)) for i in range(n)]
        reflections = [tuple((i - k) % n for k in range(n)) for i in range(n)]
        perms = rotations + reflections
        lookup = {p: i for i, p in enumerate(perms)}
        m = 2 * n
        table = np.zeros((m, m), dtype=np.int64)
        for i, p in enumerate(perms):
            for j, q in enumerate(perms):
                composed = tuple(p[q[k]] for k in range(n))
                table[i, j] = lookup[composed]
        names = [f"r{i}" for i in range(n)] + [f"s{i}" for i in range(n)]
        return cls(table, names=names, name=f"D{n}")

    @classmethod
    def direct_product(cls, g: "FiniteGroup", h: "FiniteGroup") -> "FiniteGroup":
        ng, nh = g.order, h.order
        n = ng * nh
        table = np.zeros((n, n), dtype=np.int64)
        for a, b in itertools.product(range(ng), range(nh)):
            for c, d in itertools.product(range(ng), range(nh)):
                table[a * nh + b, c * nh + d] = g.mult(a, c) * nh + h.mult(b, d)
        names = [f"{ga}|{hb}" for ga in g.names for hb in h.names]
        return cls(table, names=names, name=f"{g.name}x{h.name}")


_GROUP_CYCLIC_RE = re.compile(r"^Z(\d+)$")
_GROUP_PRODUCT_RE = re.compile(r"^Z(\d+)xZ(\d+)$")
_GROUP_SYMMETRIC_RE = re.compile(r"^S(\d)$")
_GROUP_DIHEDRAL_RE = re.compile(r"^D(\d+)$")


def named_group(name: str) -> FiniteGroup:
    """Look up a group by name: Zn, ZnxZm, Sn (n <= 4), Dn."""
    m = _GROUP_CYCLIC_RE.match(name)
    if m:
        return FiniteGroup.cyclic(int(m.group(1)))
    m = _GROUP_PRODUCT_RE.match(name)
    if m:
        return FiniteGroup.direct_product(
            FiniteGroup.cyclic(int(m.group(1))), FiniteGroup.cyclic(int(m.group(2)))
        )
    m = _GROUP_SYMMETRIC_RE.match(name)
    if m:
        return FiniteGroup.symmetric(int(m.group(1)))
    m = _GROUP_DIHEDRAL_RE.match(name)
    if m:
        return FiniteGroup.dihedral(int(m.group(1)))
    raise UnknownName(f"unknown group {name!r}; expected Zn, ZnxZm, Sn or Dn")


def parse_group_table(text: str) -> FiniteGroup:
    """Parse the table format: an ``order n`` line, then n rows of n indices."""
    lines = [
        (lineno, line.strip())
        for lineno, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ParseError(1, "empty group file")
    lineno, header = lines[0]
    tokens = header.split()
    if len(tokens) != 2 or tokens[0] != "order":
        raise ParseError(lineno, f"expected 'order n', got {header!r}")
    try:
        n = int(tokens[1])
    except ValueError:
        raise ParseError(lineno, f"not an integer: {tokens[1]!r}") from None
    rows = lines[1:]
    if len(rows) != n:
        raise ParseError(lineno, f"expected {n} table rows, found {len(rows)}")
    table = np.zeros((n, n), dtype=np.int64)
    for r, (rowno, row) in enumerate(rows):
        entries = row.split()
        if len(entries) != n:
            raise ParseError(rowno, f"expected {n} entries, found {len(entries)}")
        try:
            table[r, :] = [int(e) for e in entries]
        except ValueError:
            raise ParseError(rowno, "table entries must be integers") from None
    return FiniteGroup(table, name="file")


# -- subgroup lattices ---------------------------------------------------------

DEFAULT_ORDER_CAP = 24


def _closure(table: np.ndarray, seed: Iterable[int]) -> frozenset[int]:
    current = set(seed)
    frontier = set(current)
    while frontier:
        new = set()
        for a in frontier:
            for b in current:
                new.add(int(table[a, b]))
                new.add(int(table[b, a]))
        new -= current
        current |= new
        frontier = new
    return frozenset(current)


@dataclass(frozen=True)
class SubgroupLattice:
    """All subgroups of a finite group, ordered by inclusion."""

    group: FiniteGroup
    subgroups: tuple[frozenset[int], ...]
    labels: tuple[str, ...]
    poset: Poset
    card_valuation: Valuation
    log_valuation: Valuation

    def members(self, label: str) -> frozenset[str]:
        """Element names of the subgroup with the given label."""
        try:
            k = self.labels.index(label)
        except ValueError:
            raise UnknownElement(f"unknown subgroup label {label!r}") from None
        return frozenset(self.group.names[i] for i in self.subgroups[k])

    def label_of(self, members: Iterable[str]) -> str:
        """Label of the subgroup with exactly these element names."""
        want = frozenset(self.group.names.index(m) for m in members)
        for k, sub in enumerate(self.subgroups):
            if sub == want:
                return self.labels[k]
        raise UnknownElement(f"no subgroup with members {sorted(members)}")

    def order_of(self, label: str) -> int:
        return len(self.subgroups[self.labels.index(label)])


def enumerate_subgroups(
    g: FiniteGroup, cap: int = DEFAULT_ORDER_CAP, tolerance: float = DEFAULT_TOLERANCE
) -> SubgroupLattice:
    """All subgroups: cyclic subgroups first, then pairwise joins to a
    fixed point.  The inclusion poset carries cardinality and
    log-cardinality valuations."""
    if g.order > cap:
        raise OrderCapExceeded(f"group order {g.order} exceeds the cap {cap}")
    table = g.table
    subs: set[frozenset[int]] = {frozenset({g.identity})}
    for a in range(g.order):
        subs.add(_closure(table, [a]))
    while True:
        new = set()
        for x, y in itertools.combinations(sorted(subs, key=sorted), 2):
            j = _closure(table, x | y)
            if j not in subs:
                new.add(j)
        if not new:
            break
        subs |= new
    ordered = sorted(subs, key=lambda s: (len(s), sorted(s)))
    width = len(str(len(ordered) - 1)) if len(ordered) > 1 else 1
    labels = tuple(f"H{i:0{width}d}" for i in range(len(ordered)))
    covers = []
    for i, x in enumerate(ordered):
        for j, y in enumerate(ordered):
            if i != j and x < y:
                if not any(k != i and k != j and x < z and z < y for k, z in enumerate(ordered)):
                    covers.append((labels[i], labels[j]))
    poset = build_poset(covers, elements=labels)
    card = {labels[i]: float(len(s)) for i, s in enumerate(ordered)}
    logc = {lab: math.log(c) for lab, c in card.items()}
    return SubgroupLattice(
        group=g,
        subgroups=tuple(ordered),
        labels=labels,
        poset=poset,
        card_valuation=make_valuation(poset, card, tolerance),
        log_valuation=make_valuation(poset, logc, tolerance),
    )


def subgroup_metric(l: SubgroupLattice, x: str, y: str) -> float:
    """log(|X| |Y| / |X meet Y|^2), the distance induced by log-cardinality."""
    try:
        sx = l.subgroups[l.labels.index(x)]
        sy = l.subgroups[l.labels.index(y)]
    except ValueError:
        raise UnknownElement(f"unknown subgroup label {x!r} or {y!r}") from None
    inter = len(sx & sy)
    return math.log(len(sx) * len(sy) / inter**2)


def product_formula_check(l: SubgroupLattice):
    """Verify |X||Y| = |XY| |X & Y| for all pairs, the derived inequality
    |X| + |Y| <= |X & Y| + |XY|, and |X v Y| = |XY| when the group is
    abelian.  Returns (ok, witnesses)."""
    table = l.group.table
    abelian = l.group.is_abelian()
    witnesses = []
    for i, x in enumerate(l.subgroups):
        for j in range(i, len(l.subgroups)):
            y = l.subgroups[j]
            xy = {int(table[a, b]) for a in x for b in y}
            if len(x) * len(y) != len(xy) * len(x & y):
                witnesses.append(
                    ("product", l.labels[i], l.labels[j], len(x) * len(y), len(xy) * len(x & y))
                )
            if not (len(x) + len(y) <= len(x & y) + len(xy)):
                witnesses.append(
                    ("sum_bound", l.labels[i], l.labels[j], len(x) + len(y), len(x & y) + len(xy))
                )
            if abelian:
                join = _closure(table, x | y)
                if len(join) != len(xy):
                    witnesses.append(
                        ("abelian_join", l.labels[i], l.labels[j], len(join), len(xy))
                    )
    return (not witnesses), tuple(sorted(witnesses))
