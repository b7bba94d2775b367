"""Finite posets from cover relations, with dense order matrices.

A poset is stored as a sorted tuple of element names, a transitively
reduced cover set, and the reflexive-transitive closure of the covers
as a dense boolean matrix.  All order-theoretic queries (ideals,
filters, meets, joins, classification, the semilattice deviation
numbers) are answered by exhaustive scans over that matrix; posets here
are desk-scale, so dense brute force is the intended algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import (
    CycleDetected,
    EmptyPoset,
    NotBounded,
    ParseError,
    UnknownElement,
)

Pair = tuple[str, str]


def _strict_closure(adj: np.ndarray) -> np.ndarray:
    """Transitive (non-reflexive) closure of a boolean adjacency matrix."""
    reach = adj.copy()
    for k in range(reach.shape[0]):
        reach |= np.outer(reach[:, k], reach[k, :])
    return reach


def _cycle_witness(adj: np.ndarray, reach: np.ndarray, names: tuple[str, ...]) -> list[str]:
    n = adj.shape[0]
    start = next(i for i in range(n) if reach[i, i])
    path = [start]
    cur = start
    while True:
        nxt = min(
            j
            for j in range(n)
            if adj[cur, j] and (j == start or reach[j, start])
        )
        path.append(nxt)
        if nxt == start:
            break
        cur = nxt
    return [names[i] for i in path]


@dataclass(frozen=True)
class Classification:
    """Order-theoretic summary of a finite poset."""

    is_meet_semilattice: bool
    is_join_semilattice: bool
    is_lattice: bool
    is_bounded: bool
    is_tree: bool
    is_modular: bool
    bottom: Optional[str]
    top: Optional[str]
    delta_wedge: Optional[int]
    delta_vee: Optional[int]


class Poset:
    """Immutable finite poset.

    Use :func:`build_poset` to construct one from cover pairs; the raw
    constructor is internal.
    """

    __slots__ = ("elements", "covers", "reduction_warnings", "_index", "_leq", "_cls")

    def __init__(
        self,
        elements: tuple[str, ...],
        covers: frozenset[Pair],
        leq: np.ndarray,
        reduction_warnings: tuple[Pair, ...] = (),
    ):
        self.elements = elements
        self.covers = covers
        self.reduction_warnings = reduction_warnings
        self._index = {x: i for i, x in enumerate(elements)}
        leq.flags.writeable = False
        self._leq = leq
        self._cls: Classification | None = None

    # -- basics ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: str) -> bool:
        return x in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.covers == other.covers

    def __hash__(self) -> int:
        return hash((self.elements, self.covers))

    def __repr__(self) -> str:
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(f"unknown element {x!r}") from None

    @property
    def leq_matrix(self) -> np.ndarray:
        """Boolean matrix M with M[i, j] true iff elements[i] <= elements[j]."""
        return self._leq

    def le(self, x: str, y: str) -> bool:
        return bool(self._leq[self.index(x), self.index(y)])

    def lt(self, x: str, y: str) -> bool:
        return x != y and self.le(x, y)

    def comparable(self, x: str, y: str) -> bool:
        return self.le(x, y) or self.le(y, x)

    # -- ideals, filters, extremal elements ------------------------------

    def _ideal_mask(self, i: int) -> np.ndarray:
        return self._leq[:, i]

    def _filter_mask(self, i: int) -> np.ndarray:
        return self._leq[i, :]

    def ideal(self, x: str) -> frozenset[str]:
        """Principal ideal: everything <= x."""
        mask = self._ideal_mask(self.index(x))
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def filter(self, x: str) -> frozenset[str]:
        """Principal filter: everything >= x."""
        mask = self._filter_mask(self.index(x))
        return frozenset(self.elements[i] for i in np.flatnonzero(mask))

    def _subset_mask(self, s: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        for x in s:
            mask[self.index(x)] = True
        return mask

    def _maximal_indices(self, mask: np.ndarray) -> list[int]:
        out = []
        for i in np.flatnonzero(mask):
            above = self._leq[i, :] & mask
            above[i] = False
            if not above.any():
                out.append(int(i))
        return out

    def _minimal_indices(self, mask: np.ndarray) -> list[int]:
        out = []
        for i in np.flatnonzero(mask):
            below = self._leq[:, i] & mask
            below[i] = False
            if not below.any():
                out.append(int(i))
        return out

    def maximals(self, s: Iterable[str]) -> frozenset[str]:
        """Maximal elements of a subset (empty input yields empty output)."""
        mask = self._subset_mask(s)
        return frozenset(self.elements[i] for i in self._maximal_indices(mask))

    def minimals(self, s: Iterable[str]) -> frozenset[str]:
        """Minimal elements of a subset."""
        mask = self._subset_mask(s)
        return frozenset(self.elements[i] for i in self._minimal_indices(mask))

    # -- meets and joins --------------------------------------------------

    def _meet_index(self, i: int, j: int) -> int | None:
        common = self._ideal_mask(i) & self._ideal_mask(j)
        if not common.any():
            return None
        maxima = self._maximal_indices(common)
        return maxima[0] if len(maxima) == 1 else None

    def _join_index(self, i: int, j: int) -> int | None:
        common = self._filter_mask(i) & self._filter_mask(j)
        if not common.any():
            return None
        minima = self._minimal_indices(common)
        return minima[0] if len(minima) == 1 else None

    def meet(self, x: str, y: str) -> Optional[str]:
        """Greatest lower bound if it exists, else None."""
        k = self._meet_index(self.index(x), self.index(y))
        return None if k is None else self.elements[k]

    def join(self, x: str, y: str) -> Optional[str]:
        """Least upper bound if it exists, else None."""
        k = self._join_index(self.index(x), self.index(y))
        return None if k is None else self.elements[k]

    def bottom(self) -> Optional[str]:
        for i in range(len(self)):
            if self._leq[i, :].all():
                return self.elements[i]
        return None

    def top(self) -> Optional[str]:
        for i in range(len(self)):
            if self._leq[:, i].all():
                return self.elements[i]
        return None

    def meet_irreducibles(self) -> frozenset[str]:
        """Elements with exactly one upper cover."""
        up_count = {x: 0 for x in self.elements}
        for a, _ in self.covers:
            up_count[a] += 1
        return frozenset(x for x, c in up_count.items() if c == 1)

    def join_irreducibles(self) -> frozenset[str]:
        """Elements with exactly one lower cover."""
        down_count = {x: 0 for x in self.elements}
        for _, c in self.covers:
            down_count[c] += 1
        return frozenset(x for x, c in down_count.items() if c == 1)

    # -- classification ----------------------------------------------------

    def _deltas(self) -> tuple[int, int]:
        n = len(self)
        leq = self._leq
        ideal_sizes = leq.sum(axis=0)
        filter_sizes = leq.sum(axis=1)
        dw = 0
        dv = 0
        for i in range(n):
            for j in range(i, n):
                down = leq[:, i] & leq[:, j]
                up = leq[i, :] & leq[j, :]
                down_max = self._maximal_indices(down)
                up_min = self._minimal_indices(up)
                dw = max(dw, int(down.sum()) - max(int(ideal_sizes[k]) for k in down_max))
                dv = max(dv, int(up.sum()) - max(int(filter_sizes[k]) for k in up_min))
        return dw, dv

    def delta_wedge(self) -> int:
        """Deviation from being a meet-semilattice (0 exactly for lattices)."""
        if self.bottom() is None or self.top() is None:
            raise NotBounded("delta functions are defined for bounded posets only")
        return self._deltas()[0]

    def delta_vee(self) -> int:
        """Deviation from being a join-semilattice (0 exactly for lattices)."""
        if self.bottom() is None or self.top() is None:
            raise NotBounded("delta functions are defined for bounded posets only")
        return self._deltas()[1]

    def _is_modular(self, meet_tab: np.ndarray, join_tab: np.ndarray) -> bool:
        # modular law: x <= z implies x v (y ^ z) = (x v y) ^ z
        n = len(self)
        leq = self._leq
        for x in range(n):
            zs = np.flatnonzero(leq[x, :])
            lhs = join_tab[x, meet_tab[:, zs]]          # [y, z']
            rhs = meet_tab[join_tab[x, :][:, None], zs]  # [y, z']
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def classify(self) -> Classification:
        """Populate every classification field by exhaustive pairwise checks."""
        if self._cls is not None:
            return self._cls
        n = len(self)
        if n == 0:
            raise EmptyPoset("cannot classify an empty poset")
        leq = self._leq
        meet_tab = np.full((n, n), -1, dtype=np.int64)
        join_tab = np.full((n, n), -1, dtype=np.int64)
        all_meets = True
        all_joins = True
        tree_ok = True
        for i in range(n):
            for j in range(i, n):
                m = self._meet_index(i, j)
                jn = self._join_index(i, j)
                if m is None:
                    all_meets = False
                else:
                    meet_tab[i, j] = meet_tab[j, i] = m
                if jn is None:
                    all_joins = False
                else:
                    join_tab[i, j] = join_tab[j, i] = jn
                if i != j and not (leq[i, j] or leq[j, i]):
                    if (leq[:, i] & leq[:, j]).any():
                        tree_ok = False
        is_lattice = all_meets and all_joins
        bottom = self.bottom()
        top = self.top()
        bounded = bottom is not None and top is not None
        dw = dv = None
        if bounded:
            dw, dv = self._deltas()
        modular = False
        if is_lattice:
            modular = self._is_modular(meet_tab, join_tab)
        cls = Classification(
            is_meet_semilattice=all_meets,
            is_join_semilattice=all_joins,
            is_lattice=is_lattice,
            is_bounded=bounded,
            is_tree=all_joins and tree_ok,
            is_modular=modular,
            bottom=bottom,
            top=top,
            delta_wedge=dw,
            delta_vee=dv,
        )
        self._cls = cls
        return cls

    def dual(self) -> "Poset":
        """The same elements with every cover reversed."""
        return build_poset({(c, a) for (a, c) in self.covers}, elements=self.elements)


def build_poset(covers: Iterable[Pair], elements: Iterable[str] = ()) -> Poset:
    """Build a poset from cover pairs plus optional isolated elements.

    Redundant (transitively implied) pairs are dropped and recorded in
    ``reduction_warnings``; a cyclic relation raises :class:`CycleDetected`
    with a witness cycle.
    """
    pairs = [(str(a), str(c)) for a, c in covers]
    names = sorted({x for pair in pairs for x in pair} | {str(e) for e in elements})
    index = {x: i for i, x in enumerate(names)}
    n = len(names)
    adj = np.zeros((n, n), dtype=bool)
    for a, c in pairs:
        if a == c:
            raise CycleDetected([a, c])
        adj[index[a], index[c]] = True
    strict = _strict_closure(adj)
    if strict.diagonal().any():
        raise CycleDetected(_cycle_witness(adj, strict, tuple(names)))
    kept = []
    dropped = []
    for a, c in sorted(set(pairs)):
        ia, ic = index[a], index[c]
        if (strict[ia, :] & strict[:, ic]).any():
            dropped.append((a, c))
        else:
            kept.append((a, c))
    leq = strict | np.eye(n, dtype=bool)
    return Poset(tuple(names), frozenset(kept), leq, tuple(dropped))


# -- text formats ---------------------------------------------------------


def parse_poset_text(text: str) -> Poset:
    """Parse the cover-list format: ``a < b`` lines, ``element x`` lines,
    ``#`` comments."""
    covers: list[Pair] = []
    isolated: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) == 3 and tokens[1] == "<":
            covers.append((tokens[0], tokens[2]))
        elif len(tokens) == 2 and tokens[0] == "element":
            isolated.append(tokens[1])
        else:
            raise ParseError(lineno, f"expected 'a < b' or 'element x', got {line!r}")
    return build_poset(covers, elements=isolated)


def poset_to_text(p: Poset) -> str:
    """Serialize to the cover-list format (inverse of :func:`parse_poset_text`)."""
    in_cover = {x for pair in p.covers for x in pair}
    lines = [f"element {x}" for x in p.elements if x not in in_cover]
    lines += [f"{a} < {c}" for a, c in sorted(p.covers)]
    return "\n".join(lines) + "\n"


def to_dot(p: Poset) -> str:
    """Hasse diagram in DOT form, edges oriented upward."""
    lines = ["digraph hasse {", "  rankdir=BT;"]
    lines += [f'  "{x}";' for x in p.elements]
    lines += [f'  "{a}" -> "{c}";' for a, c in sorted(p.covers)]
    lines.append("}")
    return "\n".join(lines) + "\n"
