"""Seeded random suites shared by the property and acceptance tests.

Everything here is deterministic given the numpy Generator passed in, so
frozen seeds give frozen suites.
"""

from __future__ import annotations

import warnings

import numpy as np

from posetval import (
    Poset,
    Valuation,
    WeightFunction,
    affine_transform,
    build_poset,
    cumulative_lower,
    cumulative_upper,
    make_valuation,
)


def rand_poset(rng: np.random.Generator, max_n: int = 8) -> Poset:
    """Random poset from a random topological order plus random forward covers."""
    n = int(rng.integers(1, max_n + 1))
    names = [f"e{i}" for i in range(n)]
    order = [names[i] for i in rng.permutation(n)]
    density = float(rng.uniform(0.05, 0.55))
    covers = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                covers.append((order[i], order[j]))
    return build_poset(covers, elements=names)


def rand_bounded_poset(rng: np.random.Generator, max_inner: int = 7) -> Poset:
    """Random bounded poset; naturally bounded draws pass through, the rest
    get a fresh bottom and top."""
    p = rand_poset(rng, max_inner)
    if p.bottom() is not None and p.top() is not None and rng.random() < 0.5:
        return p
    covers = set(p.covers)
    covers |= {("bot", m) for m in p.minimals(p.elements)}
    covers |= {(m, "top") for m in p.maximals(p.elements)}
    return build_poset(covers)


def rand_lattice(rng: np.random.Generator, universe_max: int = 5, gens_max: int = 4) -> Poset:
    """Random finite lattice as an intersection-closed set family ordered by
    inclusion (meet = intersection, join = least common superset)."""
    k = int(rng.integers(1, universe_max + 1))
    universe = frozenset(range(k))
    family = {universe}
    for _ in range(int(rng.integers(1, gens_max + 1))):
        family.add(frozenset(i for i in range(k) if rng.random() < 0.5))
    while True:
        new = {a & b for a in family for b in family} - family
        if not new:
            break
        family |= new
    names = {s: "n" + "".join("1" if i in s else "0" for i in range(k)) for s in family}
    covers = [(names[a], names[b]) for a in family for b in family if a < b]
    return build_poset(covers, elements=names.values())


def rand_tree(rng: np.random.Generator, max_n: int = 9) -> Poset:
    """Random rooted tree with the root as top element (children below parents)."""
    n = int(rng.integers(1, max_n + 1))
    width = max(1, len(str(n - 1)))
    names = [f"t{i:0{width}d}" for i in range(n)]
    covers = []
    for i in range(1, n):
        parent = int(rng.integers(0, i))
        covers.append((names[i], names[parent]))
    return build_poset(covers, elements=names)


def rand_positive_weights(
    rng: np.random.Generator, p: Poset, normalized: bool = False
) -> WeightFunction:
    vals = rng.uniform(0.05, 1.0, size=len(p))
    if normalized:
        vals = vals / vals.sum()
    return WeightFunction(p, dict(zip(p.elements, vals)))


def rand_strictly_isotone_valuation(rng: np.random.Generator, p: Poset) -> Valuation:
    # ideal sizes step by at least 1 on comparable pairs, so noise below
    # 0.5 keeps the map strictly isotone
    vals = {x: float(len(p.ideal(x))) + float(rng.uniform(0.0, 0.4)) for x in p.elements}
    return make_valuation(p, vals)


def row_candidate_valuations(
    rng: np.random.Generator, p: Poset
) -> list[tuple[int, Valuation]]:
    """One candidate per distance-formula row, built from cumulative sums of
    strictly positive weights (and their negations for the upper rows)."""
    t = rand_positive_weights(rng, p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        v_low = cumulative_lower(p, t)
        v_alow = cumulative_upper(p, t)
    shift = float(max(v_low.values.values()) + max(v_alow.values.values()) + 1.0)
    v_up = affine_transform(v_alow, -1.0, shift)
    v_aup = affine_transform(v_low, -1.0, shift)
    return [(1, v_low), (2, v_alow), (3, v_up), (4, v_aup)]
