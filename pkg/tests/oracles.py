"""Independent brute-force oracles used to freeze derived expectations.

These work directly on raw cover lists via BFS, never through the dense
matrices under test.
"""

from __future__ import annotations


def oracle_down(covers, x):
    """Everything below-or-equal x by reverse BFS over the cover list."""
    parents = {}
    for a, c in covers:
        parents.setdefault(c, set()).add(a)
    seen = {x}
    stack = [x]
    while stack:
        cur = stack.pop()
        for nxt in parents.get(cur, ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def oracle_up(covers, x):
    return oracle_down([(c, a) for a, c in covers], x)


def oracle_elements(covers):
    return {x for pair in covers for x in pair}


def oracle_meet(covers, x, y):
    common = oracle_down(covers, x) & oracle_down(covers, y)
    maxima = [
        z for z in common
        if not any(z != w and z in oracle_down(covers, w) for w in common)
    ]
    return maxima[0] if len(maxima) == 1 else None


def oracle_row1_distance(covers, values, x, y):
    """v(x) + v(y) - 2 max{v(z) : z <= x and z <= y} by set enumeration."""
    common = oracle_down(covers, x) & oracle_down(covers, y)
    return values[x] + values[y] - 2.0 * max(values[z] for z in common)
