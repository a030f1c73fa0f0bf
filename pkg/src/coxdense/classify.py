"""Finite-type recognition for parabolic subgroups.

Each irreducible component of ``(W_T, T)`` is matched against the finite
Coxeter diagrams by shape and edge labels.  Anything that is not one of
them is tagged ``INFINITE``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .core import INF, CoxeterSystem, GenSubset, Infinity, irreducible_components, restrict

FINITE_ORDERS = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "H3": 120, "H4": 14400}


@dataclass(frozen=True)
class ComponentType:
    subset: GenSubset  # indices in the ambient system
    tag: str
    order: Union[int, Infinity]


@dataclass(frozen=True)
class FinitenessVerdict:
    finite: bool
    components: tuple[ComponentType, ...]
    total_order: Union[int, Infinity]


def type_order(tag: str) -> int:
    if tag in FINITE_ORDERS:
        return FINITE_ORDERS[tag]
    family, rest = tag[0], tag[1:]
    if tag.startswith("I2("):
        return 2 * int(tag[3:-1])
    n = int(rest)
    if family == "A":
        return math.factorial(n + 1)
    if family == "B":
        return 2**n * math.factorial(n)
    if family == "D":
        return 2 ** (n - 1) * math.factorial(n)
    raise ValueError(f"unknown type tag {tag!r}")


def recognize(system: CoxeterSystem) -> str:
    """Type tag of a connected (irreducible) system."""
    n = system.rank
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            v = system.m(i, j)
            if v is INF:
                return "INFINITE"
            if v >= 3:
                edges[i, j] = v
    if n == 1:
        return "A1"
    if n == 2:
        return f"I2({edges[0, 1]})"
    if len(edges) != n - 1:  # connected, so a cycle is present
        return "INFINITE"
    nbrs = {i: [] for i in range(n)}
    for (i, j) in edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    degrees = sorted(len(v) for v in nbrs.values())
    labels = sorted(edges.values())
    heavy = [v for v in labels if v > 3]

    if degrees[-1] == 3:
        if heavy or degrees.count(3) != 1:
            return "INFINITE"
        center = next(i for i in range(n) if len(nbrs[i]) == 3)
        arms = sorted(_arm_length(nbrs, center, start) for start in nbrs[center])
        if arms[0] == 1 and arms[1] == 1:
            return f"D{n}"
        if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
            return f"E{n}"
        return "INFINITE"
    if degrees[-1] > 3:
        return "INFINITE"

    # a path: walk it from one end
    end = next(i for i in range(n) if len(nbrs[i]) == 1)
    path = [end]
    while len(path) < n:
        nxt = [j for j in nbrs[path[-1]] if j not in path]
        path.append(nxt[0])
    chain = [edges[tuple(sorted((path[k], path[k + 1])))] for k in range(n - 1)]
    if not heavy:
        return f"A{n}"
    if len(heavy) > 1:
        return "INFINITE"
    if chain[-1] > 3:
        chain.reverse()
    at_end = chain[0] > 3
    if heavy[0] == 4:
        if at_end:
            return f"B{n}"
        if n == 4 and chain[1] == 4:
            return "F4"
        return "INFINITE"
    if heavy[0] == 5 and at_end and n in (3, 4):
        return f"H{n}"
    return "INFINITE"


def _arm_length(nbrs, center, start):
    length, prev, cur = 1, center, start
    while True:
        nxt = [j for j in nbrs[cur] if j != prev]
        if not nxt:
            return length
        prev, cur = cur, nxt[0]
        length += 1


def classify_subset(system: CoxeterSystem, subset: GenSubset) -> FinitenessVerdict:
    if not subset:
        return FinitenessVerdict(True, (), 1)
    sub = restrict(system, subset)
    ambient = subset.indices()
    components = []
    total = 1
    for comp in irreducible_components(sub):
        tag = recognize(restrict(sub, comp))
        order = INF if tag == "INFINITE" else type_order(tag)
        mask = 0
        for k in comp:
            mask |= 1 << ambient[k]
        components.append(ComponentType(GenSubset(mask, system.rank), tag, order))
        total = INF if (order is INF or total is INF) else total * order
    return FinitenessVerdict(total is not INF, tuple(components), total)


def is_spherical(system: CoxeterSystem, subset: GenSubset) -> bool:
    return classify_subset(system, subset).finite


def group_order(system: CoxeterSystem, subset: GenSubset = None):
    if subset is None:
        subset = system.full()
    return classify_subset(system, subset).total_order


def spherical_masks(system: CoxeterSystem) -> list[bool]:
    """Finiteness of ``W_T`` for every mask ``T``, indexed by mask."""
    n = system.rank
    if n > 24:
        raise ValueError("subset enumeration is limited to rank 24")
    return [is_spherical(system, GenSubset(mask, n)) for mask in range(1 << n)]


def maximal_spherical_subsets(system: CoxeterSystem) -> list[GenSubset]:
    n = system.rank
    finite = spherical_masks(system)
    out = []
    for mask in range(1 << n):
        if not finite[mask]:
            continue
        if all(finite[mask | 1 << s] is False for s in range(n) if not mask >> s & 1):
            out.append(GenSubset(mask, n))
    return out


def essential_subset(system: CoxeterSystem) -> GenSubset:
    """Union of the infinite irreducible components."""
    mask = 0
    for comp in irreducible_components(system):
        if not is_spherical(system, comp):
            mask |= comp.mask
    return GenSubset(mask, system.rank)


def essential_of(system: CoxeterSystem, subset: GenSubset) -> GenSubset:
    """The essential subset of ``(W_T, T)``, as a subset of the ambient S."""
    sub = restrict(system, subset)
    ambient = subset.indices()
    return GenSubset.of(system.rank, (ambient[k] for k in essential_subset(sub)))
