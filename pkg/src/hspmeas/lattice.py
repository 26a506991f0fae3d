"""Subgroup enumeration: all subgroups of a group, containment, conjugacy classes."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import Group

DEFAULT_SUBGROUP_BUDGET = 10_000


class BudgetExceededError(RuntimeError):
    """Subgroup enumeration grew past the configured budget."""


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form: sorted element indices, no duplicates."""

    elements: tuple[int, ...]
    order: int
    group_order: int

    def __contains__(self, element: int) -> bool:
        return element in self.elements


@dataclass(frozen=True)
class SubgroupClass:
    """One conjugacy class of subgroups.

    ``members`` are subgroup indices into the lattice, sorted ascending;
    the representative is the member with the lexicographically smallest
    element list (equivalently the smallest index, since class members
    share an order and the lattice sorts by order then element list).
    """

    members: tuple[int, ...]
    representative: int
    size: int


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """All subgroups of one group, ordered by (order, element list).

    ``contains`` holds every strict containment pair (i, j), not just
    covering pairs.  ``classes`` partitions subgroup indices into conjugacy
    classes; ``class_of[i]`` is the class index of subgroup i.
    """

    subgroups: tuple[Subgroup, ...]
    contains: frozenset[tuple[int, int]]
    classes: tuple[SubgroupClass, ...]
    class_of: tuple[int, ...]

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {sub.elements: i for i, sub in enumerate(self.subgroups)}

    def index_of(self, sub: Subgroup) -> int:
        try:
            return self._index[sub.elements]
        except KeyError:
            raise KeyError(f"subgroup {sub.elements} is not in the lattice") from None

    def strict_supergroups(self, i: int) -> list[int]:
        """Indices of every subgroup strictly containing subgroup i."""
        return self._supergroups[i]

    @cached_property
    def _supergroups(self) -> list[list[int]]:
        ups: list[list[int]] = [[] for _ in self.subgroups]
        for i, j in sorted(self.contains):
            ups[i].append(j)
        return ups


def subgroup_from_elements(group: Group, elements) -> Subgroup:
    """Canonicalize and validate a subgroup given by its element indices."""
    elems = tuple(sorted(set(int(e) for e in elements)))
    if not elems or elems[0] != 0:
        raise ValueError("a subgroup must contain the identity (index 0)")
    if elems[-1] >= group.order:
        raise ValueError(f"element {elems[-1]} outside group of order {group.order}")
    member = np.zeros(group.order, dtype=bool)
    member[list(elems)] = True
    arr = np.asarray(elems)
    if not member[group.cayley[np.ix_(arr, arr)]].all():
        raise ValueError(f"{elems} is not closed under multiplication")
    if group.order % len(elems) != 0:
        raise ValueError(f"order {len(elems)} does not divide {group.order}")
    return Subgroup(elements=elems, order=len(elems), group_order=group.order)


def close_subset(group: Group, seed) -> tuple[int, ...]:
    """Smallest subgroup containing ``seed``, as a sorted element tuple."""
    arr = np.unique(np.concatenate([[0], np.asarray(list(seed), dtype=np.int64)]))
    while True:
        prods = np.unique(group.cayley[np.ix_(arr, arr)])
        if prods.size == arr.size:
            # Products of members stayed inside: closed, hence a subgroup.
            return tuple(int(x) for x in arr)
        arr = prods


def conjugate_subgroup(group: Group, sub: Subgroup, x: int) -> Subgroup:
    """The conjugate subgroup x H x^-1 in canonical form."""
    arr = np.asarray(sub.elements)
    mapped = group.cayley[group.cayley[x, arr], group.inverse[x]]
    return Subgroup(
        elements=tuple(int(v) for v in np.sort(mapped)),
        order=sub.order,
        group_order=sub.group_order,
    )


def enumerate_subgroups(
    group: Group, *, budget: int = DEFAULT_SUBGROUP_BUDGET
) -> SubgroupLattice:
    """Enumerate every subgroup by breadth-first closure.

    Starts from all cyclic subgroups and repeatedly extends each known
    subgroup by one outside element, closing and deduplicating until a
    fixed point.  Complete because any subgroup is reached by a chain of
    one-generator extensions from a cyclic seed.
    """
    n = group.order
    found: dict[tuple[int, ...], None] = {}
    queue: list[tuple[int, ...]] = []

    def record(elems: tuple[int, ...]) -> None:
        if elems not in found:
            found[elems] = None
            queue.append(elems)
            if len(found) > budget:
                raise BudgetExceededError(
                    f"more than {budget} subgroups found in group of order {n}"
                )

    for x in range(n):
        record(close_subset(group, (x,)))
    while queue:
        base = queue.pop()
        if len(base) == n:
            continue
        in_base = set(base)
        for x in range(n):
            if x not in in_base:
                record(close_subset(group, base + (x,)))

    ordered = sorted(found, key=lambda elems: (len(elems), elems))
    subgroups = tuple(
        Subgroup(elements=elems, order=len(elems), group_order=n) for elems in ordered
    )
    index = {elems: i for i, elems in enumerate(ordered)}

    sets = [frozenset(elems) for elems in ordered]
    contains = frozenset(
        (i, j)
        for i, si in enumerate(sets)
        for j, sj in enumerate(sets)
        if len(si) < len(sj) and si < sj
    )

    assigned: dict[int, int] = {}
    classes: list[SubgroupClass] = []
    for i, sub in enumerate(subgroups):
        if i in assigned:
            continue
        orbit = set()
        for x in range(n):
            orbit.add(index[conjugate_subgroup(group, sub, x).elements])
        members = tuple(sorted(orbit))
        k = len(classes)
        for m in members:
            assigned[m] = k
        classes.append(
            SubgroupClass(members=members, representative=members[0], size=len(members))
        )
    class_of = tuple(assigned[i] for i in range(len(subgroups)))
    return SubgroupLattice(
        subgroups=subgroups,
        contains=contains,
        classes=tuple(classes),
        class_of=class_of,
    )
