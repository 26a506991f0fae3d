"""Shared fixtures: cached per-descriptor pipelines and the group battery."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import pytest

from hspmeas import (
    CharacterTable,
    Group,
    SubgroupLattice,
    character_table,
    enumerate_subgroups,
    from_cayley,
    parse_descriptor,
)

# Built-in test battery; orders 1..27.
BATTERY = tuple(
    [f"cyclic:{n}" for n in range(1, 13)]
    + [
        "product:cyclic:2,cyclic:2",
        "product:cyclic:2,cyclic:4",
        "dihedral:3",
        "dihedral:4",
        "dihedral:5",
        "dihedral:6",
        "symmetric:3",
        "symmetric:4",
        "heisenberg:2",
        "heisenberg:3",
    ]
)

DIHEDRALS = ("dihedral:3", "dihedral:4", "dihedral:5", "dihedral:6")


@lru_cache(maxsize=None)
def get_group(desc: str) -> Group:
    if desc == "quaternion":
        return quaternion_group()
    return parse_descriptor(desc)


@lru_cache(maxsize=None)
def get_lattice(desc: str) -> SubgroupLattice:
    return enumerate_subgroups(get_group(desc))


@lru_cache(maxsize=None)
def get_chartable(desc: str) -> CharacterTable:
    return character_table(get_group(desc))


def battery(max_order: int | None = None, exclude: tuple[str, ...] = ()) -> list[str]:
    out = []
    for desc in BATTERY:
        if desc in exclude:
            continue
        if max_order is not None and get_group(desc).order > max_order:
            continue
        out.append(desc)
    return out


def quaternion_cayley() -> list[list[int]]:
    """Cayley table of the quaternion group on [1, -1, i, -i, j, -j, k, -k]."""
    # Unit quaternions as (sign, axis) with axis 0 -> 1, 1 -> i, 2 -> j, 3 -> k.
    mult = {
        (0, 0): (1, 0),
        (1, 1): (-1, 0),
        (2, 2): (-1, 0),
        (3, 3): (-1, 0),
        (0, 1): (1, 1),
        (1, 0): (1, 1),
        (0, 2): (1, 2),
        (2, 0): (1, 2),
        (0, 3): (1, 3),
        (3, 0): (1, 3),
        (1, 2): (1, 3),
        (2, 1): (-1, 3),
        (2, 3): (1, 1),
        (3, 2): (-1, 1),
        (3, 1): (1, 2),
        (1, 3): (-1, 2),
    }

    def encode(sign: int, axis: int) -> int:
        return 2 * axis + (0 if sign == 1 else 1)

    def decode(idx: int) -> tuple[int, int]:
        return (1 if idx % 2 == 0 else -1, idx // 2)

    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            sa, xa = decode(a)
            sb, xb = decode(b)
            sc, xc = mult[(xa, xb)]
            table[a][b] = encode(sa * sb * sc, xc)
    return table


@lru_cache(maxsize=None)
def quaternion_group() -> Group:
    labels = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
    return from_cayley(quaternion_cayley(), labels=labels, origin="quaternion")


@pytest.fixture(scope="session")
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
