"""Element conjugacy classes and complex character tables.

Characters are computed with the Burnside class-matrix method: the class
multiplication matrices commute and their common eigenvectors are, up to
normalization, the columns of the character table.  A random real linear
combination separates the eigenvectors; orthogonality relations certify
the result a posteriori, with seeded retries on failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .groups import Group
from .lattice import Subgroup

DEFAULT_CHAR_SEED = 0
MAX_CHAR_RETRIES = 20
EIGENVALUE_GAP = 1e-6
ORTHOGONALITY_TOL = 1e-8
INTEGRALITY_TOL = 1e-6


class ConvergenceError(RuntimeError):
    """The character solve failed to separate all irreps within the retry budget."""


class NonIntegerMultiplicityError(ValueError):
    """A character sum over a subgroup was not close to an integer multiple."""


@dataclass(frozen=True, eq=False)
class ClassData:
    """Partition of group elements into conjugacy classes.

    The identity is always alone in class 0; classes are ordered by their
    smallest member.
    """

    classes: tuple[tuple[int, ...], ...]
    reps: tuple[int, ...]
    sizes: tuple[int, ...]
    class_of: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Complex character table: chi[mu, k] is the character of irrep mu on class k.

    Rows are sorted by irrep dimension and then lexicographically by the
    (real, imaginary) parts of the character vector, so the ordering is
    deterministic across runs.  ``dims[mu] == chi[mu, 0]`` after rounding.
    """

    class_data: ClassData
    chi: np.ndarray
    dims: tuple[int, ...]

    @property
    def num_irreps(self) -> int:
        return len(self.dims)

    def value(self, mu: int, element: int) -> complex:
        """Character of ``element`` (an element index, not a class index)."""
        return complex(self.chi[mu, self.class_data.class_of[element]])

    @cached_property
    def chi_elements(self) -> np.ndarray:
        """chi spread over elements: chi_elements[mu, g] = chi[mu, class_of[g]]."""
        cls = np.asarray(self.class_data.class_of)
        out = self.chi[:, cls]
        out.setflags(write=False)
        return out


def element_classes(group: Group) -> ClassData:
    """Partition the group into conjugation orbits."""
    n = group.order
    class_of = [-1] * n
    classes: list[tuple[int, ...]] = []
    xs = np.arange(n)
    for a in range(n):
        if class_of[a] >= 0:
            continue
        orbit = np.unique(group.cayley[group.cayley[xs, a], group.inverse])
        k = len(classes)
        for e in orbit:
            class_of[int(e)] = k
        classes.append(tuple(int(e) for e in orbit))
    return ClassData(
        classes=tuple(classes),
        reps=tuple(c[0] for c in classes),
        sizes=tuple(len(c) for c in classes),
        class_of=tuple(class_of),
    )


def _class_matrices(group: Group, cd: ClassData) -> np.ndarray:
    """Structure constants of the class algebra.

    Returns mats of shape (c, c, c) with mats[k, l, m] = number of pairs
    (a, b) in C_k x C_l with a*b equal to the fixed representative of C_m.
    """
    c = cd.num_classes
    cls = np.asarray(cd.class_of)
    sizes = np.asarray(cd.sizes)
    flat = (cls[:, None] * c + cls[None, :]) * c + cls[group.cayley]
    count = np.bincount(flat.ravel(), minlength=c**3).reshape(c, c, c)
    # count[k,l,m] sums over all of C_m; per-representative counts are exact.
    if (count % sizes[None, None, :]).any():
        raise AssertionError("class algebra structure constants are not integral")
    return (count // sizes[None, None, :]).astype(np.float64)


def _recover_characters(
    vecs: np.ndarray, sizes: np.ndarray, order: int
) -> np.ndarray | None:
    c = len(sizes)
    rows = []
    for idx in range(c):
        v = vecs[:, idx]
        if abs(v[0]) < 1e-12:
            return None
        v = v / v[0]
        norm2 = float(np.sum(np.abs(v) ** 2 / sizes))
        d = math.sqrt(order / norm2)
        rows.append(d * v / sizes)
    return np.asarray(rows)


def _certify(chi: np.ndarray, sizes: np.ndarray, order: int) -> tuple[int, ...] | None:
    dims_f = chi[:, 0]
    if np.max(np.abs(dims_f.imag)) > INTEGRALITY_TOL:
        return None
    dims = np.rint(dims_f.real).astype(int)
    if np.max(np.abs(dims_f.real - dims)) > INTEGRALITY_TOL or dims.min() < 1:
        return None
    if int(np.sum(dims**2)) != order:
        return None
    gram_rows = (chi * sizes[None, :]) @ chi.conj().T
    if np.max(np.abs(gram_rows - order * np.eye(len(sizes)))) > ORTHOGONALITY_TOL:
        return None
    gram_cols = chi.conj().T @ chi
    target = np.diag(order / sizes)
    if np.max(np.abs(gram_cols - target)) > ORTHOGONALITY_TOL:
        return None
    return tuple(int(d) for d in dims)


def _sort_key(row: np.ndarray, dim: int):
    return (dim, tuple((round(x.real, 9) + 0.0, round(x.imag, 9) + 0.0) for x in row))


def character_table(
    group: Group,
    *,
    seed: int = DEFAULT_CHAR_SEED,
    max_retries: int = MAX_CHAR_RETRIES,
) -> CharacterTable:
    """Compute the complex character table of a group.

    Raises ConvergenceError if no random class-matrix combination separates
    all irreps (or certification keeps failing) within ``max_retries``.
    """
    cd = element_classes(group)
    c = cd.num_classes
    sizes = np.asarray(cd.sizes, dtype=np.float64)
    mats = _class_matrices(group, cd)
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        t = rng.standard_normal(c)
        combo = np.tensordot(t, mats, axes=1)
        vals, vecs = np.linalg.eig(combo)
        if c > 1:
            gaps = np.abs(vals[:, None] - vals[None, :])
            gaps[np.diag_indices(c)] = np.inf
            if gaps.min() < EIGENVALUE_GAP:
                continue
        chi = _recover_characters(vecs, sizes, group.order)
        if chi is None:
            continue
        dims = _certify(chi, sizes, group.order)
        if dims is None:
            continue
        perm = sorted(range(c), key=lambda i: _sort_key(chi[i], dims[i]))
        chi = np.ascontiguousarray(chi[perm])
        chi.setflags(write=False)
        return CharacterTable(
            class_data=cd, chi=chi, dims=tuple(dims[i] for i in perm)
        )
    raise ConvergenceError(
        f"character solve for {group.origin} did not converge "
        f"after {max_retries} attempts (seed {seed})"
    )


def trivial_multiplicity(ct: CharacterTable, mu: int, sub: Subgroup) -> int:
    """Multiplicity of the trivial representation in irrep mu restricted to a subgroup.

    Equals (1/|H|) * sum of chi_mu over the subgroup; the projector of irrep
    mu onto H-invariant vectors vanishes exactly when this is 0.
    """
    cls_of = ct.class_data.class_of
    raw = complex(sum(ct.chi[mu, cls_of[e]] for e in sub.elements))
    m = round(raw.real / sub.order)
    if abs(raw - sub.order * m) > INTEGRALITY_TOL or m < 0:
        raise NonIntegerMultiplicityError(
            f"character sum {raw} over subgroup of order {sub.order} "
            f"is not a non-negative integer multiple (irrep {mu})"
        )
    return m
