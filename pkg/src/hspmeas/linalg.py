"""Dense complex operators in the group-element basis.

Everything lives in the |G|-dimensional space spanned by group elements:
regular representations, coset states, hidden subgroup states, subgroup
projectors, and the central projectors that carve out irrep blocks without
ever materializing a Fourier transform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import CharacterTable
from .groups import Group
from .lattice import Subgroup

TAG_HERMITIAN = "hermitian"
TAG_PROJECTOR = "projector"
TAG_DENSITY = "density"
_KNOWN_TAGS = frozenset({TAG_HERMITIAN, TAG_PROJECTOR, TAG_DENSITY})

# Relative cutoff below which eigenvalues count as zero (support detection).
EIG_ZERO_RTOL = 1e-10

HERMITIAN_TOL = 1e-10
PROJECTOR_TOL = 1e-8
DENSITY_TRACE_TOL = 1e-10
DENSITY_EIG_TOL = 1e-10


class TagViolationError(ValueError):
    """An operator does not satisfy a property its tags advertise."""


@dataclass(frozen=True, eq=False)
class Operator:
    """A |G| x |G| complex matrix with advisory property tags.

    Tags claim properties (hermitian, projector, density) that can be
    re-checked with :func:`verify_tags`; nothing downstream trusts a tag.
    """

    mat: np.ndarray
    tags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        unknown = self.tags - _KNOWN_TAGS
        if unknown:
            raise ValueError(f"unknown operator tags {sorted(unknown)}")
        object.__setattr__(self, "mat", np.asarray(self.mat, dtype=np.complex128))
        self.mat.setflags(write=False)

    @property
    def n(self) -> int:
        return self.mat.shape[0]


def hermitize(mat: np.ndarray) -> np.ndarray:
    return (mat + mat.conj().T) / 2


def verify_tags(op: Operator) -> None:
    """Re-check every tag on an operator; raise TagViolationError on failure."""
    a = op.mat
    if TAG_HERMITIAN in op.tags or TAG_DENSITY in op.tags:
        resid = float(np.max(np.abs(a - a.conj().T)))
        if resid > HERMITIAN_TOL:
            raise TagViolationError(f"hermitian tag violated: residual {resid:.3e}")
    if TAG_PROJECTOR in op.tags:
        resid = float(np.max(np.abs(a @ a - a)))
        if resid > PROJECTOR_TOL:
            raise TagViolationError(f"projector tag violated: residual {resid:.3e}")
    if TAG_DENSITY in op.tags:
        tr = complex(np.trace(a))
        if abs(tr - 1) > DENSITY_TRACE_TOL:
            raise TagViolationError(f"density tag violated: trace {tr}")
        lo = float(np.linalg.eigvalsh(hermitize(a)).min())
        if lo < -DENSITY_EIG_TOL:
            raise TagViolationError(f"density tag violated: min eigenvalue {lo:.3e}")


def regular_rep(group: Group, x: int, side: str) -> Operator:
    """Permutation matrix of the regular representation.

    ``side="left"`` implements D_L(x)|g> = |x g>; ``side="right"``
    implements D_R(x)|g> = |g x^-1>.
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    n = group.order
    mat = np.zeros((n, n), dtype=np.complex128)
    cols = np.arange(n)
    if side == "left":
        rows = group.cayley[x]
    else:
        rows = group.cayley[:, group.inverse[x]]
    mat[rows, cols] = 1.0
    return Operator(mat)


def coset_state(group: Group, x: int, sub: Subgroup) -> np.ndarray:
    """Uniform superposition over the left coset x H, amplitude 1/sqrt(|H|)."""
    vec = np.zeros(group.order, dtype=np.complex128)
    positions = group.cayley[x, np.asarray(sub.elements)]
    vec[positions] = 1.0 / np.sqrt(sub.order)
    return vec


def _right_translation_sum(group: Group, sub: Subgroup) -> np.ndarray:
    """Sum of D_R(h) over the subgroup, as a real 0/1-pattern matrix."""
    n = group.order
    mat = np.zeros((n, n), dtype=np.complex128)
    cols = np.arange(n)
    for h in sub.elements:
        mat[group.cayley[:, group.inverse[h]], cols] += 1.0
    return mat


def hidden_state(group: Group, sub: Subgroup) -> Operator:
    """Hidden subgroup state: (1/|G|) * sum of D_R(h) over h in H.

    Equal to the uniform mixture of left-coset projectors, weighted
    |H|/|G| per coset; that equivalence is exercised by the test suite
    rather than assumed here.
    """
    mat = _right_translation_sum(group, sub) / group.order
    return Operator(mat, frozenset({TAG_HERMITIAN, TAG_DENSITY}))


def subgroup_projector(group: Group, sub: Subgroup) -> Operator:
    """Projector onto right-H-invariant vectors: (1/|H|) * sum of D_R(h)."""
    mat = _right_translation_sum(group, sub) / sub.order
    return Operator(mat, frozenset({TAG_HERMITIAN, TAG_PROJECTOR}))


def central_projector(group: Group, ct: CharacterTable, mu: int) -> Operator:
    """Central idempotent of irrep mu in the regular representation.

    Pi_mu = (d_mu/|G|) * sum over x of conj(chi_mu(x)) D_R(x).  Since
    D_R(x)[a, b] = [x == a^-1 b], the sum evaluates entrywise to
    Pi_mu[a, b] = (d_mu/|G|) * conj(chi_mu(a^-1 b)).  Rank d_mu^2;
    commutes with both regular representations.
    """
    if not 0 <= mu < ct.num_irreps:
        raise IndexError(f"irrep index {mu} out of range 0..{ct.num_irreps - 1}")
    quotient = group.cayley[group.inverse]          # [a, b] -> a^-1 b
    chi_g = ct.chi_elements[mu]
    mat = (ct.dims[mu] / group.order) * np.conj(chi_g)[quotient]
    return Operator(mat, frozenset({TAG_HERMITIAN, TAG_PROJECTOR}))


def _support_decomposition(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition restricted to the numerical support."""
    vals, vecs = np.linalg.eigh(hermitize(mat))
    cutoff = EIG_ZERO_RTOL * max(float(vals.max(initial=0.0)), 0.0)
    keep = vals > cutoff
    return vals[keep], vecs[:, keep]


def support_projector(mat: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the support of a PSD matrix."""
    _, vecs = _support_decomposition(mat)
    return vecs @ vecs.conj().T


def inv_sqrt_on_support(mat: np.ndarray) -> np.ndarray:
    """Inverse square root of a PSD matrix, taken over its support."""
    vals, vecs = _support_decomposition(mat)
    return (vecs / np.sqrt(vals)) @ vecs.conj().T


def operator_to_json(op: Operator | np.ndarray) -> dict:
    """Serialize an operator as {"n": size, "re": [[...]], "im": [[...]]}."""
    mat = op.mat if isinstance(op, Operator) else np.asarray(op)
    return {
        "n": int(mat.shape[0]),
        "re": mat.real.tolist(),
        "im": mat.imag.tolist(),
    }


def operator_from_json(payload: dict) -> Operator:
    n = payload["n"]
    mat = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
        payload["im"], dtype=float
    )
    if mat.shape != (n, n):
        raise ValueError(f"operator payload claims n={n} but has shape {mat.shape}")
    return Operator(mat)
