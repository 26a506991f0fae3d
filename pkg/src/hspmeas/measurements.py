"""The three measurement families for hidden-subgroup state discrimination.

* ``pgm`` -- the pretty good measurement E_i = p_i M^{-1/2} rho_i M^{-1/2}.
* ``ip_measurement`` -- the recursive lattice measurement
  E_H = P_H - sum of E_J over strict supergroups J of H.
* ``optimal_measurement`` -- per irrep, put all measurement weight on the
  conjugacy class of subgroups maximizing p_H * |H| among those whose
  invariant-vector projector in that irrep is nonzero.  With a
  conjugation-invariant prior this satisfies the Holevo-Yuen-Kennedy-Lax
  optimality conditions; the ``verify`` module certifies that numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .characters import CharacterTable, trivial_multiplicity
from .groups import Group
from .lattice import SubgroupLattice
from .linalg import (
    TAG_HERMITIAN,
    Operator,
    central_projector,
    hermitize,
    hidden_state,
    subgroup_projector,
)

PRIOR_SUM_TOL = 1e-12
PRIOR_CLASS_SPREAD_TOL = 1e-12
CLASS_FUNCTION_TOL = 1e-9


class PriorError(ValueError):
    """A prior is not a probability distribution over the subgroups."""


class NonInvariantPriorError(ValueError):
    """The optimal construction needs a conjugation-invariant prior."""


@dataclass(frozen=True, eq=False)
class Prior:
    """Probabilities indexed by subgroup position in the lattice.

    ``conjugation_invariant`` records whether the probabilities are constant
    on every conjugacy class of subgroups; it is checked at construction,
    never assumed.
    """

    probs: np.ndarray
    conjugation_invariant: bool


def make_prior(lat: SubgroupLattice, probs: Sequence[float] | np.ndarray) -> Prior:
    arr = np.asarray(probs, dtype=np.float64)
    if arr.shape != (len(lat.subgroups),):
        raise PriorError(
            f"prior needs {len(lat.subgroups)} probabilities, got shape {arr.shape}"
        )
    if arr.min() < 0:
        raise PriorError(f"negative probability {arr.min()}")
    total = float(arr.sum())
    if abs(total - 1.0) > PRIOR_SUM_TOL:
        raise PriorError(f"probabilities sum to {total!r}, not 1")
    invariant = all(
        np.ptp(arr[list(cls.members)]) <= PRIOR_CLASS_SPREAD_TOL
        for cls in lat.classes
    )
    arr = arr.copy()
    arr.setflags(write=False)
    return Prior(probs=arr, conjugation_invariant=invariant)


def uniform_prior(lat: SubgroupLattice) -> Prior:
    n = len(lat.subgroups)
    return make_prior(lat, np.full(n, 1.0 / n))


def class_weight_prior(lat: SubgroupLattice, class_probs: Sequence[float]) -> Prior:
    """Prior giving every member of class k the per-subgroup probability class_probs[k]."""
    if len(class_probs) != len(lat.classes):
        raise PriorError(
            f"need one weight per subgroup class ({len(lat.classes)}), "
            f"got {len(class_probs)}"
        )
    probs = np.empty(len(lat.subgroups))
    for k, cls in enumerate(lat.classes):
        probs[list(cls.members)] = class_probs[k]
    return make_prior(lat, probs)


def random_invariant_prior(lat: SubgroupLattice, rng: np.random.Generator) -> Prior:
    """Random strictly positive conjugation-invariant prior (for test batteries)."""
    weights = rng.uniform(0.1, 1.0, size=len(lat.classes))
    sizes = np.asarray([cls.size for cls in lat.classes], dtype=float)
    return class_weight_prior(lat, weights / float(weights @ sizes))


def hsp_states(
    group: Group, lat: SubgroupLattice, prior: Prior
) -> list[tuple[float, Operator]]:
    """The discrimination ensemble: (p_H, rho_H) in lattice order."""
    return [
        (float(prior.probs[i]), hidden_state(group, sub))
        for i, sub in enumerate(lat.subgroups)
    ]


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement operators keyed by hypothesis (subgroup) index."""

    operators: dict[int, Operator]
    label: str


def pgm(states: Sequence[tuple[float, Operator]]) -> Povm:
    """Pretty good measurement for an ensemble of weighted density operators.

    The inverse square root is taken over the support of M = sum p_i rho_i;
    any kernel of M is added to the first-listed operator so the POVM is
    complete on the full space (the kernel is orthogonal to every state's
    support, so success probabilities are unaffected).
    """
    if not states:
        raise ValueError("pgm needs at least one state")
    n = states[0][1].n
    m = np.zeros((n, n), dtype=np.complex128)
    for p, rho in states:
        m += p * rho.mat
    vals, vecs = np.linalg.eigh(hermitize(m))
    cutoff = 1e-10 * max(float(vals.max(initial=0.0)), 0.0)
    keep = vals > cutoff
    inv_sqrt = (vecs[:, keep] / np.sqrt(vals[keep])) @ vecs[:, keep].conj().T
    ops: dict[int, Operator] = {}
    for i, (p, rho) in enumerate(states):
        mat = hermitize(p * inv_sqrt @ rho.mat @ inv_sqrt)
        ops[i] = Operator(mat, frozenset({TAG_HERMITIAN}))
    kernel_dim = n - int(keep.sum())
    if kernel_dim:
        pad = np.eye(n) - vecs[:, keep] @ vecs[:, keep].conj().T
        ops[0] = Operator(ops[0].mat + pad, frozenset({TAG_HERMITIAN}))
    return Povm(operators=ops, label="pgm")


def ip_measurement(group: Group, lat: SubgroupLattice) -> Povm:
    """Recursive lattice measurement E_H = P_H - sum of E_J over J strictly above H.

    Subgroups are processed in decreasing order, which topologically
    respects strict containment.  The recursion telescopes to the identity,
    so completeness holds by construction; positivity is not guaranteed for
    nonabelian groups and is left to the verifier.
    """
    ops: dict[int, Operator] = {}
    order = sorted(
        range(len(lat.subgroups)),
        key=lambda i: (lat.subgroups[i].order, lat.subgroups[i].elements),
        reverse=True,
    )
    for i in order:
        mat = subgroup_projector(group, lat.subgroups[i]).mat.copy()
        for j in lat.strict_supergroups(i):
            mat -= ops[j].mat
        ops[i] = Operator(mat, frozenset({TAG_HERMITIAN}))
    return Povm(operators={i: ops[i] for i in range(len(lat.subgroups))}, label="ip")


@dataclass(frozen=True, eq=False)
class IrrepPlan:
    """Measurement bookkeeping for one irrep.

    ``s_values[k]`` = |C_k| * m_k / d  where m_k is the trivial multiplicity
    of the irrep on the class-k representative; ``chosen_class`` is the
    class carrying all weight; ``coefficient`` is c on that class (zero
    elsewhere) and equals the per-subgroup coefficient ``e_value`` shared
    by the chosen class's members.
    """

    irrep: int
    dim: int
    s_values: np.ndarray
    multiplicities: tuple[int, ...]
    chosen_class: int
    coefficient: float
    e_value: float
    skipped: bool = False


@dataclass(frozen=True, eq=False)
class MeasurementPlan:
    irreps: tuple[IrrepPlan, ...]
    prior: Prior


def build_plan(
    group: Group,
    lat: SubgroupLattice,
    ct: CharacterTable,
    prior: Prior,
    *,
    force_class: dict[int, int] | None = None,
) -> MeasurementPlan:
    """Choose, per irrep, the subgroup class that carries the measurement.

    Among classes whose representative has nonzero trivial multiplicity in
    the irrep, pick the one maximizing p_H * |H| (ties go to the smallest
    class index).  ``force_class`` overrides the choice for selected irreps,
    which is only meaningful for tied alternatives; the forced class must
    still have nonzero multiplicity.
    """
    if not prior.conjugation_invariant:
        raise NonInvariantPriorError(
            "the optimal construction requires a conjugation-invariant prior"
        )
    force_class = force_class or {}
    entries = []
    for mu in range(ct.num_irreps):
        d = ct.dims[mu]
        mults = tuple(
            trivial_multiplicity(ct, mu, lat.subgroups[cls.representative])
            for cls in lat.classes
        )
        s_values = np.asarray(
            [cls.size * m / d for cls, m in zip(lat.classes, mults)]
        )
        eligible = [k for k, m in enumerate(mults) if m > 0]
        # The trivial subgroup always has multiplicity d > 0.
        assert eligible, f"irrep {mu} has no class with nonzero projector"
        if mu in force_class:
            chosen = force_class[mu]
            if mults[chosen] == 0:
                raise ValueError(
                    f"forced class {chosen} has vanishing projector in irrep {mu}"
                )
        else:
            def weight(k: int) -> float:
                rep = lat.classes[k].representative
                return float(prior.probs[rep]) * lat.subgroups[rep].order

            best = max(weight(k) for k in eligible)
            chosen = min(k for k in eligible if weight(k) == best)
        coeff = 1.0 / float(s_values[chosen])
        s_values.setflags(write=False)
        entries.append(
            IrrepPlan(
                irrep=mu,
                dim=d,
                s_values=s_values,
                multiplicities=mults,
                chosen_class=chosen,
                coefficient=coeff,
                e_value=coeff,
                skipped=False,
            )
        )
    return MeasurementPlan(irreps=tuple(entries), prior=prior)


def optimal_measurement(
    group: Group,
    lat: SubgroupLattice,
    ct: CharacterTable,
    prior: Prior,
    *,
    plan: MeasurementPlan | None = None,
) -> Povm:
    """Materialize the optimal POVM from a measurement plan.

    E_H accumulates e * Pi_mu P_H over every irrep whose chosen class
    contains H; subgroups in no chosen class get the zero operator.
    """
    if plan is None:
        plan = build_plan(group, lat, ct, prior)
    n = group.order
    mats = {i: np.zeros((n, n), dtype=np.complex128) for i in range(len(lat.subgroups))}
    projectors: dict[int, np.ndarray] = {}
    for entry in plan.irreps:
        pi_mu = central_projector(group, ct, entry.irrep).mat
        cls = lat.classes[entry.chosen_class]
        rep_sum = _character_sum(ct, entry.irrep, lat.subgroups[cls.representative])
        for i in cls.members:
            sub = lat.subgroups[i]
            member_sum = _character_sum(ct, entry.irrep, sub)
            # Characters are class functions, so conjugate subgroups share
            # the sum; asserted rather than assumed.
            assert abs(member_sum - rep_sum) <= CLASS_FUNCTION_TOL, (
                f"character sum differs across class {entry.chosen_class}"
            )
            if i not in projectors:
                projectors[i] = subgroup_projector(group, sub).mat
            mats[i] += entry.e_value * (pi_mu @ projectors[i])
    ops = {
        i: Operator(hermitize(mat), frozenset({TAG_HERMITIAN}))
        for i, mat in mats.items()
    }
    return Povm(operators=ops, label="optimal")


def _character_sum(ct: CharacterTable, mu: int, sub) -> complex:
    cls_of = ct.class_data.class_of
    return complex(sum(ct.chi[mu, cls_of[e]] for e in sub.elements))
