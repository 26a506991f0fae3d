"""POVM validity, Holevo-Yuen-Kennedy-Lax optimality certification, success probabilities.

A measurement maximizes the average success probability over an ensemble
{(p_i, rho_i)} if and only if A = sum p_i E_i rho_i is hermitian and
A >= p_j rho_j for every hypothesis j.  Both conditions are checked
numerically: hermiticity as an entrywise residual, the operator
inequalities through eigenvalues of (A + A^dagger)/2 - p_j rho_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import CharacterTable
from .lattice import SubgroupLattice
from .linalg import Operator, hermitize
from .measurements import MeasurementPlan, Povm, Prior

SUCCESS_CLAMP_TOL = 1e-9


class MismatchError(ValueError):
    """POVM and ensemble do not share a hypothesis set or dimension."""


class OutOfRangeError(ValueError):
    """A success probability fell outside [0, 1] beyond the clamp tolerance."""


@dataclass(frozen=True)
class Tolerances:
    """Certification tolerances; all residual thresholds are engineering choices."""

    psd: float = 1e-8            # operator min eigenvalue >= -psd
    completeness: float = 1e-8   # max entry of |sum E - I|
    commutation: float = 1e-8    # max entry of |A - A^dagger|
    margin: float = 1e-8         # min eigenvalue of A_herm - p rho >= -margin

    @classmethod
    def scaled(cls, tol: float) -> "Tolerances":
        return cls(psd=tol, completeness=tol, commutation=tol, margin=tol)


@dataclass(frozen=True, eq=False)
class ValidityResult:
    min_eigenvalues: dict[int, float]
    completeness_residual: float


@dataclass(frozen=True, eq=False)
class OptimalityResult:
    commutation_residual: float
    margins: dict[int, float]


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Everything the verifier measured, plus verdicts at the recorded tolerances."""

    validity: ValidityResult
    commutation_residual: float
    optimality_margins: dict[int, float]
    success_probability: float
    closed_form_success: float | None
    valid: bool
    certified_optimal: bool
    tolerances: Tolerances = field(default_factory=Tolerances)


def _check_square(povm: Povm) -> int:
    dims = {op.mat.shape for op in povm.operators.values()}
    if len(dims) != 1 or any(len(s) != 2 or s[0] != s[1] for s in dims):
        raise MismatchError(f"POVM operators have inconsistent shapes {dims}")
    return next(iter(dims))[0]


def _check_alignment(povm: Povm, states) -> None:
    n = _check_square(povm)
    if set(povm.operators) != set(range(len(states))):
        raise MismatchError(
            f"POVM hypotheses {sorted(povm.operators)} do not match "
            f"ensemble of size {len(states)}"
        )
    for _, rho in states:
        if rho.mat.shape != (n, n):
            raise MismatchError(f"state shape {rho.mat.shape} does not match POVM ({n})")


def check_validity(povm: Povm) -> ValidityResult:
    """Min eigenvalue per operator and the completeness residual |sum E - I|."""
    n = _check_square(povm)
    total = np.zeros((n, n), dtype=np.complex128)
    min_eigs: dict[int, float] = {}
    for i in sorted(povm.operators):
        mat = povm.operators[i].mat
        total += mat
        min_eigs[i] = float(np.linalg.eigvalsh(hermitize(mat)).min())
    residual = float(np.max(np.abs(total - np.eye(n))))
    return ValidityResult(min_eigenvalues=min_eigs, completeness_residual=residual)


def check_optimality(
    povm: Povm, states: list[tuple[float, Operator]]
) -> OptimalityResult:
    """Residuals of both optimality conditions for a weighted ensemble.

    The two-sided equality sum p E rho = sum p rho E is equivalent to
    hermiticity of A = sum p E rho, which is cheaper to measure; the
    operator inequalities are evaluated as eigenvalue margins, one per
    hypothesis, using the hermitian part of A.
    """
    _check_alignment(povm, states)
    n = _check_square(povm)
    a = np.zeros((n, n), dtype=np.complex128)
    for i, (p, rho) in enumerate(states):
        a += p * (povm.operators[i].mat @ rho.mat)
    commutation = float(np.max(np.abs(a - a.conj().T)))
    a_herm = hermitize(a)
    margins = {
        i: float(np.linalg.eigvalsh(a_herm - p * rho.mat).min())
        for i, (p, rho) in enumerate(states)
    }
    return OptimalityResult(commutation_residual=commutation, margins=margins)


def success_probability(povm: Povm, states: list[tuple[float, Operator]]) -> float:
    """Average success probability sum p_i Re tr(rho_i E_i), clamped to [0, 1]."""
    _check_alignment(povm, states)
    total = 0.0
    for i, (p, rho) in enumerate(states):
        total += p * float(np.trace(rho.mat @ povm.operators[i].mat).real)
    if total < -SUCCESS_CLAMP_TOL or total > 1 + SUCCESS_CLAMP_TOL:
        raise OutOfRangeError(f"success probability {total!r} outside [0, 1]")
    return min(max(total, 0.0), 1.0)


def closed_form_success(
    plan: MeasurementPlan,
    lat: SubgroupLattice,
    ct: CharacterTable,
    prior: Prior,
) -> float:
    """Analytic success probability of the plan's measurement.

    Each irrep contributes d^2 * p_H * |H| / |G| for its chosen class:
    the measurement restricted to the irrep block succeeds with the
    block's share of the chosen hypotheses' weight.  Must agree with the
    direct-trace computation; the acceptance suite enforces that.
    """
    group_order = lat.subgroups[-1].order
    total = 0.0
    for entry in plan.irreps:
        rep = lat.classes[entry.chosen_class].representative
        total += (
            entry.dim**2
            * float(prior.probs[rep])
            * lat.subgroups[rep].order
            / group_order
        )
    return total


def verification_report(
    povm: Povm,
    states: list[tuple[float, Operator]],
    *,
    tolerances: Tolerances | None = None,
    closed_form: float | None = None,
) -> VerificationReport:
    """Bundle validity, optimality, and success probability into one report."""
    tol = tolerances or Tolerances()
    validity = check_validity(povm)
    optimality = check_optimality(povm, states)
    p_succ = success_probability(povm, states)
    valid = (
        min(validity.min_eigenvalues.values()) >= -tol.psd
        and validity.completeness_residual < tol.completeness
    )
    certified = (
        valid
        and optimality.commutation_residual < tol.commutation
        and min(optimality.margins.values()) >= -tol.margin
    )
    return VerificationReport(
        validity=validity,
        commutation_residual=optimality.commutation_residual,
        optimality_margins=optimality.margins,
        success_probability=p_succ,
        closed_form_success=closed_form,
        valid=valid,
        certified_optimal=certified,
        tolerances=tol,
    )
