"""Covariance and commutation matrices, the operator-level partial-transpose
criterion matrix, and verdict reporting.

Two equivalent routes to the criterion matrix are implemented.  The primary
route transposes the operator products xi_j xi_k over subsystem B by index
reshuffling, which is correct for arbitrary joint-support operators.  The
second route averages the untransposed operators against the partially
transposed state; the two must agree entrywise and each serves as the oracle
for the other in the test suite.  A third route reconstructs the matrix from
externally measured correlation data when every operator is locally
supported with a definite transpose parity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_HERMITICITY_TOL, hermitian_eigenvalues, hermitize, partial_transpose
from .observables import SUPPORT_A, SUPPORT_B, Observable, ObservableSet
from .states import as_matrix

DEFAULT_VERDICT_TOL = 1e-9
DATA_TOL = 1e-10

ENTANGLED = "ENTANGLED"
UNDETECTED = "UNDETECTED"


class DataValidationError(ValueError):
    """Measured correlation data violates one of its structural invariants."""


def _operator_matrices(observables) -> list[np.ndarray]:
    """Accept an ObservableSet, Observables, or raw arrays."""
    if isinstance(observables, ObservableSet):
        return observables.matrices()
    mats = []
    for o in observables:
        m = o.matrix if isinstance(o, Observable) else np.asarray(o, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("observables must be square matrices")
        mats.append(m)
    if not mats:
        raise ValueError("observable list is empty")
    return mats


def _trace_product(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.einsum("ab,ba->", a, b))


def _second_moments(rho, mats) -> tuple[np.ndarray, np.ndarray]:
    """Means Tr(rho xi_j) and moments e[j,k] = Tr(rho xi_j xi_k).

    Only j <= k is evaluated; the mirror entries follow by conjugation,
    which is exact for a Hermitian state and Hermitian operators.
    """
    r = as_matrix(rho)
    n = len(mats)
    if mats[0].shape != r.shape:
        raise ValueError(
            f"state dimension {r.shape[0]} does not match operators {mats[0].shape[0]}"
        )
    means = np.array([_trace_product(r, x).real for x in mats])
    e = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(j, n):
            val = _trace_product(r, mats[j] @ mats[k])
            e[j, k] = val
            e[k, j] = np.conj(val)
    return means, e


def covariance_commutation(rho, observables) -> tuple[np.ndarray, np.ndarray]:
    """Covariance matrix V and commutation matrix Omega in one pass.

    V[j,k] = <{xi_j, xi_k}>/2 - <xi_j><xi_k> is returned symmetrized and
    Omega[j,k] = -i <[xi_j, xi_k]> antisymmetrized.
    """
    mats = _operator_matrices(observables)
    means, e = _second_moments(rho, mats)
    v = e.real - np.outer(means, means)
    omega = 2.0 * e.imag
    return (v + v.T) / 2, (omega - omega.T) / 2


def covariance_matrix(rho, observables) -> np.ndarray:
    return covariance_commutation(rho, observables)[0]


def commutation_matrix(rho, observables) -> np.ndarray:
    return covariance_commutation(rho, observables)[1]


def uncertainty_matrix(rho, observables) -> np.ndarray:
    """V + (i/2) Omega: Hermitian and positive semidefinite for any state."""
    v, omega = covariance_commutation(rho, observables)
    return hermitize(v + 0.5j * omega)


class CriterionEvaluator:
    """Repeated criterion-matrix evaluation over one observable set.

    The partially transposed operators and pairwise products do not depend
    on the state, so they are built once; each evaluation then costs one
    trace per matrix entry.  Entry (j,k) is
    Tr[rho PT_B(xi_j xi_k)] - Tr[rho PT_B(xi_j)] Tr[rho PT_B(xi_k)].
    """

    def __init__(self, obs_set: ObservableSet):
        self.obs_set = obs_set
        da, db = obs_set.dim_a, obs_set.dim_b
        mats = obs_set.matrices()
        n = len(mats)
        self._n = n
        self._dim = da * db
        self._pt_singles = np.stack(
            [partial_transpose(x, da, db, "B") for x in mats]
        )
        self._pairs = [(j, k) for j in range(n) for k in range(j, n)]
        self._pt_products = np.stack(
            [partial_transpose(mats[j] @ mats[k], da, db, "B") for j, k in self._pairs]
        )

    def matrix(self, rho) -> np.ndarray:
        r = as_matrix(rho)
        if r.shape[0] != self._dim:
            raise ValueError(
                f"state dimension {r.shape[0]} does not match observables {self._dim}"
            )
        means = np.einsum("nab,ba->n", self._pt_singles, r).real
        moments = np.einsum("pab,ba->p", self._pt_products, r)
        c = np.zeros((self._n, self._n), dtype=complex)
        for (j, k), e in zip(self._pairs, moments):
            c[j, k] = e - means[j] * means[k]
            c[k, j] = np.conj(c[j, k])
        return hermitize(c)


def criterion_matrix(rho, obs_set: ObservableSet) -> np.ndarray:
    """Criterion matrix via partial transposition of the operator products.

    With a single observable this degenerates to the 1x1 variance of the
    transposed operator, which is never negative: one observable cannot
    detect anything.
    """
    return CriterionEvaluator(obs_set).matrix(rho)


def criterion_matrix_pt_state(rho, obs_set: ObservableSet) -> np.ndarray:
    """Criterion matrix via the partially transposed state.

    Averages the untransposed operators against PT_B(rho); equals
    criterion_matrix entrywise and backs it as a test oracle.
    """
    r = as_matrix(rho)
    sigma = partial_transpose(r, obs_set.dim_a, obs_set.dim_b, "B")
    return uncertainty_matrix(sigma, obs_set)


@dataclass(frozen=True, eq=False)
class CriterionReport:
    """Spectrum summary and verdict for one Hermitian criterion matrix."""

    eigenvalues: np.ndarray
    min_eigenvalue: float
    determinant: float
    verdict: str
    tolerance: float

    def __post_init__(self):
        expected = ENTANGLED if self.min_eigenvalue < -self.tolerance else UNDETECTED
        if self.verdict != expected:
            raise ValueError(
                f"verdict {self.verdict!r} inconsistent with min eigenvalue "
                f"{self.min_eigenvalue} at tolerance {self.tolerance}"
            )


def detect(
    matrix,
    tol: float = DEFAULT_VERDICT_TOL,
    hermiticity_tol: float = DEFAULT_HERMITICITY_TOL,
) -> CriterionReport:
    """Eigenvalue test: any eigenvalue below -tol certifies entanglement."""
    eigs = hermitian_eigenvalues(matrix, hermiticity_tol)
    mn = float(eigs[0])
    det = float(np.prod(eigs))
    verdict = ENTANGLED if mn < -tol else UNDETECTED
    return CriterionReport(eigs, mn, det, verdict, float(tol))


@dataclass(frozen=True, eq=False)
class CorrelationData:
    """Measured means, covariance and commutation matrices with the operator
    metadata (partition tag and transpose parity) needed to reconstruct the
    criterion matrix without access to the state."""

    labels: tuple[str, ...]
    partition: tuple[str, ...]
    pt_parity: tuple[int, ...]
    means: np.ndarray
    v: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "partition", tuple(str(x) for x in self.partition))
        object.__setattr__(self, "pt_parity", tuple(int(x) for x in self.pt_parity))
        object.__setattr__(self, "means", np.asarray(self.means, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))

    @property
    def n(self) -> int:
        return len(self.labels)

    def validate(self) -> "CorrelationData":
        n = self.n
        if n == 0:
            raise DataValidationError("no operators in correlation data")
        for name, value in (("partition", self.partition), ("pt_parity", self.pt_parity)):
            if len(value) != n:
                raise DataValidationError(f"{name} has length {len(value)}, expected {n}")
        if self.means.shape != (n,):
            raise DataValidationError(f"means has shape {self.means.shape}, expected ({n},)")
        for tag in self.partition:
            if tag not in (SUPPORT_A, SUPPORT_B):
                raise DataValidationError(f"partition tag {tag!r} must be 'A' or 'B'")
        for s in self.pt_parity:
            if s not in (1, -1):
                raise DataValidationError(f"pt_parity entry {s!r} must be +1 or -1")
        for name, mat in (("V", self.v), ("Omega", self.omega)):
            if mat.shape != (n, n):
                raise DataValidationError(f"{name} has shape {mat.shape}, expected ({n}, {n})")
            if not np.isfinite(mat).all():
                raise DataValidationError(f"{name} contains NaN or Inf entries")
        scale_v = max(1.0, float(np.abs(self.v).max()))
        if np.abs(self.v - self.v.T).max() > DATA_TOL * scale_v:
            raise DataValidationError("covariance matrix V is not symmetric")
        scale_o = max(1.0, float(np.abs(self.omega).max()))
        if np.abs(self.omega + self.omega.T).max() > DATA_TOL * scale_o:
            raise DataValidationError("commutation matrix Omega is not antisymmetric")
        for j in range(n):
            for k in range(n):
                if self.partition[j] != self.partition[k] and abs(self.omega[j, k]) > DATA_TOL * scale_o:
                    raise DataValidationError(
                        f"Omega[{j},{k}] is nonzero across the A/B partition; "
                        "operators on different subsystems must commute"
                    )
        return self

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "partition": list(self.partition),
            "pt_parity": list(self.pt_parity),
            "means": self.means.tolist(),
            "V": self.v.tolist(),
            "Omega": self.omega.tolist(),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "CorrelationData":
        try:
            return cls(
                labels=tuple(payload["labels"]),
                partition=tuple(payload["partition"]),
                pt_parity=tuple(payload["pt_parity"]),
                means=payload["means"],
                v=payload["V"],
                omega=payload["Omega"],
            )
        except KeyError as exc:
            raise DataValidationError(f"correlation data is missing field {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise DataValidationError(f"malformed correlation data: {exc}") from None


def correlation_data_from_state(rho, obs_set: ObservableSet) -> CorrelationData:
    """Simulate the measurement record an experiment would supply."""
    for o in obs_set:
        if o.support not in (SUPPORT_A, SUPPORT_B) or o.pt_parity is None:
            raise DataValidationError(
                f"observable {o.label!r} is not locally supported with a definite "
                "transpose parity; it cannot enter the data-driven path"
            )
    mats = obs_set.matrices()
    means, e = _second_moments(rho, mats)
    v = e.real - np.outer(means, means)
    omega = 2.0 * e.imag
    return CorrelationData(
        labels=obs_set.labels,
        partition=tuple(o.support for o in obs_set),
        pt_parity=tuple(o.pt_parity for o in obs_set),
        means=means,
        v=(v + v.T) / 2,
        omega=(omega - omega.T) / 2,
    )


def criterion_matrix_from_data(data: CorrelationData) -> np.ndarray:
    """Reconstruct the criterion matrix from measured correlators alone.

    For locally supported operators with transpose parity s_j the partial
    transpose acts on the measured quantities directly: entries with both
    operators on A are V + (i/2) Omega; cross terms reduce to the covariance
    scaled by the B-side parity (the commutator vanishes across the
    partition); entries with both operators on B reverse the operator order,
    giving s_j s_k (V - (i/2) Omega).  Parity signs on the means cancel
    inside the covariance, so the means never enter explicitly.
    """
    data.validate()
    n = data.n
    c = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            v = data.v[j, k]
            half_omega = 0.5j * data.omega[j, k]
            pj, pk = data.partition[j], data.partition[k]
            sj, sk = data.pt_parity[j], data.pt_parity[k]
            if pj == SUPPORT_A and pk == SUPPORT_A:
                c[j, k] = v + half_omega
            elif pj == SUPPORT_B and pk == SUPPORT_B:
                c[j, k] = sj * sk * (v - half_omega)
            elif pj == SUPPORT_A:
                c[j, k] = sk * v
            else:
                c[j, k] = sj * v
    return hermitize(c)
