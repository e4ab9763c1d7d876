"""N-operator Schrodinger uncertainty residuals and their identification
with the matrix invariants (principal-minor sums) of the uncertainty matrix.

The order-k invariant of a Hermitian matrix is the sum of its k x k
principal minors, equal to the elementary symmetric polynomial of the
eigenvalues.  For the uncertainty matrix these invariants collect the
k-operator uncertainty residuals: order 1 sums the variances, order 2 sums
the pairwise residuals, and for three operators the determinant is the
triple residual itself.  All of them are nonnegative for valid states.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .criterion import covariance_commutation, uncertainty_matrix
from .linalg import hermitian_eigenvalues
from .states import PureState, as_matrix

PURITY_TOL = 1e-10
RESIDUAL_FLOOR = -1e-9


def variance(rho, op) -> float:
    """sigma^2 = <xi^2> - <xi>^2."""
    v, _ = covariance_commutation(rho, [op])
    return float(v[0, 0])


def schrodinger_I2(rho, op1, op2) -> float:
    """Two-operator residual sigma_1^2 sigma_2^2 - |V_12|^2 - |Omega_12 / 2|^2.

    Nonnegative for every valid state; zero when the bound is saturated.
    """
    v, omega = covariance_commutation(rho, [op1, op2])
    return float(v[0, 0] * v[1, 1] - v[0, 1] ** 2 - (omega[0, 1] / 2.0) ** 2)


def _gram_vectors(psi: np.ndarray, mats) -> np.ndarray:
    """Columns f_i = (xi_i - <xi_i>) |psi>."""
    cols = []
    for x in mats:
        mean = np.vdot(psi, x @ psi).real
        cols.append(x @ psi - mean * psi)
    return np.array(cols).T


def _gram_triple_residual(g: np.ndarray) -> float:
    """Determinant of a 3x3 Hermitian Gram matrix, written out in the
    overlap terms of the three-operator uncertainty bound."""
    return float(
        (g[0, 0] * g[1, 1] * g[2, 2]).real
        - (g[0, 0] * abs(g[1, 2]) ** 2).real
        - (g[1, 1] * abs(g[0, 2]) ** 2).real
        - (g[2, 2] * abs(g[0, 1]) ** 2).real
        + 2.0 * (g[0, 1] * g[1, 2] * g[2, 0]).real
    )


def schrodinger_I3(rho, op1, op2, op3) -> float:
    """Three-operator residual.

    Pure states go through the explicit overlap vectors f_i; mixed states
    use the determinant of the 3x3 uncertainty matrix.  The two paths agree
    on pure states, where the uncertainty matrix is the Gram matrix of the
    f_i.
    """
    ops = [np.asarray(op, dtype=complex) for op in (op1, op2, op3)]
    if isinstance(rho, PureState):
        psi = rho.amplitudes
    else:
        r = as_matrix(rho)
        purity = float(np.einsum("ab,ba->", r, r).real)
        if abs(purity - 1.0) <= PURITY_TOL:
            w, vecs = np.linalg.eigh((r + r.conj().T) / 2)
            psi = vecs[:, -1]
        else:
            u = uncertainty_matrix(r, ops)
            return float(np.linalg.det(u).real)
    f = _gram_vectors(psi, ops)
    return _gram_triple_residual(f.conj().T @ f)


def invariant_decomposition(m, k: int) -> float:
    """Sum of all k x k principal minors of a Hermitian matrix.

    Equals the elementary symmetric polynomial e_k of the eigenvalues, so
    k=1 is the trace and k=N the determinant.
    """
    eigs = hermitian_eigenvalues(m)
    n = eigs.size
    if not 1 <= k <= n:
        raise ValueError(f"invariant order k={k} outside [1, {n}]")
    # charpoly coefficients alternate in sign: prod(x - l_i) = sum (-1)^k e_k x^(n-k)
    coeffs = np.poly(eigs)
    return float((-1) ** k * coeffs[k])


@dataclass(frozen=True, eq=False)
class UncertaintyReport:
    """Uncertainty residuals by index subset plus the invariant ladder.

    Every entry must clear the numerical floor -1e-9; a violation means the
    inputs were not a valid state and Hermitian operators.
    """

    n: int
    i_values: dict
    invariant_sums: dict

    def __post_init__(self):
        for subset, value in self.i_values.items():
            if value < RESIDUAL_FLOOR:
                raise ValueError(f"residual I{subset} = {value:.3e} is negative")
        for order, value in self.invariant_sums.items():
            if value < RESIDUAL_FLOOR:
                raise ValueError(f"order-{order} invariant {value:.3e} is negative")


def uncertainty_report(rho, observables) -> UncertaintyReport:
    """Residuals for all subsets up to order three plus every invariant sum.

    Subset residuals are the principal minors of the uncertainty matrix, so
    one matrix evaluation covers the whole report.
    """
    ops = observables.matrices() if hasattr(observables, "matrices") else list(observables)
    u = uncertainty_matrix(rho, ops)
    n = u.shape[0]
    i_values: dict = {}
    for j in range(n):
        i_values[(j,)] = float(u[j, j].real)
    for j, k in combinations(range(n), 2):
        i_values[(j, k)] = float((u[j, j] * u[k, k]).real - abs(u[j, k]) ** 2)
    for subset in combinations(range(n), 3):
        sub = u[np.ix_(subset, subset)]
        i_values[subset] = float(np.linalg.det(sub).real)
    sums = {k: invariant_decomposition(u, k) for k in range(1, n + 1)}
    return UncertaintyReport(n=n, i_values=i_values, invariant_sums=sums)
