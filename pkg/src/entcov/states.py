"""Bipartite states used by the detection experiments.

Ensemble states live in the symmetric (Dicke) subspace of M qubits per side,
dimension M+1 each, so the joint space has dimension (M+1)^2.  Collective
spins follow the Pauli-sum convention S = sum_l sigma_l, which makes the S^z
eigenvalue of Dicke index k equal to M - 2k.  Joint amplitudes are stored
flat with index j*(M+1) + k, j being the A-side Dicke index; this layout is
the contract shared with the partial transpose and the CSV exports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import hermiticity_defect

NORM_TOL = 1e-12
STATE_HERMITICITY_TOL = 1e-10
STATE_TRACE_TOL = 1e-10
STATE_PSD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state on a bipartite space, amplitudes stored flat."""

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.dim_a * self.dim_b,):
            raise ValueError(
                f"amplitude vector has shape {amps.shape}, "
                f"expected ({self.dim_a * self.dim_b},)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def density(self) -> "DensityMatrix":
        m = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.dim_a, self.dim_b, m)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix with a bipartition.

    Construction checks Hermiticity and trace; positivity needs an
    eigensolve and is checked by validate().
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise ValueError("subsystem dimensions must be positive")
        m = np.asarray(self.matrix, dtype=complex)
        d = self.dim_a * self.dim_b
        if m.shape != (d, d):
            raise ValueError(f"matrix has shape {m.shape}, expected ({d}, {d})")
        defect = hermiticity_defect(m)
        if defect > STATE_HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian: defect {defect:.3e}")
        tr = m.trace()
        if abs(tr - 1.0) > STATE_TRACE_TOL:
            raise ValueError(f"density matrix trace {tr!r} deviates from 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)[0])

    def validate(self) -> "DensityMatrix":
        """Additionally check positive semidefiniteness."""
        mn = self.min_eigenvalue()
        if mn < -STATE_PSD_TOL:
            raise ValueError(f"density matrix has negative eigenvalue {mn:.3e}")
        return self


def as_matrix(state) -> np.ndarray:
    """Dense matrix of a DensityMatrix, PureState, or raw square array."""
    if isinstance(state, DensityMatrix):
        return state.matrix
    if isinstance(state, PureState):
        return np.outer(state.amplitudes, state.amplitudes.conj())
    m = np.asarray(state, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def bell_state() -> PureState:
    """(|00> + |11>)/sqrt(2) on two qubits."""
    amps = np.zeros(4, dtype=complex)
    amps[0] = amps[3] = 1.0 / math.sqrt(2.0)
    return PureState(2, 2, amps)


def werner_mix(psi: PureState, mu: float) -> DensityMatrix:
    """Convex mixture (1-mu)/D * identity + mu |psi><psi|."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mixing parameter mu={mu} outside [0, 1]")
    d = psi.dim
    m = mu * np.outer(psi.amplitudes, psi.amplitudes.conj())
    m[np.diag_indices(d)] += (1.0 - mu) / d
    return DensityMatrix(psi.dim_a, psi.dim_b, m)


def spin_coherent_x(m: int) -> np.ndarray:
    """Dicke-basis amplitudes of the maximally x-polarized M-qubit ensemble.

    c_k = sqrt(C(M, k)) / 2^(M/2); exact binomials are used for small M and
    log-gamma evaluation beyond M = 30 to avoid overflow.
    """
    if m < 1:
        raise ValueError("ensemble size must be >= 1")
    if m <= 30:
        amps = np.array([math.sqrt(math.comb(m, k)) for k in range(m + 1)])
        return amps / 2 ** (m / 2)
    half_log = [
        0.5 * (math.lgamma(m + 1) - math.lgamma(k + 1) - math.lgamma(m - k + 1))
        - 0.5 * m * math.log(2.0)
        for k in range(m + 1)
    ]
    return np.exp(half_log)


def product_state(amps_a, amps_b) -> PureState:
    """Tensor two single-ensemble amplitude vectors into a joint PureState."""
    a = np.asarray(amps_a, dtype=complex)
    b = np.asarray(amps_b, dtype=complex)
    if a.ndim != 1 or b.ndim != 1:
        raise ValueError("amplitude vectors must be one-dimensional")
    return PureState(a.size, b.size, np.kron(a, b))


def szsz_evolve(state: PureState, t: float) -> PureState:
    """Apply exp(i S^z_A S^z_B t) in the joint Dicke basis.

    The amplitude at (j, k) picks up the phase exp(i (M-2j)(M-2k) t), so the
    norm is preserved exactly.
    """
    if state.dim_a != state.dim_b:
        raise ValueError("ensembles must have equal dimension")
    m = state.dim_a - 1
    sz = (m - 2 * np.arange(m + 1)).astype(float)
    phase = np.exp(1j * t * np.outer(sz, sz)).ravel()
    return PureState(state.dim_a, state.dim_b, state.amplitudes * phase)


def spin_ensemble_state(m: int, t: float) -> PureState:
    """exp(i S^z_A S^z_B t) applied to the doubly x-polarized ensemble pair."""
    c = spin_coherent_x(m)
    return szsz_evolve(product_state(c, c), t)
