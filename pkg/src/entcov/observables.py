"""Observable sets: Pauli products, collective spins in the Dicke basis,
Holstein-Primakoff quadratures, and SO(3)-rotated variants.

The Dicke-basis matrix elements are real for S^x and S^z and purely
imaginary for S^y, so the transpose over one subsystem acts on the
generated operators as an exact sign: +1 for S^x, S^z and -1 for S^y.
That sign is recorded as pt_parity on each observable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import kron, partial_transpose

SUPPORT_A = "A"
SUPPORT_B = "B"
SUPPORT_JOINT = "JOINT"

OBS_HERMITICITY_TOL = 1e-10
PT_PARITY_TOL = 1e-10
ORTHOGONALITY_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian operator on the joint space with support and parity tags.

    pt_parity, when set, asserts that the partial transpose over B maps the
    matrix to pt_parity times itself; ObservableSet verifies the claim.
    """

    label: str
    matrix: np.ndarray
    support: str
    pt_parity: int | None = None

    def __post_init__(self):
        if self.support not in (SUPPORT_A, SUPPORT_B, SUPPORT_JOINT):
            raise ValueError(f"unknown support tag {self.support!r}")
        if self.pt_parity not in (None, 1, -1):
            raise ValueError(f"pt_parity must be +1, -1 or None, got {self.pt_parity!r}")
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"observable {self.label!r} is not a square matrix")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Ordered collection of observables sharing one bipartite space."""

    observables: tuple[Observable, ...]
    dim_a: int
    dim_b: int

    def __post_init__(self):
        obs = tuple(self.observables)
        if not obs:
            raise ValueError("observable set is empty")
        d = self.dim_a * self.dim_b
        labels = set()
        for o in obs:
            if o.matrix.shape != (d, d):
                raise ValueError(
                    f"observable {o.label!r} has shape {o.matrix.shape}, expected ({d}, {d})"
                )
            scale = max(1.0, float(np.linalg.norm(o.matrix)))
            if np.linalg.norm(o.matrix - o.matrix.conj().T) > OBS_HERMITICITY_TOL * scale:
                raise ValueError(f"observable {o.label!r} is not Hermitian")
            if o.pt_parity is not None:
                pt = partial_transpose(o.matrix, self.dim_a, self.dim_b, "B")
                if np.linalg.norm(pt - o.pt_parity * o.matrix) > PT_PARITY_TOL * scale:
                    raise ValueError(
                        f"observable {o.label!r} does not have partial-transpose "
                        f"parity {o.pt_parity}"
                    )
            if o.label in labels:
                raise ValueError(f"duplicate observable label {o.label!r}")
            labels.add(o.label)
        object.__setattr__(self, "observables", obs)

    def __len__(self) -> int:
        return len(self.observables)

    def __iter__(self):
        return iter(self.observables)

    def __getitem__(self, i) -> Observable:
        return self.observables[i]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(o.label for o in self.observables)

    def matrices(self) -> list[np.ndarray]:
        return [o.matrix for o in self.observables]


def pauli_product_set() -> ObservableSet:
    """The two-qubit triple (sigma^x sigma^x, sigma^y sigma^y, sigma^z sigma^z)."""
    members = (
        Observable("XX", kron(PAULI_X, PAULI_X), SUPPORT_JOINT, 1),
        Observable("YY", kron(PAULI_Y, PAULI_Y), SUPPORT_JOINT, -1),
        Observable("ZZ", kron(PAULI_Z, PAULI_Z), SUPPORT_JOINT, 1),
    )
    return ObservableSet(members, 2, 2)


def collective_spin_matrices(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Single-ensemble (S^x, S^y, S^z) in the Dicke basis, Pauli-sum scale.

    S^z = diag(M - 2k); the raising part has elements sqrt(k (M - k + 1)) on
    the first superdiagonal.  For M = 1 these are exactly the Pauli matrices.
    """
    if m < 1:
        raise ValueError("ensemble size must be >= 1")
    k = np.arange(m + 1)
    sz = np.diag((m - 2 * k).astype(complex))
    up = np.zeros((m + 1, m + 1))
    kk = np.arange(1, m + 1)
    up[kk - 1, kk] = np.sqrt(kk * (m - kk + 1))
    sx = (up + up.T).astype(complex)
    sy = -1j * (up - up.T)
    return sx, sy, sz


def collective_spin_set(m: int) -> ObservableSet:
    """Six joint-space operators (S^x_A, S^y_A, S^z_A, S^x_B, S^y_B, S^z_B)."""
    sx, sy, sz = collective_spin_matrices(m)
    eye = np.eye(m + 1, dtype=complex)
    members = (
        Observable("Sx_A", kron(sx, eye), SUPPORT_A, 1),
        Observable("Sy_A", kron(sy, eye), SUPPORT_A, 1),
        Observable("Sz_A", kron(sz, eye), SUPPORT_A, 1),
        Observable("Sx_B", kron(eye, sx), SUPPORT_B, 1),
        Observable("Sy_B", kron(eye, sy), SUPPORT_B, -1),
        Observable("Sz_B", kron(eye, sz), SUPPORT_B, 1),
    )
    return ObservableSet(members, m + 1, m + 1)


def _require_spin_sextet(obs_set: ObservableSet):
    supports = tuple(o.support for o in obs_set)
    if len(obs_set) != 6 or supports != (
        SUPPORT_A, SUPPORT_A, SUPPORT_A, SUPPORT_B, SUPPORT_B, SUPPORT_B,
    ):
        raise ValueError(
            "expected a spin sextet ordered (x, y, z) on A then (x, y, z) on B"
        )


def hp_quadrature_set(m: int, spin_set: ObservableSet | None = None) -> ObservableSet:
    """Quadratures (x_A, p_A, x_B, p_B) = (S^y, S^z)_(A,B) / sqrt(2M).

    With spin_set given (for example a rotated sextet), its y and z members
    are scaled instead, so sub-optimal measurement axes can be modeled.
    """
    if m < 1:
        raise ValueError("ensemble size must be >= 1")
    if spin_set is None:
        spin_set = collective_spin_set(m)
    _require_spin_sextet(spin_set)
    scale = 1.0 / np.sqrt(2.0 * m)
    picks = (("x_A", 1), ("p_A", 2), ("x_B", 4), ("p_B", 5))
    members = tuple(
        Observable(label, scale * spin_set[i].matrix, spin_set[i].support,
                   spin_set[i].pt_parity)
        for label, i in picks
    )
    return ObservableSet(members, spin_set.dim_a, spin_set.dim_b)


def rotate_so3(obs_set: ObservableSet, r) -> ObservableSet:
    """Apply one 3x3 rotation to the A spin triple and the B spin triple.

    The rotated operators generally have no definite partial-transpose
    parity, so pt_parity is cleared on every member.
    """
    _require_spin_sextet(obs_set)
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        raise ValueError(f"rotation must be 3x3, got shape {r.shape}")
    if np.linalg.norm(r.T @ r - np.eye(3)) > ORTHOGONALITY_TOL:
        raise ValueError("rotation matrix is not orthogonal")
    members = []
    for block in (0, 3):
        triple = [obs_set[block + j].matrix for j in range(3)]
        for i in range(3):
            rotated = sum(r[i, j] * triple[j] for j in range(3))
            label = obs_set[block + i].label + "'"
            members.append(
                Observable(label, rotated, obs_set[block + i].support, None)
            )
    return ObservableSet(tuple(members), obs_set.dim_a, obs_set.dim_b)
