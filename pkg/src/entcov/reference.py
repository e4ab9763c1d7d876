"""Reference criteria for cross-validation: the spectrum of the partially
transposed state, the quadrature instance of the covariance criterion, and
a simulated-annealing search over decomposable entanglement witnesses."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criterion import CriterionReport, DEFAULT_VERDICT_TOL, criterion_matrix, detect
from .linalg import hermitize, kron, partial_transpose
from .observables import ObservableSet, collective_spin_matrices, hp_quadrature_set
from .states import DensityMatrix, as_matrix


def ppt_min_eigenvalue(rho, dim_a: int | None = None, dim_b: int | None = None) -> float:
    """Minimum eigenvalue of the partially transposed state.

    A negative value certifies entanglement.  Dimensions are taken from the
    DensityMatrix when one is passed.
    """
    if isinstance(rho, DensityMatrix):
        dim_a, dim_b = rho.dim_a, rho.dim_b
    elif dim_a is None or dim_b is None:
        raise ValueError("dim_a and dim_b are required for raw matrices")
    sigma = partial_transpose(as_matrix(rho), dim_a, dim_b, "B")
    return float(np.linalg.eigvalsh(hermitize(sigma))[0])


def duan_simon_report(
    rho,
    m: int,
    tol: float = DEFAULT_VERDICT_TOL,
    spin_set: ObservableSet | None = None,
) -> CriterionReport:
    """Quadrature-pair criterion on the collective spins of two ensembles.

    Builds the four quadratures (x_A, p_A, x_B, p_B) from the spin sextet
    (the given one, if any) and runs the eigenvalue test on their criterion
    matrix.  For quadrature operators this is the continuous-variable
    covariance-matrix separability test.
    """
    quads = hp_quadrature_set(m, spin_set=spin_set)
    return detect(criterion_matrix(rho, quads), tol)


@dataclass(frozen=True)
class AnnealParams:
    """Knobs for the witness annealer; defaults favor small ensembles."""

    t0: float = 1.0
    decay: float = 0.98
    sweeps: int = 300
    box_scale: float = 10.0
    proposal_scale: float = 0.5
    feas_tol: float = 1e-8
    feas_max_iter: int = 500

    def __post_init__(self):
        if self.t0 <= 0 or not 0.0 < self.decay < 1.0:
            raise ValueError("temperature schedule requires t0 > 0 and 0 < decay < 1")
        if self.sweeps < 1 or self.feas_max_iter < 1:
            raise ValueError("sweeps and feas_max_iter must be positive")
        if self.box_scale <= 0 or self.proposal_scale <= 0 or self.feas_tol <= 0:
            raise ValueError("box_scale, proposal_scale and feas_tol must be positive")


@dataclass(frozen=True, eq=False)
class WitnessResult:
    """Best feasible witness found: its expectation, coefficients, the
    feasibility residual of the decomposition certificate, and the seed."""

    min_expectation: float
    coefficients: np.ndarray
    feasibility_residual: float
    seed: int
    iterations: int


def _clip_psd(x: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(x)
    return (v * np.maximum(w, 0.0)) @ v.conj().T


def _negative_part_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(np.minimum(np.linalg.eigvalsh(x), 0.0)))


def _pt_a(m: np.ndarray, d: int) -> np.ndarray:
    # unchecked partial transpose over A for the projection hot loop
    return m.reshape(d, d, d, d).transpose(2, 1, 0, 3).reshape(d * d, d * d)


def decomposable_split(
    w,
    dim_a: int,
    dim_b: int,
    tol: float = 1e-8,
    max_iter: int = 500,
    start: np.ndarray | None = None,
) -> tuple[bool, float, np.ndarray]:
    """Try to split w = P + Q^(T_A) with P, Q both positive semidefinite.

    A split with one summand zero is recognized directly; otherwise the
    search alternates projections between the PSD cone and its image under
    the affine map P -> w - P followed by partial transposition.  The
    transpose is a Frobenius isometry, so both projections are exact
    eigenvalue clips.  Returns (feasible, residual, P) where the residual is
    the largest remaining negative-part norm of P and (w - P)^(T_A).
    Non-convergence within max_iter reports infeasible.
    """
    if dim_a != dim_b:
        raise ValueError("decomposable_split expects equal subsystem dimensions")
    d = dim_a
    w = hermitize(np.asarray(w, dtype=complex))
    if w.shape[0] != d * d:
        raise ValueError(f"matrix dimension {w.shape[0]} != dim_a*dim_b = {d * d}")
    neg_w = _negative_part_norm(w)
    if neg_w <= tol:
        return True, neg_w, w
    neg_wta = _negative_part_norm(_pt_a(w, d))
    if neg_wta <= tol:
        return True, neg_wta, np.zeros_like(w)
    p = hermitize(np.asarray(start, dtype=complex)) if start is not None else w.copy()
    converged = False
    for _ in range(max_iter):
        evals, evecs = np.linalg.eigh(p)
        neg_p = float(np.linalg.norm(np.minimum(evals, 0.0)))
        if neg_p <= tol:
            # p already PSD; if the complementary part also clears the cone,
            # p certifies the split and a warm start can accept immediately
            neg_q = _negative_part_norm(_pt_a(w - p, d))
            if neg_q <= tol:
                return True, max(neg_p, neg_q), p
        clipped = (evecs * np.maximum(evals, 0.0)) @ evecs.conj().T
        y = _pt_a(w - clipped, d)
        p_next = w - _pt_a(_clip_psd(y), d)
        move = float(np.linalg.norm(p_next - p))
        p = hermitize(p_next)
        if move <= tol:
            converged = True
            break
    residual = max(
        _negative_part_norm(p),
        _negative_part_norm(_pt_a(w - p, d)),
    )
    return converged and residual <= tol, residual, p


def witness_basis(m: int) -> list[np.ndarray]:
    """Per-side operator basis (identity, S^x, S^y, S^z)."""
    sx, sy, sz = collective_spin_matrices(m)
    return [np.eye(m + 1, dtype=complex), sx, sy, sz]


_SCREEN_STATES = 64
_SCREEN_SLACK = -1e-10


def _product_screen(basis, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Per-side basis expectations on random pure states.

    A decomposable witness has nonnegative expectation on every product
    state, so sa[k] @ c @ sb[k] < 0 proves a candidate infeasible without
    running the projection loop.  The screen never rejects a feasible
    candidate; it only short-circuits the verdict the projections would
    reach anyway.
    """
    dim = basis[0].shape[0]
    sa = np.empty((_SCREEN_STATES, 4))
    sb = np.empty((_SCREEN_STATES, 4))
    for k in range(_SCREEN_STATES):
        for target in (sa, sb):
            v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            target[k] = [np.vdot(v, b @ v).real for b in basis]
    return sa, sb


def witness_optimize(
    rho,
    m: int,
    params: AnnealParams | None = None,
    seed: int = 0,
) -> WitnessResult:
    """Simulated-annealing search for a decomposable witness on rho.

    W = sum_ij c_ij a_i (x) b_j over the identity-plus-spin bases with c_00
    pinned to 1/Tr(identity) so Tr(W) = 1.  One random coefficient receives
    a Gaussian kick per step; the proposal passes a Metropolis test on <W>
    and is then certified decomposable by alternating projections, with
    infeasible candidates rejected outright.  Every committed candidate is
    a valid witness, so a negative optimum certifies entanglement.
    """
    params = params or AnnealParams()
    d_side = m + 1
    dim = d_side * d_side
    basis = witness_basis(m)
    ops = [[kron(a, b) for b in basis] for a in basis]
    r = as_matrix(rho)
    if r.shape[0] != dim:
        raise ValueError(f"state dimension {r.shape[0]} does not match (m+1)^2 = {dim}")
    expect = np.array(
        [[np.einsum("ab,ba->", r, ops[i][j]).real for j in range(4)] for i in range(4)]
    )
    box = params.box_scale / dim
    rng = np.random.default_rng(seed)
    # screen states are fixed independently of the user seed
    sa, sb = _product_screen(basis, np.random.default_rng(0x5eed))

    c = np.zeros((4, 4))
    c[0, 0] = 1.0 / dim
    w = ops[0][0] / dim
    _, residual0, p_warm = decomposable_split(
        w, d_side, d_side, params.feas_tol, params.feas_max_iter
    )
    best_c = c.copy()
    best_obj = float(np.sum(c * expect))
    best_residual = residual0
    obj = best_obj

    free = [(i, j) for i in range(4) for j in range(4) if (i, j) != (0, 0)]
    temp = params.t0
    iterations = 0
    for _ in range(params.sweeps):
        for _ in range(len(free)):
            iterations += 1
            i, j = free[rng.integers(len(free))]
            new = c[i, j] + rng.normal(0.0, params.proposal_scale * box * temp)
            if abs(new) > box:
                continue
            delta = (new - c[i, j]) * expect[i, j]
            if delta > 0.0 and rng.random() >= np.exp(-delta / temp):
                continue
            c_new = c.copy()
            c_new[i, j] = new
            if np.min(np.einsum("ki,ij,kj->k", sa, c_new, sb)) < _SCREEN_SLACK:
                continue
            w_new = w + (new - c[i, j]) * ops[i][j]
            feasible, residual, p_new = decomposable_split(
                w_new, d_side, d_side, params.feas_tol, params.feas_max_iter,
                start=p_warm,
            )
            if not feasible:
                continue
            c = c_new
            w = w_new
            obj += delta
            p_warm = p_new
            if obj < best_obj:
                best_obj = obj
                best_c = c.copy()
                best_residual = residual
        temp *= params.decay

    return WitnessResult(
        min_expectation=float(np.sum(best_c * expect)),
        coefficients=best_c,
        feasibility_residual=float(best_residual),
        seed=int(seed),
        iterations=iterations,
    )


def witness_operator(coefficients, m: int) -> np.ndarray:
    """Assemble the witness matrix from its coefficient table."""
    basis = witness_basis(m)
    c = np.asarray(coefficients, dtype=float)
    if c.shape != (4, 4):
        raise ValueError(f"coefficients must be 4x4, got {c.shape}")
    out = np.zeros(((m + 1) ** 2, (m + 1) ** 2), dtype=complex)
    for i in range(4):
        for j in range(4):
            if c[i, j] != 0.0:
                out += c[i, j] * kron(basis[i], basis[j])
    return out
