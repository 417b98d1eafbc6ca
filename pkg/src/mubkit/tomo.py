"""State tomography in the displacement-operator and projective-measurement pictures.

Two independent reconstruction paths are provided so they can be played
against each other: expansion over the N^2 unitary displacement operators,
and the affine combination of the N+1 projective measurement distributions.
Both must return the input density matrix to float accuracy.
"""

from __future__ import annotations

import numpy as np

from .gf import GaloisField
from .mub import mub_family, projector_from_u, state_vector
from .pauli import DEFAULT_DENSE_CAP, dense_matrix, v_op
from .report import CheckReport


def check_density(rho: np.ndarray, *, tol: float = 1e-9) -> np.ndarray:
    """Validate a density matrix; returns it as a complex ndarray."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise ValueError(f"trace is {np.trace(rho):.6f}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def random_density(N: int, *, seed: int | None = None, rank: int | None = None) -> np.ndarray:
    """Haar-ish random density matrix G G^dag / tr, reproducible by seed."""
    rng = np.random.default_rng(seed)
    r = N if rank is None else rank
    G = rng.standard_normal((N, r)) + 1j * rng.standard_normal((N, r))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def pauli_decompose(
    f: GaloisField, rho: np.ndarray, *, cap: int = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """Coefficients c[j, i] = tr((V^j_i)^dag rho) of the displacement expansion."""
    rho = np.asarray(rho, dtype=complex)
    N = f.N
    coeffs = np.empty((N, N), dtype=complex)
    for j in range(N):
        for i in range(N):
            coeffs[j, i] = np.vdot(dense_matrix(v_op(f, j, i), cap=cap), rho)
    return coeffs


def pauli_reconstruct(
    f: GaloisField, coeffs: np.ndarray, *, cap: int = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """Invert pauli_decompose: rho = (1/N) sum c[j, i] V^j_i."""
    coeffs = np.asarray(coeffs, dtype=complex)
    N = f.N
    if coeffs.shape != (N, N):
        raise ValueError(f"coefficient array must be {N}x{N}, got {coeffs.shape}")
    acc = np.zeros((N, N), dtype=complex)
    for j in range(N):
        for i in range(N):
            acc += coeffs[j, i] * dense_matrix(v_op(f, j, i), cap=cap)
    return acc / N


def u_coefficients(
    f: GaloisField, rho: np.ndarray, *, phase_k: int = 0, cap: int = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """tr((U^i_l)^dag rho) for every class operator; real in characteristic 2."""
    from .pauli import u_op

    rho = np.asarray(rho, dtype=complex)
    out = np.empty((f.N + 1, f.N), dtype=complex)
    for i in range(f.N + 1):
        for l in range(f.N):
            out[i, l] = np.vdot(dense_matrix(u_op(f, i, l, phase_k=phase_k), cap=cap), rho)
    return out


def mub_projectors(
    f: GaloisField, *, phase_k: int = 0, cap: int = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """All (N+1) x N rank-one projectors as a complex array [i, k, :, :]."""
    if f.N > cap:
        raise ValueError(f"dimension {f.N} exceeds dense cap {cap}")
    N = f.N
    fam = mub_family(f, phase_k=phase_k)
    P = np.empty((N + 1, N, N, N), dtype=complex)
    for i in range(N + 1):
        for k in range(N):
            v = state_vector(fam.bases[i][k])
            P[i, k] = np.outer(v, v.conj())
    return P


def mub_probabilities(
    f: GaloisField,
    rho: np.ndarray,
    *,
    phase_k: int = 0,
    cap: int = DEFAULT_DENSE_CAP,
    projectors: np.ndarray | None = None,
) -> np.ndarray:
    """Measurement distributions p[i, k] = tr(P^i_k rho) over all N+1 bases."""
    rho = check_density(rho)
    if projectors is None:
        projectors = mub_projectors(f, phase_k=phase_k, cap=cap)
    probs = np.einsum("ikab,ba->ik", projectors, rho)
    if np.abs(probs.imag).max() > 1e-9:
        raise AssertionError("projective probabilities came out complex; unreachable")
    return probs.real


def mub_reconstruct(
    f: GaloisField,
    probs: np.ndarray,
    *,
    phase_k: int = 0,
    cap: int = DEFAULT_DENSE_CAP,
    projectors: np.ndarray | None = None,
) -> np.ndarray:
    """Affine inversion rho = sum_{i,k} p[i,k] P^i_k - I.

    Valid because the N+1 distributions of a density matrix carry
    exactly N^2 - 1 + (N+1) constrained degrees of freedom.
    """
    probs = np.asarray(probs, dtype=float)
    N = f.N
    if probs.shape != (N + 1, N):
        raise ValueError(f"probability table must be {(N + 1)}x{N}, got {probs.shape}")
    sums = probs.sum(axis=1)
    if np.abs(sums - 1.0).max() > 1e-6:
        raise ValueError("each basis distribution must sum to 1")
    if projectors is None:
        projectors = mub_projectors(f, phase_k=phase_k, cap=cap)
    return np.einsum("ik,ikab->ab", probs, projectors) - np.eye(N)


def round_trip_check(
    f: GaloisField,
    *,
    seeds: range | list[int] = range(10),
    tol: float = 1e-9,
    phase_k: int = 0,
    cap: int = DEFAULT_DENSE_CAP,
) -> CheckReport:
    """Both tomography paths must reproduce seeded random states within tol."""
    rep = CheckReport(name="tomography_round_trip", passed=True, checked=0)
    projectors = mub_projectors(f, phase_k=phase_k, cap=cap)
    worst_pauli = worst_mub = 0.0
    for seed in seeds:
        rho = random_density(f.N, seed=seed)
        via_pauli = pauli_reconstruct(f, pauli_decompose(f, rho, cap=cap), cap=cap)
        probs = mub_probabilities(f, rho, projectors=projectors)
        via_mub = mub_reconstruct(f, probs, projectors=projectors)
        err_p = float(np.abs(via_pauli - rho).max())
        err_m = float(np.abs(via_mub - rho).max())
        worst_pauli = max(worst_pauli, err_p)
        worst_mub = max(worst_mub, err_m)
        rep.checked += 2
        if err_p > tol:
            rep.record_failure({"seed": seed, "path": "displacement", "err": err_p})
        if err_m > tol:
            rep.record_failure({"seed": seed, "path": "measurement", "err": err_m})
    rep.info["worst_displacement_err"] = worst_pauli
    rep.info["worst_measurement_err"] = worst_mub
    return rep
