"""Shift-and-clock operators over Z_N for composite N, numerically.

The field construction needs prime power dimension.  This module builds
the analogous operator family over the plain residue ring, enumerates
its maximal commuting classes by graph search, and measures how far the
joint eigenspaces are from pairwise unbiasedness.  For prime N it must
reproduce the field pipeline; for composite N it quantifies the
obstruction (overlapping classes, degenerate spectra, biased pairs).

Everything here is floating point; exactness lives in the other modules.
"""

from __future__ import annotations

import itertools
import math

import networkx as nx
import numpy as np

from .report import CheckReport

RING_CAP = 12
COMMUTE_TOL = 1e-10
CLUSTER_TOL = 1e-8


def _check_ring_size(N: int, cap: int = RING_CAP) -> int:
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise ValueError(f"ring size must be an integer >= 2, got {N!r}")
    if N > cap:
        raise ValueError(f"ring size {N} exceeds the scan cap {cap}")
    return N


def ring_weyl_matrix(N: int, j: int, i: int) -> np.ndarray:
    """Dense shift-by-i, clock-power-j operator: entry ((k+i) mod N, k) = omega^((k+i)j)."""
    _check_ring_size(N)
    M = np.zeros((N, N), dtype=complex)
    omega = np.exp(2j * np.pi / N)
    for k in range(N):
        M[(k + i) % N, k] = omega ** (((k + i) * j) % N)
    return M


def ring_weyl_group(N: int) -> list[tuple[int, int]]:
    """All N^2 operator labels (j, i), identity first."""
    _check_ring_size(N)
    return [(j, i) for j in range(N) for i in range(N)]


def commutes_numerically(A: np.ndarray, B: np.ndarray, *, tol: float = COMMUTE_TOL) -> bool:
    return bool(np.abs(A @ B - B @ A).max() <= tol)


def maximal_commuting_classes(
    N: int, *, cap: int = RING_CAP, tol: float = COMMUTE_TOL
) -> list[tuple[tuple[int, int], ...]]:
    """Maximal cliques of the commutation graph on the N^2 - 1 non-identity operators.

    Classes may overlap for composite N; they partition the group only in
    prime dimension.  Output is canonically sorted: members ascending
    within a class, classes by (size, members).
    """
    _check_ring_size(N, cap)
    labels = [lab for lab in ring_weyl_group(N) if lab != (0, 0)]
    mats = {lab: ring_weyl_matrix(N, *lab) for lab in labels}
    G = nx.Graph()
    G.add_nodes_from(labels)
    for a, b in itertools.combinations(labels, 2):
        if commutes_numerically(mats[a], mats[b], tol=tol):
            G.add_edge(a, b)
    cliques = [tuple(sorted(c)) for c in nx.find_cliques(G)]
    return sorted(cliques, key=lambda c: (len(c), c))


def _refine_blocks(blocks: list[np.ndarray], S: np.ndarray) -> list[np.ndarray]:
    # split each orthonormal block by the eigenvalues of S (a normal matrix)
    # restricted to it; Hermitian and anti-Hermitian parts are handled in turn
    out = blocks
    for part in (lambda M: (M + M.conj().T) / 2, lambda M: (M - M.conj().T) / 2j):
        nxt: list[np.ndarray] = []
        for Q in out:
            if Q.shape[1] == 1:
                nxt.append(Q)
                continue
            H = part(Q.conj().T @ S @ Q)
            vals, vecs = np.linalg.eigh(H)
            start = 0
            for idx in range(1, len(vals) + 1):
                if idx == len(vals) or vals[idx] - vals[idx - 1] > CLUSTER_TOL:
                    nxt.append(Q @ vecs[:, start:idx])
                    start = idx
        out = nxt
    return out


def joint_eigenprojectors(
    N: int, members: tuple[tuple[int, int], ...]
) -> tuple[list[np.ndarray], bool]:
    """Joint eigenspace projectors of a commuting class, plus a degeneracy flag.

    Projectors are basis-independent, which keeps the unbiasedness
    measurements below meaningful even when a class fails to single out
    a unique eigenbasis (degenerate joint spectrum, flag True).
    """
    blocks = [np.eye(N, dtype=complex)]
    for lab in members:
        blocks = _refine_blocks(blocks, ring_weyl_matrix(N, *lab))
    projectors = [Q @ Q.conj().T for Q in blocks]
    degenerate = any(Q.shape[1] > 1 for Q in blocks)
    return projectors, degenerate


def _pair_deviation(
    P: list[np.ndarray], Q: list[np.ndarray], N: int
) -> float:
    # unbiased joint spectra satisfy tr(P_a Q_b) = rank(P_a) rank(Q_b) / N
    worst = 0.0
    for Pa in P:
        ra = round(np.trace(Pa).real)
        for Qb in Q:
            rb = round(np.trace(Qb).real)
            overlap = np.trace(Pa @ Qb).real
            worst = max(worst, abs(overlap - ra * rb / N))
    return worst


def eigenbasis_unbiasedness_scan(N: int, *, cap: int = RING_CAP) -> dict:
    """Full scan: classes, degeneracies, pairwise deviations, best (N+1)-subset.

    Returns a JSON-ready dict.  ``best_subset_max_deviation`` is the
    smallest achievable worst-pair deviation over all subsets of N+1
    classes (None when the subset count is unreasonably large); a value
    far above zero certifies that no N+1 of the scanned classes are
    pairwise unbiased.
    """
    _check_ring_size(N, cap)
    classes = maximal_commuting_classes(N, cap=cap)
    projs = []
    degenerate_flags = []
    for members in classes:
        P, deg = joint_eigenprojectors(N, members)
        projs.append(P)
        degenerate_flags.append(deg)
    n = len(classes)
    dev = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            dev[a, b] = dev[b, a] = _pair_deviation(projs[a], projs[b], N)
    pair_rows = [
        {"a": a, "b": b, "max_deviation": float(dev[a, b])}
        for a in range(n)
        for b in range(a + 1, n)
    ]
    want = N + 1
    best_subset = None
    best_val: float | None = None
    if n >= want and math.comb(n, want) <= 100_000:
        for subset in itertools.combinations(range(n), want):
            worst = max(
                (dev[x, y] for x, y in itertools.combinations(subset, 2)), default=0.0
            )
            if best_val is None or worst < best_val:
                best_val, best_subset = worst, list(subset)
    return {
        "N": N,
        "num_classes": n,
        "class_sizes": [len(c) for c in classes],
        "classes": [[list(lab) for lab in c] for c in classes],
        "degenerate_classes": [i for i, d in enumerate(degenerate_flags) if d],
        "pair_deviations": pair_rows,
        "max_pair_deviation": float(dev.max()) if n > 1 else 0.0,
        "best_subset": best_subset,
        "best_subset_max_deviation": best_val,
    }


def prime_class_check(N: int) -> CheckReport:
    """For prime N the scan must reproduce the field picture exactly.

    Exactly N+1 classes of N-1 operators partitioning the group,
    non-degenerate spectra, and every class pair unbiased to 1e-9.
    """
    from .gf import build_field, is_prime
    from .pauli import classes as field_classes

    if not is_prime(N):
        raise ValueError(f"{N} is not prime")
    rep = CheckReport(name=f"prime_ring[N={N}]", passed=True, checked=0)
    scan = eigenbasis_unbiasedness_scan(N)
    rep.checked += 1
    if scan["num_classes"] != N + 1:
        rep.record_failure({"num_classes": scan["num_classes"], "want": N + 1})
    rep.checked += 1
    if scan["class_sizes"] != [N - 1] * (N + 1):
        rep.record_failure({"class_sizes": scan["class_sizes"]})
    rep.checked += 1
    if scan["degenerate_classes"]:
        rep.record_failure({"degenerate_classes": scan["degenerate_classes"]})
    rep.checked += 1
    if scan["max_pair_deviation"] > 1e-9:
        rep.record_failure({"max_pair_deviation": scan["max_pair_deviation"]})
    # same classes as the field pipeline, up to the identity element
    f = build_field(N, 1)
    want_classes = sorted(
        tuple(sorted((op.j, op.i) for op in cls if (op.j, op.i) != (0, 0)))
        for cls in field_classes(f)
    )
    got_classes = sorted(tuple(tuple(lab) for lab in c) for c in scan["classes"])
    rep.checked += 1
    if got_classes != want_classes:
        rep.record_failure({"class_mismatch": True})
    rep.info["scan"] = {k: scan[k] for k in ("num_classes", "class_sizes", "max_pair_deviation")}
    return rep
