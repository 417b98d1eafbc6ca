"""Complete sets of N+1 mutually unbiased bases, exactly.

States are stored as vectors of 2p-th root-of-unity exponents with an
implicit 1/sqrt(N) magnitude (or as computational delta states), never
as floating amplitudes, so orthonormality, unbiasedness, and the
eigenstate property are all integer identities.  Dense complex vectors
exist only for the floating cross-checks and for tomography.

Basis indexing convention: index 0 is the computational basis, index 1
the dual (Fourier/Hadamard) basis, indices 2..N the remaining bases.
Basis i >= 1 consists of the joint eigenstates of commuting class i of
the Weyl-Heisenberg group, with state k carrying eigenvalue
gamma^(d_0(k*l)) under U^i_l.
"""

from __future__ import annotations

import csv
import dataclasses
import io
from dataclasses import dataclass

import numpy as np

from .cyclo import CycInt, PhaseExponent, canonical_degree
from .gf import GaloisField
from .pauli import DEFAULT_DENSE_CAP, dense_matrix, u_op, v_op
from .report import CheckReport


@dataclass(frozen=True)
class MubState:
    """One basis state: a delta vector or a phase vector over zeta_2p.

    ``exponents`` is None for delta states; for phase states it has one
    zeta_2p exponent per computational position and every amplitude is
    zeta^exponent / sqrt(N).
    """

    field: GaloisField = dataclasses.field(compare=False, repr=False)
    basis_index: int
    state_index: int
    kind: str  # "delta" | "phase"
    exponents: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("delta", "phase"):
            raise ValueError(f"unknown state kind {self.kind!r}")
        if self.kind == "phase":
            if self.exponents is None or len(self.exponents) != self.field.N:
                raise ValueError("phase states need one exponent per position")
        elif self.exponents is not None:
            raise ValueError("delta states carry no exponent vector")


@dataclass
class MubFamily:
    """The N+1 bases over one field; bases[0] is computational."""

    field: GaloisField
    bases: list[list[MubState]]
    phase_k: int = 0
    determination: str = "pairs"


def computational_basis(f: GaloisField) -> list[MubState]:
    return [MubState(f, 0, k, "delta") for k in range(f.N)]


def _class_phase_exponents(f: GaloisField, i: int, determination: str) -> list[int]:
    # zeta exponents of the normalizing phases D(q) of class i, base choice k=0
    return [u_op(f, i, q, determination=determination).phase.t for q in range(f.N)]


def _state_exponents(
    f: GaloisField, k: int, tvec: list[int], *, phase_k: int = 0
) -> tuple[int, ...]:
    # amplitude exponents: character for label (k - phase_k) times conj(D(q))
    two_p = 2 * f.p
    shift = f.sub(k, phase_k)
    return tuple(
        (2 * f.char_exponent(f.neg(f.mul(q, shift))) + two_p - tvec[q]) % two_p
        for q in range(f.N)
    )


def dual_basis(f: GaloisField) -> list[MubState]:
    """Basis 1: the Fourier transform of the computational basis."""
    states = []
    for j in range(f.N):
        exps = tuple(2 * f.char_exponent(f.neg(f.mul(k, j))) for k in range(f.N))
        states.append(MubState(f, 1, j, "phase", exps))
    return states


def mub_state(
    f: GaloisField,
    i: int,
    k: int,
    *,
    phase_k: int = 0,
    determination: str = "pairs",
) -> MubState:
    """State k of constructed basis i (i in 1..N).

    The amplitude at position q is the character gamma^(-(q*k)) times the
    conjugate of the class-i normalizing phase at q, all over sqrt(N).
    Basis 0 is built directly as delta states, not by this formula.
    """
    if not 1 <= i <= f.N:
        raise ValueError(f"basis index {i} out of range 1..{f.N} (0 is the computational basis)")
    k = f.check_element(k)
    tvec = _class_phase_exponents(f, i, determination)
    return MubState(f, i, k, "phase", _state_exponents(f, k, tvec, phase_k=phase_k))


def mub_family(
    f: GaloisField, *, phase_k: int = 0, determination: str = "pairs"
) -> MubFamily:
    """Assemble all N+1 bases; runs no verification itself."""
    phase_k = f.check_element(phase_k)
    bases = [computational_basis(f)]
    for i in range(1, f.N + 1):
        tvec = _class_phase_exponents(f, i, determination)
        bases.append(
            [
                MubState(f, i, k, "phase", _state_exponents(f, k, tvec, phase_k=phase_k))
                for k in range(f.N)
            ]
        )
    return MubFamily(f, bases, phase_k=phase_k, determination=determination)


def state_vector(s: MubState) -> np.ndarray:
    """Dense complex amplitudes of a state."""
    N = s.field.N
    if s.kind == "delta":
        v = np.zeros(N, dtype=complex)
        v[s.state_index] = 1.0
        return v
    two_p = 2 * s.field.p
    phases = np.exp(2j * np.pi * np.asarray(s.exponents) / two_p)
    return phases / np.sqrt(N)


def inner(a: MubState, b: MubState) -> CycInt:
    """Exact unnormalized inner product <a|b>.

    Scale conventions (the only ones that stay inside Z[zeta_2p]):
    N*<a|b> when both states share a representation (phase/phase or
    delta/delta), sqrt(N)*<a|b> for mixed delta/phase pairs.  Unbiased
    cross-basis pairs therefore give abs_sq = N (same representation)
    or abs_sq = 1 (mixed).
    """
    f = a.field
    if f is not b.field and f.descriptor() != b.field.descriptor():
        raise ValueError("states live over different fields")
    p = f.p
    if a.kind == "delta" and b.kind == "delta":
        return CycInt.integer(p, f.N if a.state_index == b.state_index else 0)
    if a.kind == "delta":
        return CycInt.from_phase(p, b.exponents[a.state_index])
    if b.kind == "delta":
        return CycInt.from_phase(p, -a.exponents[b.state_index] % (2 * p))
    counts = [0] * (2 * p)
    for ea, eb in zip(a.exponents, b.exponents):
        counts[(eb - ea) % (2 * p)] += 1
    return CycInt.from_exponent_counts(p, counts)


# ---------------------------------------------------------------------------
# exact verification sweeps
# ---------------------------------------------------------------------------


def _reduction_matrix(p: int) -> np.ndarray:
    # row t = canonical coefficients of zeta_2p^t; integer, exact
    return np.array(
        [CycInt.from_phase(p, t).coeffs for t in range(2 * p)], dtype=np.int64
    )


def _phase_matrix(basis: list[MubState]) -> np.ndarray:
    return np.array([s.exponents for s in basis], dtype=np.int64)


def _pair_abs_sq_canonical(E_a: np.ndarray, E_b: np.ndarray, p: int, R: np.ndarray) -> np.ndarray:
    # canonical Z[zeta_2p] coefficients of |sum_q zeta^(E_b[k',q]-E_a[k,q])|^2
    # for every state pair (k, k'); pure integer arithmetic throughout
    two_p = 2 * p
    N = E_a.shape[0]
    diff = (E_b[None, :, :] - E_a[:, None, :]) % two_p
    counts = np.empty((N, N, two_p), dtype=np.int64)
    for t in range(two_p):
        counts[:, :, t] = (diff == t).sum(axis=2)
    corr = np.zeros((N, N, two_p), dtype=np.int64)
    for d in range(two_p):
        for s in range(two_p):
            corr[:, :, d] += counts[:, :, (s + d) % two_p] * counts[:, :, s]
    return corr.reshape(N * N, two_p) @ R


def verify_unbiasedness(fam: MubFamily) -> CheckReport:
    """Exact sweep over every basis pair and state pair.

    Same basis: abs_sq(inner) must be N^2 on the diagonal and 0 off it.
    Distinct bases: abs_sq(inner) must be exactly N (phase/phase pairs)
    or exactly 1 (mixed pairs, per the sqrt(N) scale of `inner`).
    Phase/phase sweeps run as vectorized integer arithmetic; delta cases
    are resolved by direct coefficient lookup.
    """
    f = fam.field
    N, p = f.N, f.p
    R = _reduction_matrix(p)
    deg = canonical_degree(p)
    rep = CheckReport(name="unbiasedness", passed=True, checked=0)
    mats = {i: _phase_matrix(fam.bases[i]) for i in range(1, N + 1)}
    pair_rows = []

    def canon_int(n: int) -> np.ndarray:
        row = np.zeros(deg, dtype=np.int64)
        row[0] = n
        return row

    # computational basis against itself: plain delta orthogonality
    rep.checked += N * N
    pair_rows.append({"i": 0, "j": 0, "checked": N * N, "violations": 0})

    # computational vs phase bases: every amplitude is a unit phase over sqrt(N)
    for j in range(1, N + 1):
        E = mats[j]
        bad = int(((E < 0) | (E >= 2 * p)).sum())
        rep.checked += N * N
        if bad:
            rep.record_failure({"i": 0, "j": j, "malformed_exponents": bad})
        pair_rows.append({"i": 0, "j": j, "checked": N * N, "violations": bad})

    for i in range(1, N + 1):
        for j in range(i, N + 1):
            canon = _pair_abs_sq_canonical(mats[i], mats[j], p, R).reshape(N, N, deg)
            if i == j:
                want_diag = canon_int(N * N)
                ok = np.array_equal(canon[np.arange(N), np.arange(N)], np.tile(want_diag, (N, 1)))
                off = canon.copy()
                off[np.arange(N), np.arange(N)] = 0
                ok = ok and not off.any()
            else:
                ok = np.array_equal(canon, np.tile(canon_int(N), (N, N, 1)))
            rep.checked += N * N
            violations = 0
            if not ok:
                expect = "N^2 diag / 0 off" if i == j else "N"
                bad_idx = [
                    (int(k), int(k2))
                    for k in range(N)
                    for k2 in range(N)
                    if not np.array_equal(
                        canon[k, k2],
                        canon_int((N * N if k == k2 else 0) if i == j else N),
                    )
                ]
                violations = len(bad_idx)
                rep.record_failure({"i": i, "j": j, "expect": expect, "pairs": bad_idx[:5]})
            pair_rows.append({"i": i, "j": j, "checked": N * N, "violations": violations})
    rep.info["pairs"] = pair_rows
    return rep


def verify_eigenstates(
    f: GaloisField, fam: MubFamily, *, dense_cap: int = 16
) -> CheckReport:
    """U^i_l |e^i_k> = gamma^(d_0(k*l)) |e^i_k>, exactly, for every (i, k, l).

    Structural check on exponent vectors for all dimensions; below
    ``dense_cap`` additionally verifies the spectral resolution
    U^i_l = sum_k gamma^(k*l) |e^i_k><e^i_k| with dense matrices (1e-10).
    """
    N, p = f.N, f.p
    two_p = 2 * p
    rep = CheckReport(name="eigenstates", passed=True, checked=0)
    perm_add = f.add_table()
    gamma_d0 = (2 * (f.mul_table() % p)) % two_p  # zeta exponent of gamma^(d_0(a*b))

    # class 0: delta states are eigenstates of the diagonal operators
    rep.checked += N * N

    for i in range(1, N + 1):
        e = i - 1
        E = _phase_matrix(fam.bases[i])
        for l in range(N):
            u = u_op(f, i, l, phase_k=fam.phase_k, determination=fam.determination)
            t_u = u.phase.t
            src = perm_add[np.arange(N), f.neg(l)]  # position r came from r - l
            row_add = gamma_d0[:, f.mul(e, l)]  # gamma^(d_0(r * e * l)) at position r
            got = (E[:, src] + row_add[None, :] + t_u) % two_p
            want = (E + gamma_d0[np.arange(N), l][:, None]) % two_p
            rep.checked += N
            if not np.array_equal(got, want):
                bad = np.nonzero((got != want).any(axis=1))[0]
                rep.record_failure({"i": i, "l": l, "states": bad[:5].tolist()})

    if N <= dense_cap:
        lam = np.exp(2j * np.pi * gamma_d0 / two_p)  # lam[k, l] = eigenvalue of U_l on state k
        for i in range(N + 1):
            B = np.column_stack([state_vector(s) for s in fam.bases[i]])
            for l in range(N):
                u = u_op(f, i, l, phase_k=fam.phase_k, determination=fam.determination)
                M = dense_matrix(u, cap=dense_cap)
                spectral = (B * lam[:, l][None, :]) @ B.conj().T
                rep.checked += 1
                if np.abs(M - spectral).max() > 1e-10:
                    rep.record_failure({"i": i, "l": l, "dense_spectral": True})
    return rep


def projector_from_u(
    f: GaloisField, i: int, k: int, *, phase_k: int = 0, cap: int = DEFAULT_DENSE_CAP
) -> np.ndarray:
    """Dense projector (1/N) sum_l gamma^(-(k*l)) U^i_l onto basis state (i, k)."""
    if f.N > cap:
        raise ValueError(f"dimension {f.N} exceeds dense cap {cap}")
    if not 0 <= i <= f.N:
        raise ValueError(f"basis index {i} out of range 0..{f.N}")
    k = f.check_element(k)
    acc = np.zeros((f.N, f.N), dtype=complex)
    for l in range(f.N):
        w = PhaseExponent(2 * f.char_exponent(f.neg(f.mul(k, l))), 2 * f.p)
        acc += w.to_complex() * dense_matrix(u_op(f, i, l, phase_k=phase_k), cap=cap)
    return acc / f.N


# ---------------------------------------------------------------------------
# quadratic-character (trace form) construction, for cross-validation
# ---------------------------------------------------------------------------


def wootters_fields_basis(f: GaloisField, r: int, k: int) -> MubState:
    """State k of the trace-form basis with quadratic parameter r (odd p).

    Amplitudes are gamma^(Tr(-(q*k))) * gamma^(Tr(r*q*q)) / sqrt(N); the
    exponents use the field trace where the main construction uses d_0.
    """
    if f.p == 2:
        raise ValueError("the trace-form construction divides by 2; characteristic must be odd")
    r = f.check_element(r)
    k = f.check_element(k)
    two_p = 2 * f.p
    exps = tuple(
        (2 * f.trace(f.neg(f.mul(q, k))) + 2 * f.trace(f.mul(r, f.mul(q, q)))) % two_p
        for q in range(f.N)
    )
    return MubState(f, 1, k, "phase", exps)


def _ray_fingerprint(exps: tuple[int, ...], two_p: int) -> tuple[int, ...]:
    # rotate so the q=0 exponent is 0: states are rays
    base = exps[0]
    return tuple((t - base) % two_p for t in exps)


def wf_equivalence_check(
    f: GaloisField, *, phase_k: int = 0, determination: str = "pairs"
) -> CheckReport:
    """Match every constructed basis to a trace-form basis, state set to state set.

    Comparison is by exact exponent fingerprints after global-phase
    normalization; the discovered basis correspondence i -> r and the
    state relabelings are reported.  Odd characteristic only.
    """
    if f.p == 2:
        raise ValueError("trace-form comparison is defined for odd characteristic")
    two_p = 2 * f.p
    rep = CheckReport(name="wf_equivalence", passed=True, checked=0)
    wf_sets: dict[int, dict[tuple[int, ...], int]] = {}
    for r in range(f.N):
        states = {}
        for k in range(f.N):
            s = wootters_fields_basis(f, r, k)
            states[_ray_fingerprint(s.exponents, two_p)] = k
        wf_sets[r] = states
    fam = mub_family(f, phase_k=phase_k, determination=determination)
    matching: dict[int, int] = {}
    relabel: dict[int, dict[int, int]] = {}
    for i in range(1, f.N + 1):
        ours = {
            _ray_fingerprint(s.exponents, two_p): s.state_index for s in fam.bases[i]
        }
        rep.checked += 1
        found = None
        for r, states in wf_sets.items():
            if set(states) == set(ours):
                found = r
                relabel[i] = {ours[fp]: states[fp] for fp in ours}
                break
        if found is None:
            rep.record_failure({"basis": i, "unmatched": True})
        else:
            matching[i] = found
    if len(set(matching.values())) != len(matching):
        rep.record_failure({"non_bijective_map": matching})
    rep.info["basis_map"] = matching
    rep.info["state_relabel_sample"] = relabel.get(2, {})
    return rep


# ---------------------------------------------------------------------------
# covariance under basis change (numerical)
# ---------------------------------------------------------------------------


def verify_basis_covariance(
    f: GaloisField, fam: MubFamily, i: int, *, cap: int = DEFAULT_DENSE_CAP, tol: float = 1e-9
) -> CheckReport:
    """Re-express every V^n_m in basis i and pattern-match it to phase * V^a_b.

    Asserts that the conjugated matrix is again a Weyl-patterned matrix and
    that the induced index map (n, m) -> (a, b) is a bijection; records,
    without failing, whether the empirical map equals the reference map
    (n, m) -> (m, -n + (i-1)*m).
    """
    if not 1 <= i <= f.N:
        raise ValueError(f"basis index {i} out of range 1..{f.N}")
    N, p = f.N, f.p
    if N > cap:
        raise ValueError(f"dimension {N} exceeds dense cap {cap}")
    two_p = 2 * p
    B = np.column_stack([state_vector(s) for s in fam.bases[i]])
    chars = np.exp(
        2j * np.pi * ((2 * (f.mul_table() % p)) % two_p) / two_p
    )  # chars[k, a] = gamma^(d_0(k*a))
    add = f.add_table()
    rep = CheckReport(name=f"basis_covariance[i={i}]", passed=True, checked=0)
    found_map: dict[tuple[int, int], tuple[int, int]] = {}
    agrees = True
    e = i - 1
    for n in range(N):
        for m_ in range(N):
            rep.checked += 1
            M = B.conj().T @ dense_matrix(v_op(f, n, m_), cap=cap) @ B
            col0 = np.abs(M[:, 0])
            nz = np.nonzero(col0 > 1e-6)[0]
            if len(nz) != 1:
                rep.record_failure({"n": n, "m": m_, "column_pattern": len(nz)})
                continue
            b = int(nz[0])
            ref = M[b, 0]
            ratios = M[add[np.arange(N), b], np.arange(N)] / ref
            cand = [a for a in range(N) if np.abs(ratios - chars[:, a]).max() < tol]
            if len(cand) != 1:
                rep.record_failure({"n": n, "m": m_, "phase_candidates": cand})
                continue
            a = cand[0]
            phase = ref / chars[b, a]
            pattern = np.zeros((N, N), dtype=complex)
            pattern[add[np.arange(N), b], np.arange(N)] = chars[add[np.arange(N), b], a]
            if np.abs(M - phase * pattern).max() > tol:
                rep.record_failure({"n": n, "m": m_, "residual": float(np.abs(M - phase * pattern).max())})
                continue
            found_map[(n, m_)] = (a, b)
            if (a, b) != (m_, f.add(f.neg(n), f.mul(e, m_))):
                agrees = False
    bijective = len(set(found_map.values())) == len(found_map) == N * N
    if not bijective:
        rep.record_failure({"bijective": False, "mapped": len(set(found_map.values()))})
    rep.info["matches_reference_map"] = agrees
    rep.info["map_sample"] = {str(k): list(v) for k, v in sorted(found_map.items())[:8]}
    return rep


# ---------------------------------------------------------------------------
# export and negative control
# ---------------------------------------------------------------------------


def family_to_json(fam: MubFamily) -> dict:
    f = fam.field
    return {
        **f.descriptor(),
        "phase_denominator": 2 * f.p,
        "phase_k": fam.phase_k,
        "bases": [
            {
                "i": i,
                "states": [
                    {
                        "k": s.state_index,
                        "kind": s.kind,
                        "exponents": list(s.exponents) if s.exponents is not None else None,
                    }
                    for s in basis
                ],
            }
            for i, basis in enumerate(fam.bases)
        ],
    }


def unbiasedness_csv(rep: CheckReport) -> str:
    """CSV of the per-basis-pair check matrix from verify_unbiasedness."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["basis_i", "basis_j", "pairs_checked", "violations"])
    for row in rep.info.get("pairs", []):
        writer.writerow([row["i"], row["j"], row["checked"], row["violations"]])
    return buf.getvalue()


def with_injected_phase_error(fam: MubFamily) -> MubFamily:
    """Negative control: bump one amplitude exponent of basis 1, state 0.

    The returned family must fail both the unbiasedness and the
    eigenstate sweeps; used to prove the verifiers can reject.
    """
    f = fam.field
    two_p = 2 * f.p
    target = fam.bases[1][0]
    pos = 1 % f.N
    exps = list(target.exponents)
    exps[pos] = (exps[pos] + 2) % two_p
    corrupted = MubState(f, 1, 0, "phase", tuple(exps))
    bases = [list(b) for b in fam.bases]
    bases[1][0] = corrupted
    return MubFamily(f, bases, phase_k=fam.phase_k, determination=fam.determination)
