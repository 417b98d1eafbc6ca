"""The discrete Weyl-Heisenberg group over GF(p^m).

V operators are stored structurally as an index pair (j, i): j drives the
diagonal character part, i the cyclic shift, and the action on the
computational basis is |k> -> gamma^(d_0((k+i)*j)) |k+i> with all index
arithmetic in the field.  Composition, adjoints, commutation, and traces
are computed exactly from the indices; dense matrices exist only as a
floating cross-check surface.

U operators are V operators renormalized by an exact 2p-th root of unity
so that each of the N+1 commuting classes becomes a true abelian group
(not just a group up to phase).  For odd characteristic the normalizing
phase is gamma^(-(i-1)*l*l / 2).  In characteristic 2 there is no field
division by 2 and the square root of gamma^(-(i-1)*l*l) needs a
determination; see :func:`u_op` for the supported ones.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .cyclo import CycInt, PhaseExponent, phase_sum
from .gf import GaloisField
from .report import CheckReport

DEFAULT_DENSE_CAP = 64

#: determinations of the characteristic-2 square-root phase, see u_op
EVEN_DETERMINATIONS = ("pairs", "chain", "chain0")


@dataclass(frozen=True)
class WeylOperator:
    """Structural V operator: phase index j, shift index i."""

    field: GaloisField = dataclasses.field(compare=False, repr=False)
    j: int
    i: int

    def is_identity(self) -> bool:
        return self.j == 0 and self.i == 0


@dataclass(frozen=True)
class PhasedOp:
    """A Weyl operator times an exact scalar phase."""

    phase: PhaseExponent
    op: WeylOperator


@dataclass(frozen=True)
class UOperator:
    """Phase-normalized class element: U^i_l = zeta^phase * V^((i-1)*l)_l."""

    class_index: int
    element_index: int
    phase: PhaseExponent
    underlying: WeylOperator


def _same_field(a: WeylOperator, b: WeylOperator) -> GaloisField:
    if a.field is not b.field and a.field.descriptor() != b.field.descriptor():
        raise ValueError("operators live over different fields")
    return a.field


def _gamma_exp(f: GaloisField, a: int) -> int:
    # zeta_2p exponent of gamma^(d_0(a))
    return (2 * f.char_exponent(a)) % (2 * f.p)


def v_op(f: GaloisField, j: int, i: int) -> WeylOperator:
    """The V operator with phase index j and shift index i."""
    return WeylOperator(f, f.check_element(j), f.check_element(i))


def compose(a: WeylOperator, b: WeylOperator) -> PhasedOp:
    """Exact product a*b = zeta^t V^(j_a+j_b)_(i_a+i_b)."""
    f = _same_field(a, b)
    t = _gamma_exp(f, f.neg(f.mul(a.i, b.j)))
    return PhasedOp(
        PhaseExponent(t, 2 * f.p),
        WeylOperator(f, f.add(a.j, b.j), f.add(a.i, b.i)),
    )


def adjoint(a: WeylOperator) -> PhasedOp:
    """a^+ = gamma^(-(i*j)) V^(-j)_(-i); also the inverse of a."""
    f = a.field
    t = _gamma_exp(f, f.neg(f.mul(a.i, a.j)))
    return PhasedOp(PhaseExponent(t, 2 * f.p), WeylOperator(f, f.neg(a.j), f.neg(a.i)))


def commutes(a: WeylOperator, b: WeylOperator) -> bool:
    """Exact commutation criterion d_0(i_a * j_b) = d_0(j_a * i_b)."""
    f = _same_field(a, b)
    return f.char_exponent(f.mul(a.i, b.j)) == f.char_exponent(f.mul(a.j, b.i))


def hs_inner(a: WeylOperator, b: WeylOperator) -> CycInt:
    """Exact Hilbert-Schmidt inner product tr(a^+ b).

    Evaluated structurally: the product a^+ b is another phased Weyl
    operator, whose trace is a full character sum (N or 0), so the result
    is N * delta_(i_a,i_b) * delta_(j_a,j_b) -- but computed, not assumed.
    """
    f = _same_field(a, b)
    if f.add(f.neg(a.i), b.i) != 0:
        return CycInt.zero(f.p)
    t = _gamma_exp(f, f.neg(f.mul(a.i, a.j))) + _gamma_exp(f, f.mul(a.i, b.j))
    c = f.add(f.neg(a.j), b.j)
    char_sum = phase_sum(f.p, (_gamma_exp(f, f.mul(q, c)) for q in range(f.N)))
    return CycInt.from_phase(f.p, t) * char_sum


def classes(f: GaloisField) -> list[list[WeylOperator]]:
    """The N+1 commuting classes; class 0 is diagonal, class i is V^((i-1)l)_l."""
    out = [[v_op(f, l, 0) for l in range(f.N)]]
    for i in range(1, f.N + 1):
        e = i - 1
        out.append([v_op(f, f.mul(e, l), l) for l in range(f.N)])
    return out


def _even_sqrt_exponent(f: GaloisField, e: int, l: int, determination: str) -> int:
    # Characteristic 2: choose zeta_4 exponents whose square is the
    # gamma^(-(e*l*l)) required of U^2.  Factor U over the nonzero binary
    # digits of l; each generator 2^n contributes i^(d_0(e*2^n*2^n)), and
    # cross terms between digit positions contribute -1 factors:
    #   pairs:  every ordered digit pair (t < s) contributes d_0(e*2^t*2^s)
    #           (the ordered product of the generators; exact group law)
    #   chain:  only consecutive nonzero digits contribute
    #   chain0: chain, plus the top digit paired with position 0
    digits = [n for n in range(f.m) if (l >> n) & 1]
    beta = lambda a, b: f.char_exponent(f.mul(e, f.mul(1 << a, 1 << b)))
    t = sum(beta(n, n) for n in digits)
    if determination == "pairs":
        t += 2 * sum(beta(digits[x], digits[y]) for x in range(len(digits)) for y in range(x + 1, len(digits)))
    elif determination == "chain":
        t += 2 * sum(beta(digits[x], digits[x + 1]) for x in range(len(digits) - 1))
    elif determination == "chain0":
        t += 2 * sum(beta(digits[x], digits[x + 1]) for x in range(len(digits) - 1))
        if digits:
            t += 2 * beta(digits[-1], 0)
    else:
        raise ValueError(f"unknown determination {determination!r}; expected one of {EVEN_DETERMINATIONS}")
    return t % 4


def u_op(
    f: GaloisField,
    i: int,
    l: int,
    *,
    phase_k: int = 0,
    determination: str = "pairs",
) -> UOperator:
    """Class element U^i_l with its exact normalizing phase.

    Parameters
    ----------
    i : int
        Class index 0..N; class 0 is the diagonal class (V^l_0, no phase
        needed), class i >= 1 holds V^((i-1)*l)_l.
    l : int
        Element index within the class.
    phase_k : int, optional
        Remaining phase freedom: multiplies U^i_l by gamma^(d_0(k*l)).
        Every verification must pass for every choice; the default 0 is
        the library convention.  For p = 2 this sweeps all consistent
        sign choices of the square roots.
    determination : str, optional
        Characteristic-2 square-root determination ("pairs" is the one
        under which the exact group law holds for every m; "chain" and
        "chain0" are retained as rejected readings for regression tests).
    """
    if not 0 <= i <= f.N:
        raise ValueError(f"class index {i} out of range 0..{f.N}")
    l = f.check_element(l)
    phase_k = f.check_element(phase_k)
    if i == 0:
        return UOperator(0, l, PhaseExponent(0, 2 * f.p), v_op(f, l, 0))
    e = i - 1
    underlying = v_op(f, f.mul(e, l), l)
    if f.p == 2:
        t = _even_sqrt_exponent(f, e, l, determination)
    else:
        w = f.div(f.neg(f.mul(e, f.mul(l, l))), 2)
        t = _gamma_exp(f, w)
    t = (t + _gamma_exp(f, f.mul(phase_k, l))) % (2 * f.p)
    return UOperator(i, l, PhaseExponent(t, 2 * f.p), underlying)


def u_compose(a: UOperator, b: UOperator) -> tuple[PhaseExponent, WeylOperator]:
    """Exact product of two class elements as (total phase, structural op)."""
    if a.class_index != b.class_index:
        raise ValueError("class elements from different classes do not compose to a class element")
    comp = compose(a.underlying, b.underlying)
    total = a.phase.combine(b.phase).combine(comp.phase)
    return total, comp.op


def u_group_law_check(
    f: GaloisField,
    i: int,
    *,
    phase_k: int = 0,
    determination: str = "pairs",
) -> CheckReport:
    """Verify U^i_l U^i_l' = U^i_(l+l') with exact phases for all l, l'."""
    ops = [u_op(f, i, l, phase_k=phase_k, determination=determination) for l in range(f.N)]
    rep = CheckReport(name=f"u_group_law[i={i}]", passed=True, checked=0)
    for l in range(f.N):
        for l2 in range(f.N):
            rep.checked += 1
            total, op = u_compose(ops[l], ops[l2])
            target = ops[f.add(l, l2)]
            if op != target.underlying or total != target.phase:
                rep.record_failure(
                    {"l": l, "l2": l2, "got_t": total.t, "want_t": target.phase.t}
                )
    return rep


def u_power_check(f: GaloisField, i: int, *, phase_k: int = 0) -> CheckReport:
    """Verify (U^i_(p^n))^p is exactly the identity for every digit position n."""
    rep = CheckReport(name=f"u_power[i={i}]", passed=True, checked=0)
    for n in range(f.m):
        l = f.p**n
        u = u_op(f, i, l, phase_k=phase_k)
        total, op = u.phase, u.underlying
        for _ in range(f.p - 1):
            comp = compose(op, u.underlying)
            total = total.combine(u.phase).combine(comp.phase)
            op = comp.op
        rep.checked += 1
        if not (op.is_identity() and total.t == 0):
            rep.record_failure({"n": n, "op": (op.j, op.i), "t": total.t})
    return rep


def dense_matrix(op, *, cap: int = DEFAULT_DENSE_CAP) -> np.ndarray:
    """N x N complex matrix of a WeylOperator, PhasedOp, or UOperator."""
    scalar = 1.0 + 0j
    if isinstance(op, PhasedOp):
        scalar, op = op.phase.to_complex(), op.op
    elif isinstance(op, UOperator):
        scalar, op = op.phase.to_complex(), op.underlying
    f = op.field
    if f.N > cap:
        raise ValueError(f"dimension {f.N} exceeds dense cap {cap}")
    M = np.zeros((f.N, f.N), dtype=complex)
    for k in range(f.N):
        row = f.add(k, op.i)
        M[row, k] = scalar * PhaseExponent(_gamma_exp(f, f.mul(row, op.j)), 2 * f.p).to_complex()
    return M


def op_to_json(op) -> dict:
    """JSON shape of an operator: indices plus exact phase as a fraction of 2*pi."""
    if isinstance(op, WeylOperator):
        return {"j": op.j, "i": op.i, "phase_num": 0, "phase_den": 2 * op.field.p}
    if isinstance(op, PhasedOp):
        return {"j": op.op.j, "i": op.op.i, "phase_num": op.phase.t, "phase_den": op.phase.denom}
    if isinstance(op, UOperator):
        return {
            "j": op.underlying.j,
            "i": op.underlying.i,
            "phase_num": op.phase.t,
            "phase_den": op.phase.denom,
        }
    raise TypeError(f"not an operator: {type(op).__name__}")


# ---------------------------------------------------------------------------
# verification sweeps used by the verify pipeline
# ---------------------------------------------------------------------------


def class_structure_check(f: GaloisField) -> CheckReport:
    """Partition and internal-commutativity properties of the N+1 classes."""
    cls = classes(f)
    rep = CheckReport(name="class_structure", passed=True, checked=0)
    seen: dict[tuple[int, int], int] = {}
    for idx, members in enumerate(cls):
        if (members[0].j, members[0].i) != (0, 0):
            rep.record_failure({"class": idx, "missing_identity": True})
        for a in members:
            for b in members:
                rep.checked += 1
                if not commutes(a, b):
                    rep.record_failure({"class": idx, "a": (a.j, a.i), "b": (b.j, b.i)})
        for op in members[1:]:
            key = (op.j, op.i)
            if key in seen:
                rep.record_failure({"duplicate": key, "classes": [seen[key], idx]})
            seen[key] = idx
    if len(seen) != f.N * f.N - 1:
        rep.record_failure({"covered": len(seen), "expected": f.N * f.N - 1})
    rep.info["classes"] = len(cls)
    return rep


def compose_dense_check(f: GaloisField, *, sample: int | None = None, seed: int = 0, cap: int = DEFAULT_DENSE_CAP) -> CheckReport:
    """Cross-validate exact composition against dense matrix products (1e-10)."""
    import random as _random

    rep = CheckReport(name="compose_vs_dense", passed=True, checked=0)
    N = f.N
    dense = {(j, i): dense_matrix(v_op(f, j, i), cap=cap) for j in range(N) for i in range(N)}
    if sample is None:
        pairs = [((j1, i1), (j2, i2)) for j1 in range(N) for i1 in range(N) for j2 in range(N) for i2 in range(N)]
    else:
        rng = _random.Random(seed)
        pairs = [
            ((rng.randrange(N), rng.randrange(N)), (rng.randrange(N), rng.randrange(N)))
            for _ in range(sample)
        ]
    for (j1, i1), (j2, i2) in pairs:
        rep.checked += 1
        res = compose(v_op(f, j1, i1), v_op(f, j2, i2))
        lhs = dense[j1, i1] @ dense[j2, i2]
        rhs = res.phase.to_complex() * dense[res.op.j, res.op.i]
        if np.abs(lhs - rhs).max() > 1e-10:
            rep.record_failure({"a": (j1, i1), "b": (j2, i2)})
    return rep


def commutes_dense_check(f: GaloisField, *, cap: int = DEFAULT_DENSE_CAP) -> CheckReport:
    """Cross-validate the algebraic commutation criterion against matrices."""
    rep = CheckReport(name="commutes_vs_dense", passed=True, checked=0)
    N = f.N
    ops = [(j, i) for j in range(N) for i in range(N)]
    dense = {o: dense_matrix(v_op(f, *o), cap=cap) for o in ops}
    for a in ops:
        for b in ops:
            rep.checked += 1
            alg = commutes(v_op(f, *a), v_op(f, *b))
            num = np.abs(dense[a] @ dense[b] - dense[b] @ dense[a]).max() < 1e-10
            if alg != num:
                rep.record_failure({"a": a, "b": b, "algebraic": alg, "numeric": bool(num)})
    return rep


def hs_orthogonality_check(f: GaloisField) -> CheckReport:
    """tr((V^j_i)^+ V^k_l) = N delta delta, exactly, over all operator pairs."""
    rep = CheckReport(name="hs_orthogonality", passed=True, checked=0)
    N = f.N
    for a_j in range(N):
        for a_i in range(N):
            a = v_op(f, a_j, a_i)
            for b_j in range(N):
                for b_i in range(N):
                    rep.checked += 1
                    got = hs_inner(a, v_op(f, b_j, b_i))
                    want = N if (a_j, a_i) == (b_j, b_i) else 0
                    if got != want:
                        rep.record_failure(
                            {"a": (a_j, a_i), "b": (b_j, b_i), "got": repr(got)}
                        )
    return rep


def u_hermitian_unitary_check(f: GaloisField, *, cap: int = DEFAULT_DENSE_CAP) -> CheckReport:
    """Characteristic 2 only: every U operator is Hermitian and unitary.

    Structural for all N (conjugate-phase identity), dense below the cap.
    """
    if f.p != 2:
        raise ValueError("hermiticity of U operators is a characteristic-2 statement")
    rep = CheckReport(name="u_hermitian_unitary", passed=True, checked=0)
    for i in range(f.N + 1):
        for l in range(f.N):
            rep.checked += 1
            u = u_op(f, i, l)
            adj = adjoint(u.underlying)
            t_dagger = (-u.phase.t + adj.phase.t) % 4
            if adj.op != u.underlying or t_dagger != u.phase.t:
                rep.record_failure({"i": i, "l": l, "t": u.phase.t, "t_dagger": t_dagger})
            elif f.N <= cap:
                M = dense_matrix(u, cap=cap)
                if np.abs(M - M.conj().T).max() > 1e-10 or np.abs(M @ M - np.eye(f.N)).max() > 1e-10:
                    rep.record_failure({"i": i, "l": l, "dense": True})
    return rep
