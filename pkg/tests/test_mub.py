"""Tests for the mutually unbiased basis construction and its verifiers."""

import json

import numpy as np
import pytest

from mubkit.cyclo import CycInt
from mubkit.gf import build_field
from mubkit.mub import (
    MubState,
    computational_basis,
    dual_basis,
    family_to_json,
    inner,
    mub_family,
    mub_state,
    projector_from_u,
    state_vector,
    unbiasedness_csv,
    verify_basis_covariance,
    verify_eigenstates,
    verify_unbiasedness,
    wf_equivalence_check,
    with_injected_phase_error,
    wootters_fields_basis,
)
from mubkit.pauli import dense_matrix, u_op


def field(p, m=1):
    return build_field(p, m)


# ---------------------------------------------------------------------------
# single states
# ---------------------------------------------------------------------------


def test_dual_basis_qubit_is_hadamard():
    f = field(2)
    d = dual_basis(f)
    assert d[0].exponents == (0, 0)
    assert d[1].exponents == (0, 2)
    H = np.column_stack([state_vector(s) for s in d])
    want = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.abs(H - want).max() < 1e-12


def test_dual_basis_qutrit_matches_inverse_dft():
    f = field(3)
    F = np.column_stack([state_vector(s) for s in dual_basis(f)])
    k, j = np.meshgrid(np.arange(3), np.arange(3), indexing="ij")
    want = np.exp(-2j * np.pi * k * j / 3) / np.sqrt(3)
    assert np.abs(F - want).max() < 1e-12


@pytest.mark.parametrize("p,m", [(2, 1), (2, 2), (3, 1), (3, 2), (2, 3)])
def test_basis_one_equals_dual_basis(p, m):
    f = field(p, m)
    d = dual_basis(f)
    for k in range(f.N):
        assert mub_state(f, 1, k).exponents == d[k].exponents


def test_qubit_family_is_z_x_y():
    f = field(2)
    fam = mub_family(f)
    assert [s.kind for s in fam.bases[0]] == ["delta", "delta"]
    # basis 2: eigenvectors of i*V^1_1 = -Y, eigenvalue label k -> (-1)^k
    assert fam.bases[2][0].exponents == (0, 3)  # (1, -i)/sqrt(2)
    assert fam.bases[2][1].exponents == (0, 1)  # (1, +i)/sqrt(2)
    U = dense_matrix(u_op(f, 2, 1))
    for k in range(2):
        v = state_vector(fam.bases[2][k])
        lam = 1.0 if k == 0 else -1.0
        assert np.abs(U @ v - lam * v).max() < 1e-12


def test_state_exponents_stay_canonical():
    for p, m in [(2, 2), (3, 2), (5, 1), (2, 3)]:
        f = field(p, m)
        fam = mub_family(f)
        for basis in fam.bases[1:]:
            for s in basis:
                assert all(0 <= t < 2 * p for t in s.exponents)
                assert s.exponents[0] == 0  # position q=0 is always unrotated


def test_state_validation_errors():
    f = field(2)
    with pytest.raises(ValueError):
        MubState(f, 0, 0, "delta", (0, 0))
    with pytest.raises(ValueError):
        MubState(f, 1, 0, "phase", (0,))
    with pytest.raises(ValueError):
        MubState(f, 1, 0, "fourier", (0, 0))
    with pytest.raises(ValueError):
        mub_state(f, 0, 0)  # 0 is the computational basis, built directly
    with pytest.raises(ValueError):
        mub_state(f, 3, 0)


# ---------------------------------------------------------------------------
# exact inner products
# ---------------------------------------------------------------------------


def test_inner_scales():
    f = field(3)
    fam = mub_family(f)
    comp, b1, b2 = fam.bases[0], fam.bases[1], fam.bases[2]
    # delta/delta carries scale N
    assert inner(comp[0], comp[0]) == 3
    assert inner(comp[0], comp[1]) == 0
    # same phase basis: N^2 on the diagonal, 0 off it
    assert inner(b1[2], b1[2]).abs_sq() == 9
    assert inner(b1[0], b1[2]).is_zero()
    # distinct phase bases: abs_sq exactly N
    assert inner(b1[1], b2[0]).abs_sq() == 3
    # mixed delta/phase carries scale sqrt(N): a bare root of unity
    z = inner(comp[2], b2[1])
    assert z.abs_sq() == 1


def test_inner_conjugate_symmetry_and_float_agreement():
    f = field(3, 2)
    fam = mub_family(f)
    rng = np.random.default_rng(7)
    for _ in range(60):
        i, j = rng.integers(0, f.N + 1, size=2)
        k, k2 = rng.integers(0, f.N, size=2)
        a, b = fam.bases[i][k], fam.bases[j][k2]
        z = inner(a, b)
        assert z.conjugate() == inner(b, a)
        scale = f.N if (a.kind == b.kind) else np.sqrt(f.N)
        want = scale * np.vdot(state_vector(a), state_vector(b))
        assert abs(z.to_complex() - want) < 1e-9


def test_inner_rejects_mismatched_fields():
    a = mub_state(field(2, 2), 1, 0)
    b = mub_state(field(5), 1, 0)
    with pytest.raises(ValueError):
        inner(a, b)


# ---------------------------------------------------------------------------
# unbiasedness sweeps
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (5, 1), (2, 3), (3, 2)])
def test_unbiasedness_passes(p, m):
    f = field(p, m)
    rep = verify_unbiasedness(mub_family(f))
    assert rep.passed, rep.failures
    n_pairs = 1 + f.N + f.N * (f.N + 1) // 2
    assert len(rep.info["pairs"]) == n_pairs
    assert rep.checked == n_pairs * f.N * f.N


@pytest.mark.parametrize("p,m", [(2, 2), (3, 1)])
def test_vectorized_sweep_matches_direct_cyclotomic_arithmetic(p, m):
    # the fast integer path must agree with literal CycInt inner products
    f = field(p, m)
    fam = mub_family(f)
    for i in range(1, f.N + 1):
        for j in range(i, f.N + 1):
            for k in range(f.N):
                for k2 in range(f.N):
                    z = inner(fam.bases[i][k], fam.bases[j][k2]).abs_sq()
                    if i == j:
                        assert z == (f.N * f.N if k == k2 else 0)
                    else:
                        assert z == f.N


def test_unbiasedness_rejects_injected_error():
    f = field(2, 2)
    bad = with_injected_phase_error(mub_family(f))
    rep = verify_unbiasedness(bad)
    assert not rep.passed
    assert any(row["violations"] for row in rep.info["pairs"])


def test_unbiasedness_csv_shape():
    f = field(3)
    rep = verify_unbiasedness(mub_family(f))
    text = unbiasedness_csv(rep)
    lines = text.strip().split("\n")
    assert lines[0] == "basis_i,basis_j,pairs_checked,violations"
    assert len(lines) == 1 + len(rep.info["pairs"])
    assert all(line.endswith(",0") for line in lines[1:])


# ---------------------------------------------------------------------------
# eigenstate property
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2)])
def test_eigenstates_exact_and_dense(p, m):
    f = field(p, m)
    fam = mub_family(f)
    rep = verify_eigenstates(f, fam, dense_cap=16)
    assert rep.passed, rep.failures
    # N*N class-0 pairs + N^3 structural (i, l, k) triples + (N+1)*N dense resolutions
    assert rep.checked == f.N * f.N + f.N**3 + (f.N + 1) * f.N


@pytest.mark.parametrize("phase_k", [0, 1, 2, 3])
def test_eigenstates_hold_for_every_phase_choice(phase_k):
    f = field(2, 2)
    fam = mub_family(f, phase_k=phase_k)
    assert verify_eigenstates(f, fam, dense_cap=4).passed


def test_phase_choice_relabels_states():
    # the phase_k family is the same state set with labels shifted by phase_k
    f = field(3, 2)
    kappa = 5
    fam0 = mub_family(f)
    famk = mub_family(f, phase_k=kappa)
    for i in range(1, f.N + 1):
        for k in range(f.N):
            assert famk.bases[i][k].exponents == fam0.bases[i][f.sub(k, kappa)].exponents


def test_eigenstates_reject_injected_error():
    f = field(3)
    bad = with_injected_phase_error(mub_family(f))
    assert not verify_eigenstates(f, bad, dense_cap=0).passed


# ---------------------------------------------------------------------------
# projectors
# ---------------------------------------------------------------------------


def test_projector_matches_outer_product():
    for p, m in [(2, 1), (3, 1), (2, 2)]:
        f = field(p, m)
        fam = mub_family(f)
        for i in range(f.N + 1):
            for k in range(f.N):
                P = projector_from_u(f, i, k)
                v = state_vector(fam.bases[i][k])
                assert np.abs(P - np.outer(v, v.conj())).max() < 1e-10


def test_projector_completeness_and_qubit_value():
    f = field(2)
    for i in range(3):
        total = sum(projector_from_u(f, i, k) for k in range(2))
        assert np.abs(total - np.eye(2)).max() < 1e-12
    P = projector_from_u(f, 2, 0)
    want = np.array([[0.5, 0.5j], [-0.5j, 0.5]])  # (I - Y)/2
    assert np.abs(P - want).max() < 1e-12


def test_projector_errors():
    f = field(2)
    with pytest.raises(ValueError):
        projector_from_u(f, 3, 0)
    with pytest.raises(ValueError):
        projector_from_u(field(2, 5), 1, 0, cap=16)


# ---------------------------------------------------------------------------
# trace-form cross-validation and covariance
# ---------------------------------------------------------------------------


def test_trace_form_states_are_unit_phase_vectors():
    f = field(3, 2)
    s = wootters_fields_basis(f, 4, 7)
    assert len(s.exponents) == 9
    assert all(t % 2 == 0 for t in s.exponents)  # only gamma powers appear


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (3, 2), (3, 3)])
def test_trace_form_equivalence(p, m):
    f = field(p, m)
    rep = wf_equivalence_check(f)
    assert rep.passed, rep.failures
    assert len(rep.info["basis_map"]) == f.N
    assert sorted(rep.info["basis_map"].values()) == list(range(f.N))


def test_trace_form_rejects_even_characteristic():
    with pytest.raises(ValueError):
        wootters_fields_basis(field(2, 2), 1, 0)
    with pytest.raises(ValueError):
        wf_equivalence_check(field(2, 2))


@pytest.mark.parametrize("p,m", [(2, 1), (3, 1), (2, 2), (2, 3)])
def test_basis_covariance(p, m):
    f = field(p, m)
    fam = mub_family(f)
    for i in (1, f.N):
        rep = verify_basis_covariance(f, fam, i)
        assert rep.passed, rep.failures
        assert rep.checked == f.N * f.N
        assert isinstance(rep.info["matches_reference_map"], bool)


def test_basis_covariance_errors():
    f = field(2, 2)
    fam = mub_family(f)
    with pytest.raises(ValueError):
        verify_basis_covariance(f, fam, 0)
    with pytest.raises(ValueError):
        verify_basis_covariance(f, fam, 1, cap=2)


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def test_family_json_schema_and_determinism():
    f = field(2, 2)
    doc = family_to_json(mub_family(f))
    assert doc["N"] == 4 and doc["p"] == 2 and doc["m"] == 2
    assert doc["phase_denominator"] == 4
    assert len(doc["bases"]) == 5
    assert doc["bases"][0]["states"][0] == {"k": 0, "kind": "delta", "exponents": None}
    assert doc["bases"][2]["states"][1]["kind"] == "phase"
    a = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    b = json.dumps(family_to_json(mub_family(f)), sort_keys=True, separators=(",", ":"))
    assert a == b


def test_computational_basis_shape():
    comp = computational_basis(field(5))
    assert len(comp) == 5
    assert all(s.exponents is None for s in comp)
    v = state_vector(comp[3])
    assert v[3] == 1.0 and np.abs(v).sum() == 1.0
