"""Pure request -> response functions shared by the HTTP app and the CLI.

Every handler raises ValueError for configs that cannot be computed
(bad dimension, cap exceeded, wrong matrix size); callers translate
that into HTTP 422 or exit code 2.  A *failed verification* is not an
error: it comes back as passed=False in a 200 response.
"""

from __future__ import annotations

import os

import numpy as np

from ..gf import GaloisField, build_field, field_tables, verify_field_axioms
from ..mub import (
    mub_family,
    verify_basis_covariance,
    verify_eigenstates,
    verify_unbiasedness,
    wf_equivalence_check,
    with_injected_phase_error,
)
from ..mub import family_to_json
from ..pauli import (
    class_structure_check,
    hs_orthogonality_check,
    u_group_law_check,
    u_power_check,
)
from ..report import CheckReport
from ..ringlab import eigenbasis_unbiasedness_scan
from ..tomo import (
    check_density,
    mub_probabilities,
    mub_projectors,
    mub_reconstruct,
    pauli_decompose,
    pauli_reconstruct,
    round_trip_check,
)
from .models import (
    FamilyResponse,
    FieldRequest,
    FieldResponse,
    MatrixJSON,
    MubsRequest,
    ReportModel,
    RingRequest,
    RingResponse,
    TomoRequest,
    TomoResponse,
    VerifyRequest,
    VerifyResponse,
)

ENV_DENSE_CAP = "MUBKIT_DENSE_CAP"
HS_SWEEP_CAP = 32


def default_dense_cap() -> int:
    raw = os.environ.get(ENV_DENSE_CAP)
    if raw is None:
        return 16
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_DENSE_CAP} must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise ValueError(f"{ENV_DENSE_CAP} must be nonnegative, got {cap}")
    return cap


def _field(p: int, m: int) -> GaloisField:
    return build_field(p, m)


def handle_field(req: FieldRequest) -> FieldResponse:
    f = _field(req.p, req.m)
    return FieldResponse(**field_tables(f))


def handle_field_text(req: FieldRequest) -> str:
    from ..gf import export_tables

    return export_tables(_field(req.p, req.m), req.format)


def handle_mubs(req: MubsRequest) -> FamilyResponse:
    f = _field(req.p, req.m)
    fam = mub_family(f, phase_k=f.check_element(req.phase_k))
    return FamilyResponse(**family_to_json(fam))


def _aggregate(name: str, reports: list[CheckReport]) -> CheckReport:
    total = CheckReport(name=name, passed=True, checked=0)
    for rep in reports:
        total.checked += rep.checked
        if not rep.passed:
            total.passed = False
            for case in rep.failures:
                if len(total.failures) < 10:
                    total.failures.append({"part": rep.name, **case})
    return total


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    f = _field(req.p, req.m)
    phase_k = f.check_element(req.phase_k)
    dense_cap = req.dense_cap if req.dense_cap is not None else default_dense_cap()
    wanted = req.checks
    if wanted is not None:
        if "wf" in wanted and f.p == 2:
            raise ValueError("the trace-form comparison needs odd characteristic")
        if "covariance" in wanted and f.N > dense_cap:
            raise ValueError(
                f"covariance needs dense matrices: N={f.N} exceeds dense cap {dense_cap}"
            )

    def want(name: str) -> bool:
        return wanted is None or name in wanted

    fam = mub_family(f, phase_k=phase_k)
    if req.inject_phase_error:
        fam = with_injected_phase_error(fam)
    reports: list[CheckReport] = []
    if want("field"):
        reports.extend(verify_field_axioms(f))
    if want("classes"):
        reports.append(class_structure_check(f))
    if want("group_law"):
        reports.append(
            _aggregate(
                "u_group_laws",
                [u_group_law_check(f, i, phase_k=phase_k) for i in range(f.N + 1)],
            )
        )
    if want("powers"):
        reports.append(
            _aggregate(
                "u_powers", [u_power_check(f, i, phase_k=phase_k) for i in range(f.N + 1)]
            )
        )
    if want("hs") and f.N <= HS_SWEEP_CAP:
        reports.append(hs_orthogonality_check(f))
    if want("unbiasedness"):
        reports.append(verify_unbiasedness(fam))
    if want("eigenstates"):
        reports.append(verify_eigenstates(f, fam, dense_cap=dense_cap))
    if want("wf") and f.p != 2:
        reports.append(wf_equivalence_check(f, phase_k=phase_k))
    if want("covariance") and f.N <= dense_cap:
        reports.append(
            _aggregate(
                "basis_covariance",
                [
                    verify_basis_covariance(f, fam, i, cap=dense_cap)
                    for i in (1, f.N)
                ],
            )
        )
    return VerifyResponse(
        p=f.p,
        m=f.m,
        N=f.N,
        phase_k=phase_k,
        passed=all(r.passed for r in reports),
        reports=[ReportModel(**r.as_dict()) for r in reports],
    )


def _matrix_to_json(M: np.ndarray) -> MatrixJSON:
    return MatrixJSON(re=M.real.tolist(), im=M.imag.tolist())


def handle_tomo(req: TomoRequest) -> TomoResponse:
    f = _field(req.p, req.m)
    phase_k = f.check_element(req.phase_k)
    if req.rho is not None:
        got = len(req.rho.re)
        if got != f.N:
            raise ValueError(f"density matrix is {got}x{got} but N = p^m = {f.N}")
        rho = check_density(np.asarray(req.rho.re) + 1j * np.asarray(req.rho.im))
        projectors = mub_projectors(f, phase_k=phase_k)
        probs = mub_probabilities(f, rho, projectors=projectors)
        via_pauli = pauli_reconstruct(f, pauli_decompose(f, rho))
        via_mub = mub_reconstruct(f, probs, projectors=projectors)
        err_p = float(np.abs(via_pauli - rho).max())
        err_m = float(np.abs(via_mub - rho).max())
        return TomoResponse(
            p=f.p,
            m=f.m,
            N=f.N,
            passed=max(err_p, err_m) <= req.tol,
            seeds=0,
            tol=req.tol,
            worst_displacement_err=err_p,
            worst_measurement_err=err_m,
            reconstructed=_matrix_to_json(via_mub),
            probabilities=probs.tolist(),
        )
    rep = round_trip_check(f, seeds=range(req.seeds), tol=req.tol, phase_k=phase_k)
    return TomoResponse(
        p=f.p,
        m=f.m,
        N=f.N,
        passed=rep.passed,
        seeds=req.seeds,
        tol=req.tol,
        worst_displacement_err=rep.info["worst_displacement_err"],
        worst_measurement_err=rep.info["worst_measurement_err"],
    )


def handle_ring(req: RingRequest) -> RingResponse:
    scan = eigenbasis_unbiasedness_scan(req.n)
    return RingResponse(
        N=scan["N"],
        class_count=scan["num_classes"],
        classes=[{"members": members} for members in scan["classes"]],
        degenerate_classes=scan["degenerate_classes"],
        unbiasedness={
            "max_deviation": scan["max_pair_deviation"],
            "pairs": scan["pair_deviations"],
            "best_subset": scan["best_subset"],
            "best_subset_max_deviation": scan["best_subset_max_deviation"],
        },
    )
