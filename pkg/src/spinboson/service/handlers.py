"""Command handlers: one function per command, shared by the HTTP app and the CLI.

Handlers validate with ValueError (mapped to 400 by the app, exit 1 by the
CLI) and produce fully resolved, deterministic response models.
"""

from __future__ import annotations

import numpy as np

from ..exact import comparison_report
from ..fock import Cutoff, FockBasis, matrix_dump
from ..models import (
    GeneralParams,
    MODEL_KINDS,
    build_hamiltonian,
    build_preset,
    charge_sector_tables,
    lowest_levels,
    preset_from_params,
    sector_matrix,
    to_general,
)
from ..reduction import (
    RecurrenceSector,
    RootCandidate,
    build_recurrence,
    det_scan_roots,
    filter_spurious,
    pencil_null_vector,
    sector_direct_eigs,
    _pencil_defect,
    _reconstruction_basis,
)
from ..solver import convergence_study, eig_hermitian, eig_small_general, match_spectra
from ..suites import run_suites
from . import schemas

MAX_DUMP_DIM = 1024
MAX_DENSE_DIM = 9000


def _to_complex(value) -> complex:
    if isinstance(value, (tuple, list)):
        return complex(value[0], value[1])
    return complex(value)


def _general_from_spec(spec: schemas.GeneralSpec) -> GeneralParams:
    return GeneralParams(
        omega1=spec.omega1,
        omega2=spec.omega2,
        beta=spec.beta,
        kappa1=_to_complex(spec.kappa1),
        kappa2=_to_complex(spec.kappa2),
        kappa3=_to_complex(spec.kappa3),
        kappa4=_to_complex(spec.kappa4),
        gamma1=_to_complex(spec.gamma1),
        gamma2=_to_complex(spec.gamma2),
        gamma3=_to_complex(spec.gamma3),
        gamma4=_to_complex(spec.gamma4),
    )


def _basis_for_kind(kind: str, cutoff: int) -> FockBasis:
    if kind in ("jt", "dot", "mjc"):
        return FockBasis(Cutoff(cutoff, cutoff))
    return FockBasis(Cutoff(cutoff))


def _sector_from_spec(spec: schemas.SectorSpec) -> RecurrenceSector:
    return RecurrenceSector(k=spec.k, parity=spec.parity, mirrored=spec.mirrored)


def _config_echo(request) -> dict:
    return request.model_dump()


def run_spectrum(request: schemas.SpectrumRequest) -> schemas.SpectrumResponse:
    kind = request.model
    if kind == "general":
        if request.general is None:
            raise ValueError("model 'general' needs the general parameter block")
        general = _general_from_spec(request.general)
        basis = FockBasis(
            Cutoff(request.cutoff, request.cutoff if general.needs_two_modes else None)
        )
        build = build_hamiltonian(general, basis)
        offset = 0.0
    else:
        preset = preset_from_params(kind, request.params)
        basis = _basis_for_kind(kind, request.cutoff)
        build = build_preset(kind, preset, basis)
        offset = build.constant_offset
    notes = list(build.notes)

    if build.hermitian:
        if build.spinor.full.shape[0] > MAX_DENSE_DIM:
            raise ValueError("matrix too large for a dense solve; lower the cutoff")
        spec = eig_hermitian(build.spinor.full, cutoff=basis.cutoff)
        values = spec.eigenvalues
        if request.levels is not None:
            values = values[: request.levels]
        eigenvalues = [float(v) for v in values]
        shifted = [float(v) + offset for v in values] if offset != 0.0 else None
        residual = spec.residual
    else:
        if kind == "general":
            raise ValueError(
                "non-Hermitian general parameters have no registered charge; "
                "use a preset model or Hermitian couplings"
            )
        mapping = to_general(preset)
        vals = []
        for states in charge_sector_tables(kind, basis).values():
            block = sector_matrix(mapping.general, basis, states)
            if block.shape[0] > 8:
                raise ValueError("non-Hermitian sectors larger than 8x8 are unsupported")
            vals.extend(complex(z) for z in eig_small_general(block))
        vals.sort(key=lambda z: (z.real, z.imag))
        if request.levels is not None:
            vals = vals[: request.levels]
        eigenvalues = [(z.real, z.imag) for z in vals]
        shifted = None
        residual = None
        notes.append("non-Hermitian model: eigenvalues solved sector-by-sector, [re, im] pairs")

    matrix = None
    if request.dump_matrix:
        if build.spinor.full.shape[0] > MAX_DUMP_DIM:
            raise ValueError(f"matrix dump limited to dimension {MAX_DUMP_DIM}")
        matrix = matrix_dump(build.spinor.full)

    return schemas.SpectrumResponse(
        model=kind,
        cutoff=[basis.cutoff.n_max_a] + ([basis.cutoff.n_max_b] if basis.two_mode else []),
        hermitian=build.hermitian,
        constant_offset=offset,
        eigenvalues=eigenvalues,
        eigenvalues_with_offset=shifted,
        residual=residual,
        notes=notes,
        config=_config_echo(request),
        matrix=matrix,
    )


def _wire_value(z):
    if z is None:
        return None
    z = complex(z)
    if z.imag == 0.0:
        return float(z.real)
    return (z.real, z.imag)


def run_closed_form(request: schemas.ClosedFormRequest) -> schemas.ClosedFormResponse:
    if request.variant not in ("printed", "rederived", "both"):
        raise ValueError("variant must be printed, rederived, or both")
    kind = request.model
    if kind not in ("jc-rwa", "dirac", "mjc", "jc-ground"):
        raise ValueError("closed forms exist for jc-rwa, dirac, mjc, jc-ground")
    preset_kind = "jc" if kind == "jc-ground" else kind
    preset = preset_from_params(preset_kind, request.params)
    basis = _basis_for_kind(preset_kind, request.cutoff)
    report = comparison_report(kind, preset, basis, request.levels)
    rows = []
    for r in report.rows:
        rows.append(
            schemas.ClosedFormRow(
                label=r.label,
                printed=_wire_value(r.printed) if request.variant in ("printed", "both") else None,
                rederived=_wire_value(r.rederived) if request.variant in ("rederived", "both") else None,
                oracle=_wire_value(r.oracle),
                printed_error=r.printed_error if request.variant in ("printed", "both") else None,
                rederived_error=r.rederived_error if request.variant in ("rederived", "both") else None,
            )
        )
    return schemas.ClosedFormResponse(
        model=kind,
        variant=request.variant,
        rows=rows,
        max_printed_error=report.max_printed_error,
        max_rederived_error=report.max_rederived_error,
        notes=report.notes,
        config=_config_echo(request),
    )


def _roots_by_status(classified, status: str) -> list[schemas.RootRecord]:
    return [
        schemas.RootRecord(
            energy=c.energy, det_residual=c.det_residual, spinor_residual=c.spinor_residual
        )
        for c in classified
        if c.status == status
    ]


def run_recurrence(request: schemas.RecurrenceRequest) -> schemas.RecurrenceResponse:
    if request.model not in ("jt", "dot", "jc"):
        raise ValueError("recurrence reductions exist for jt, dot, jc")
    preset = preset_from_params(request.model, request.params)
    sector = _sector_from_spec(request.sector)
    system = build_recurrence(request.model, preset, sector, request.cutoff)
    oracle_basis = _reconstruction_basis(system)
    oracle = sector_direct_eigs(request.model, preset, sector, oracle_basis).eigenvalues
    if request.scan is not None:
        lo, hi = float(request.scan[0]), float(request.scan[1])
    else:
        lo, hi = float(oracle[0] - 1.0), float(oracle[-1] + 1.0)
    candidates = det_scan_roots(system, lo, hi, request.grid, request.refine_tol)
    classified = filter_spurious(candidates, system, request.residual_tol, oracle_basis)
    accepted = [c.energy for c in classified if c.status == "accepted"]
    in_window = [float(v) for v in oracle if lo <= v <= hi]
    pairing = match_spectra(accepted, in_window, tol=1e-6)
    reliable = [float(v) for v in oracle[: len(oracle) // 2] if lo <= v <= hi]
    missed = sum(1 for v in reliable if not any(abs(v - a) <= 1e-8 for a in accepted))
    return schemas.RecurrenceResponse(
        model=request.model,
        sector=sector.describe(),
        scan=(lo, hi),
        accepted=_roots_by_status(classified, "accepted"),
        spurious=_roots_by_status(classified, "spurious"),
        poles=_roots_by_status(classified, "pole"),
        oracle=[float(v) for v in oracle],
        max_pair_error=pairing.max_error if pairing.pairs else None,
        unmatched_accepted=len(pairing.unmatched_left),
        reliable_levels_missed=missed,
        notes=system.notes,
        config=_config_echo(request),
    )


def run_verify(request: schemas.VerifyRequest) -> schemas.VerifyResponse:
    results = run_suites(request.suite, request.cutoff, request.tolerance)
    suites = [
        schemas.SuiteRecord(
            suite=r.suite,
            passed=r.passed,
            checks=[
                schemas.CheckRecord(
                    name=c.name, residual=c.residual, tolerance=c.tolerance, passed=c.passed
                )
                for c in r.checks
            ],
            notes=r.notes,
        )
        for r in results
    ]
    return schemas.VerifyResponse(
        passed=all(r.passed for r in results),
        suites=suites,
        config=_config_echo(request),
    )


def run_converge(request: schemas.ConvergeRequest) -> schemas.ConvergeResponse:
    kind = request.model
    if kind not in MODEL_KINDS:
        raise ValueError(f"unknown model kind {kind!r}")
    preset = preset_from_params(kind, request.params)
    two_mode = kind in ("jt", "dot", "mjc")

    def builder(cutoff: int) -> np.ndarray:
        c = Cutoff(cutoff, cutoff if two_mode else None)
        return lowest_levels(kind, preset, c, request.levels)

    study = convergence_study(builder, request.cutoffs, request.levels, request.tolerance)
    return schemas.ConvergeResponse(
        model=kind,
        cutoffs=study.cutoffs,
        levels=[[float(v) for v in row] for row in study.levels],
        deltas=[[float(v) for v in row] for row in study.deltas],
        converged=[bool(v) for v in study.converged],
        tolerance=study.tolerance,
        config=_config_echo(request),
    )


def run_reconstruct(request: schemas.ReconstructRequest) -> schemas.ReconstructResponse:
    if request.model not in ("jt", "dot", "jc"):
        raise ValueError("spinor reconstruction works on the recurrence models jt, dot, jc")
    preset = preset_from_params(request.model, request.params)
    sector = _sector_from_spec(request.sector)
    system = build_recurrence(request.model, preset, sector, request.cutoff)
    basis = _reconstruction_basis(system)
    det_residual = _pencil_defect(system, request.energy)
    amplitudes = pencil_null_vector(system, request.energy)
    classified = filter_spurious(
        [RootCandidate(request.energy, det_residual)], system, basis=basis
    )[0]
    return schemas.ReconstructResponse(
        model=request.model,
        sector=sector.describe(),
        energy=request.energy,
        status=classified.status,
        det_residual=det_residual,
        spinor_residual=classified.spinor_residual,
        amplitudes=[float(a.real) for a in amplitudes],
        notes=system.notes,
        config=_config_echo(request),
    )


HANDLERS = {
    "spectrum": (schemas.SpectrumRequest, run_spectrum),
    "closed-form": (schemas.ClosedFormRequest, run_closed_form),
    "recurrence": (schemas.RecurrenceRequest, run_recurrence),
    "verify": (schemas.VerifyRequest, run_verify),
    "converge": (schemas.ConvergeRequest, run_converge),
    "reconstruct": (schemas.ReconstructRequest, run_reconstruct),
}
