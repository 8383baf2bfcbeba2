"""Command-line client for the spectrum service.

Every subcommand assembles a request model, runs it through the shared
handlers (in-process by default, or against a running HTTP service with
--server), and writes the response deterministically: identical configuration
yields identical bytes. Units are hbar = 1; preset masses and speeds default
to 1 where unspecified.

Exit codes: 0 success, 1 usage error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from .models import MODEL_KINDS
from .serialize import csv_lines, json_dumps
from .service import handlers, schemas


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise UsageError(message)


_PRESET_FLAGS = [
    ("--omega", "omega"),
    ("--omega0", "omega0"),
    ("--kappa", "kappa"),
    ("--lambda1", "lambda1"),
    ("--lambda2", "lambda2"),
    ("--m", "m"),
    ("--mu-level", "mu_level"),
    ("--m-star", "m_star"),
    ("--B", "B"),
    ("--lambda-r", "lambda_R"),
    ("--g", "g"),
    ("--mu-bohr", "mu_bohr"),
    ("--charge", "charge"),
    ("--mass", "mass"),
    ("--c", "c"),
]

_GENERAL_FLAGS = ["omega1", "omega2", "beta"] + [
    f"{name}{i}" for name in ("kappa", "gamma") for i in range(1, 5)
]

_PRESET_FIELDS = {kind: {f.name for f in fields(cls)} for kind, cls in MODEL_KINDS.items()}


def _add_common(parser: _Parser, with_model: bool = True):
    if with_model:
        parser.add_argument("--model", help="jt | dot | jc | jc-rwa | mjc | dirac | general")
        for flag, dest in _PRESET_FLAGS:
            parser.add_argument(flag, dest=dest, type=float, default=None)
        for name in _GENERAL_FLAGS:
            parser.add_argument(f"--{name}", dest=f"gen_{name}", default=None,
                                help="general-model parameter (complex accepted, e.g. '2j')")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", default=None, help="write here instead of stdout")
    parser.add_argument("--config", default=None, help="JSON config file; flags win on conflict")
    parser.add_argument("--server", default=None, help="base URL of a running service")


def build_parser() -> _Parser:
    parser = _Parser(prog="spinboson", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("spectrum", help="direct-diagonalization spectrum")
    _add_common(p)
    p.add_argument("--cutoff", type=int, default=32)
    p.add_argument("--levels", type=int, default=None)
    p.add_argument("--dump", action="store_true", help="include the raw matrix ([re, im] pairs)")

    p = sub.add_parser("closed-form", help="closed-form levels vs the numerical oracle")
    _add_common(p)
    p.add_argument("--variant", choices=("printed", "rederived", "both"), default="both")
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--cutoff", type=int, default=32)

    p = sub.add_parser("recurrence", help="sector recurrence roots with spurious filtering")
    _add_common(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--mirrored", action="store_true")
    p.add_argument("--cutoff", type=int, default=64)
    p.add_argument("--scan", type=float, nargs=2, default=None, metavar=("LO", "HI"))
    p.add_argument("--grid", type=int, default=2000)
    p.add_argument("--refine-tol", type=float, default=1e-12)
    p.add_argument("--residual-tol", type=float, default=None)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p, with_model=False)
    p.add_argument("--suite", default="all")
    p.add_argument("--cutoff", type=int, default=20)
    p.add_argument("--tolerance", type=float, default=None)

    p = sub.add_parser("converge", help="lowest levels across cutoffs")
    _add_common(p)
    p.add_argument("--cutoffs", type=int, nargs="+", default=[32, 64])
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--tolerance", type=float, default=1e-10)

    p = sub.add_parser("reconstruct", help="rebuild the spinor at one energy")
    _add_common(p)
    p.add_argument("--k", type=float, default=None)
    p.add_argument("--parity", choices=("even", "odd"), default=None)
    p.add_argument("--mirrored", action="store_true")
    p.add_argument("--energy", type=float, required=True)
    p.add_argument("--cutoff", type=int, default=32)

    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise UsageError(f"cannot read config {path}: {err}") from err
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _merged(args, config: dict, key: str, default=None):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None and value is not False:
        return value
    if key in config:
        return config[key]
    return default


def _collect_params(args, config: dict, kind: str) -> dict:
    if kind not in _PRESET_FIELDS:
        raise UsageError(f"unknown model {kind!r}")
    params = {}
    for name in _PRESET_FIELDS[kind]:
        value = getattr(args, name, None)
        if value is None:
            value = config.get(name)
        if value is not None:
            params[name] = float(value)
    return params


def _collect_general(args, config: dict) -> dict:
    spec = {}
    for name in _GENERAL_FLAGS:
        raw = getattr(args, f"gen_{name}", None)
        if raw is None:
            raw = config.get(name)
        if raw is None:
            continue
        if name.startswith(("kappa", "gamma")):
            try:
                z = complex(str(raw).replace(" ", ""))
            except ValueError as err:
                raise UsageError(f"cannot parse complex value for {name}: {raw!r}") from err
            spec[name] = (z.real, z.imag) if z.imag else z.real
        else:
            spec[name] = float(raw)
    return spec


def _model_kind(args, config: dict) -> str:
    kind = _merged(args, config, "model")
    if kind is None:
        raise UsageError("--model is required (or provide it in --config)")
    return str(kind)


def _check_cutoff(cutoff: int):
    if cutoff < 8:
        raise UsageError("cutoff must be >= 8")
    return cutoff


def _sector_spec(args, config: dict) -> schemas.SectorSpec:
    return schemas.SectorSpec(
        k=_merged(args, config, "k"),
        parity=_merged(args, config, "parity"),
        mirrored=bool(_merged(args, config, "mirrored", False)),
    )


def _build_request(args, config: dict):
    command = args.command
    if command == "spectrum":
        kind = _model_kind(args, config)
        return schemas.SpectrumRequest(
            model=kind,
            params=_collect_params(args, config, kind) if kind != "general" else {},
            general=schemas.GeneralSpec(**_collect_general(args, config)) if kind == "general" else None,
            cutoff=_check_cutoff(int(_merged(args, config, "cutoff", 32))),
            levels=_merged(args, config, "levels"),
            dump_matrix=bool(_merged(args, config, "dump", False)),
        )
    if command == "closed-form":
        kind = _model_kind(args, config)
        lookup = "jc" if kind == "jc-ground" else kind
        return schemas.ClosedFormRequest(
            model=kind,
            params=_collect_params(args, config, lookup),
            variant=str(_merged(args, config, "variant", "both")),
            levels=int(_merged(args, config, "levels", 10)),
            cutoff=_check_cutoff(int(_merged(args, config, "cutoff", 32))),
        )
    if command == "recurrence":
        kind = _model_kind(args, config)
        scan = _merged(args, config, "scan")
        return schemas.RecurrenceRequest(
            model=kind,
            params=_collect_params(args, config, kind),
            sector=_sector_spec(args, config),
            cutoff=_check_cutoff(int(_merged(args, config, "cutoff", 64))),
            scan=tuple(scan) if scan is not None else None,
            grid=int(_merged(args, config, "grid", 2000)),
            refine_tol=float(_merged(args, config, "refine-tol", 1e-12)),
            residual_tol=_merged(args, config, "residual-tol"),
        )
    if command == "verify":
        return schemas.VerifyRequest(
            suite=str(_merged(args, config, "suite", "all")),
            cutoff=_check_cutoff(int(_merged(args, config, "cutoff", 20))),
            tolerance=_merged(args, config, "tolerance"),
        )
    if command == "converge":
        kind = _model_kind(args, config)
        cutoffs = [int(c) for c in _merged(args, config, "cutoffs", [32, 64])]
        for c in cutoffs:
            _check_cutoff(c)
        return schemas.ConvergeRequest(
            model=kind,
            params=_collect_params(args, config, kind),
            cutoffs=cutoffs,
            levels=int(_merged(args, config, "levels", 10)),
            tolerance=float(_merged(args, config, "tolerance", 1e-10)),
        )
    if command == "reconstruct":
        kind = _model_kind(args, config)
        energy = _merged(args, config, "energy")
        if energy is None:
            raise UsageError("--energy is required")
        return schemas.ReconstructRequest(
            model=kind,
            params=_collect_params(args, config, kind),
            sector=_sector_spec(args, config),
            energy=float(energy),
            cutoff=_check_cutoff(int(_merged(args, config, "cutoff", 32))),
        )
    raise UsageError("choose a command (spectrum, closed-form, recurrence, verify, converge, reconstruct)")


def _dispatch(command: str, request, server: str | None):
    request_cls, handler = handlers.HANDLERS[command]
    assert isinstance(request, request_cls)
    if server is None:
        return handler(request)
    import httpx

    response = httpx.post(
        server.rstrip("/") + "/" + command, json=request.model_dump(mode="json"), timeout=600.0
    )
    if response.status_code != 200:
        raise UsageError(f"server returned {response.status_code}: {response.text}")
    response_cls = handler.__annotations__["return"]
    return response_cls.model_validate(response.json())


def _flatten(prefix: str, obj, out: dict):
    if isinstance(obj, dict):
        for key, value in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), value, out)
    elif isinstance(obj, (list, tuple)):
        out[prefix] = " ".join(str(v) for v in obj)
    elif obj is not None:
        out[prefix] = obj


def _to_csv(command: str, payload: dict) -> str:
    config: dict = {}
    _flatten("", payload.get("config", {}), config)
    if command == "spectrum":
        offset = payload["constant_offset"]
        rows = []
        for i, v in enumerate(payload["eigenvalues"]):
            if isinstance(v, (list, tuple)):
                rows.append((i, v[0], v[1], payload["residual"]))
            else:
                rows.append((i, v, v + offset if offset else None, payload["residual"]))
        header = ["index", "eigenvalue", "im_or_shifted", "residual"]
        return csv_lines(header, rows, config)
    if command == "closed-form":
        rows = [
            (r["label"], r["printed"], r["rederived"], r["oracle"], r["printed_error"], r["rederived_error"])
            for r in payload["rows"]
        ]
        return csv_lines(
            ["label", "printed", "rederived", "oracle", "printed_error", "rederived_error"], rows, config
        )
    if command == "recurrence":
        rows = []
        for status in ("accepted", "spurious", "poles"):
            for r in payload[status]:
                rows.append((status, r["energy"], r["det_residual"], r["spinor_residual"]))
        return csv_lines(["status", "energy", "det_residual", "spinor_residual"], rows, config)
    if command == "verify":
        rows = [
            (s["suite"], c["name"], c["residual"], c["tolerance"], c["passed"])
            for s in payload["suites"]
            for c in s["checks"]
        ]
        return csv_lines(["suite", "check", "residual", "tolerance", "passed"], rows, config)
    if command == "converge":
        rows = [
            (cutoff, level, value)
            for cutoff, row in zip(payload["cutoffs"], payload["levels"])
            for level, value in enumerate(row)
        ]
        return csv_lines(["cutoff", "level", "value"], rows, config)
    if command == "reconstruct":
        rows = [(i, a) for i, a in enumerate(payload["amplitudes"])]
        return csv_lines(["row", "amplitude"], rows, config)
    raise UsageError(f"no CSV renderer for {command}")


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as err:
        raise UsageError(f"cannot write {path}: {err}") from err


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required; see --help")
        config = _load_config(args.config)
        request = _build_request(args, config)
        try:
            response = _dispatch(args.command, request, args.server)
        except ValueError as err:
            raise UsageError(str(err)) from err
        payload = response.model_dump(mode="json")
        text = json_dumps(payload) if args.format == "json" else _to_csv(args.command, payload)
        _write(text, args.output)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    if args.command == "verify" and not payload["passed"]:
        return 2
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
