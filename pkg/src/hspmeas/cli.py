"""Command-line front end: parse group descriptors, run constructions, emit reports.

Commands: info, subgroups, chartable, measure, verify, compare, sweep.
Formats: json (sorted keys; byte-identical for a fixed config), csv (fixed
schema), pretty (6-decimal rounding).  Exit codes: 0 success, 2 parse
error, 3 cap or budget exceeded, 4 bad prior, 5 character-solve
convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .characters import (
    CharacterTable,
    ConvergenceError,
    NonIntegerMultiplicityError,
    character_table,
)
from .groups import (
    DEFAULT_SIZE_CAP,
    CapExceededError,
    DescriptorError,
    Group,
    NotAGroupError,
    parse_descriptor,
)
from .lattice import BudgetExceededError, SubgroupLattice, enumerate_subgroups
from .linalg import operator_to_json
from .measurements import (
    NonInvariantPriorError,
    Povm,
    Prior,
    PriorError,
    build_plan,
    class_weight_prior,
    hsp_states,
    ip_measurement,
    optimal_measurement,
    pgm,
    uniform_prior,
)
from .verify import (
    Tolerances,
    VerificationReport,
    closed_form_success,
    verification_report,
)

SIZE_CAP_ENV_VAR = "HSPMEAS_SIZE_CAP"
CSV_SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "schema",
    "group",
    "order",
    "n_subgroups",
    "method",
    "valid",
    "certified_optimal",
    "p_succ",
    "error",
)
METHODS = ("pgm", "ip", "optimal")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_PRIOR = 4
EXIT_CONVERGENCE = 5


@dataclass(frozen=True)
class RunConfig:
    group: str
    method: str = "all"
    prior: str = "uniform"
    fmt: str = "json"
    out: str | None = None
    cap: int = DEFAULT_SIZE_CAP
    seed: int = 0
    tol: float | None = None
    dump_operators: bool = False

    def tolerances(self) -> Tolerances:
        return Tolerances.scaled(self.tol) if self.tol is not None else Tolerances()


def _default_cap() -> int:
    raw = os.environ.get(SIZE_CAP_ENV_VAR)
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise DescriptorError(f"{SIZE_CAP_ENV_VAR}={raw!r} is not an integer") from exc
    if cap < 1:
        raise DescriptorError(f"{SIZE_CAP_ENV_VAR} must be positive, got {cap}")
    return cap


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hspmeas",
        description="Hidden-subgroup state ensembles and discrimination measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, *, group_flag: bool = True) -> None:
        if group_flag:
            p.add_argument("--group", required=True, help="group descriptor")
        p.add_argument(
            "--format", choices=("json", "csv", "pretty"), default=None, dest="fmt"
        )
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=0, help="character-solve RNG seed")
        p.add_argument("--cap", type=int, default=None, help="group size cap")
        p.add_argument(
            "--tol", type=float, default=None, help="certification tolerance override"
        )

    def add_measure_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--method", choices=METHODS + ("all",), default="all")
        p.add_argument(
            "--prior", default="uniform", help="uniform | class-weights:@file.json"
        )

    add_common(sub.add_parser("info", help="order, abelian flag, class/subgroup counts"))
    add_common(sub.add_parser("subgroups", help="subgroup conjugacy classes"))
    add_common(sub.add_parser("chartable", help="complex character table"))

    p_measure = sub.add_parser("measure", help="build measurement(s), report the plan")
    add_common(p_measure)
    add_measure_flags(p_measure)
    p_measure.add_argument("--dump-operators", action="store_true")

    p_verify = sub.add_parser("verify", help="validity and optimality certification")
    add_common(p_verify)
    add_measure_flags(p_verify)
    p_verify.add_argument("--dump-operators", action="store_true")

    p_compare = sub.add_parser("compare", help="all methods on one group, one row each")
    add_common(p_compare)
    p_compare.add_argument("--prior", default="uniform")

    p_sweep = sub.add_parser("sweep", help="compare across a comma-separated group list")
    p_sweep.add_argument("--groups", required=True, help="comma-separated descriptors")
    add_common(p_sweep, group_flag=False)
    p_sweep.add_argument("--prior", default="uniform")
    p_sweep.add_argument("--method", choices=METHODS + ("all",), default="all")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cap = args.cap if args.cap is not None else _default_cap()
    if cap < 1:
        raise DescriptorError(f"--cap must be positive, got {cap}")
    if args.seed < 0:
        raise DescriptorError(f"--seed must be non-negative, got {args.seed}")
    default_fmt = "csv" if args.command in ("compare", "sweep") else "json"
    return RunConfig(
        group=getattr(args, "group", None) or getattr(args, "groups", ""),
        method=getattr(args, "method", "all"),
        prior=getattr(args, "prior", "uniform"),
        fmt=args.fmt or default_fmt,
        out=args.out,
        cap=cap,
        seed=args.seed,
        tol=args.tol,
        dump_operators=getattr(args, "dump_operators", False),
    )


def _load_prior(spec: str, lat: SubgroupLattice) -> Prior:
    if spec == "uniform":
        return uniform_prior(lat)
    if spec.startswith("class-weights:@"):
        path = spec[len("class-weights:@") :]
        try:
            payload = json.loads(Path(path).read_text())
        except OSError as exc:
            raise PriorError(f"cannot read prior file {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise PriorError(f"invalid JSON in prior file {path!r}: {exc}") from exc
        entries = payload.get("weights")
        if not isinstance(entries, list):
            raise PriorError(f"prior file {path!r} needs a 'weights' list")
        per_class: list[float | None] = [None] * len(lat.classes)
        for entry in entries:
            k = entry.get("class_index")
            if not isinstance(k, int) or not 0 <= k < len(lat.classes):
                raise PriorError(f"bad class_index {k!r} in prior file")
            rep_order = lat.subgroups[lat.classes[k].representative].order
            if entry.get("class_rep_order") != rep_order:
                raise PriorError(
                    f"class {k} has representative order {rep_order}, "
                    f"file says {entry.get('class_rep_order')!r}"
                )
            if per_class[k] is not None:
                raise PriorError(f"duplicate weight for class {k}")
            per_class[k] = float(entry["p"])
        missing = [k for k, v in enumerate(per_class) if v is None]
        if missing:
            raise PriorError(f"prior file misses classes {missing}")
        return class_weight_prior(lat, per_class)
    raise PriorError(f"unknown prior spec {spec!r}")


@dataclass
class Pipeline:
    """Lazily computed per-group artifacts shared by the commands."""

    cfg: RunConfig
    group: Group
    _lat: SubgroupLattice | None = None
    _ct: CharacterTable | None = None

    @property
    def lat(self) -> SubgroupLattice:
        if self._lat is None:
            self._lat = enumerate_subgroups(self.group)
        return self._lat

    @property
    def ct(self) -> CharacterTable:
        if self._ct is None:
            self._ct = character_table(self.group, seed=self.cfg.seed)
        return self._ct

    def prior(self) -> Prior:
        return _load_prior(self.cfg.prior, self.lat)

    def build(self, method: str, prior: Prior) -> tuple[Povm, float | None]:
        if method == "pgm":
            return pgm(hsp_states(self.group, self.lat, prior)), None
        if method == "ip":
            return ip_measurement(self.group, self.lat), None
        if method == "optimal":
            plan = build_plan(self.group, self.lat, self.ct, prior)
            povm = optimal_measurement(self.group, self.lat, self.ct, prior, plan=plan)
            return povm, closed_form_success(plan, self.lat, self.ct, prior)
        raise ValueError(f"unknown method {method!r}")


def _plan_payload(pipe: Pipeline, prior: Prior) -> list[dict]:
    plan = build_plan(pipe.group, pipe.lat, pipe.ct, prior)
    out = []
    for entry in plan.irreps:
        cls = pipe.lat.classes[entry.chosen_class]
        out.append(
            {
                "irrep": entry.irrep,
                "dim": entry.dim,
                "chosen_class": entry.chosen_class,
                "class_rep": list(pipe.lat.subgroups[cls.representative].elements),
                "class_size": cls.size,
                "e": entry.e_value,
                "s_values": [float(s) for s in entry.s_values],
                "multiplicities": list(entry.multiplicities),
            }
        )
    return out


def _povm_payload(povm: Povm, lat: SubgroupLattice) -> dict:
    return {
        "label": povm.label,
        "n_operators": len(povm.operators),
        "subgroups": [list(sub.elements) for sub in lat.subgroups],
        "operators": {
            str(i): operator_to_json(op) for i, op in sorted(povm.operators.items())
        },
    }


def _report_payload(report: VerificationReport) -> dict:
    return {
        "validity": {
            "min_eigenvalues": [
                report.validity.min_eigenvalues[i]
                for i in sorted(report.validity.min_eigenvalues)
            ],
            "completeness_residual": report.validity.completeness_residual,
        },
        "commutation_residual": report.commutation_residual,
        "optimality_margins": [
            report.optimality_margins[i] for i in sorted(report.optimality_margins)
        ],
        "success_probability": report.success_probability,
        "closed_form_success": report.closed_form_success,
        "valid": report.valid,
        "certified_optimal": report.certified_optimal,
        "tolerances": {
            "psd": report.tolerances.psd,
            "completeness": report.tolerances.completeness,
            "commutation": report.tolerances.commutation,
            "margin": report.tolerances.margin,
        },
    }


def cmd_info(pipe: Pipeline) -> dict:
    g = pipe.group
    return {
        "group": pipe.cfg.group,
        "origin": g.origin,
        "order": g.order,
        "abelian": g.is_abelian,
        "element_classes": pipe.ct.class_data.num_classes,
        "subgroups": len(pipe.lat.subgroups),
        "subgroup_classes": len(pipe.lat.classes),
    }


def cmd_subgroups(pipe: Pipeline) -> dict:
    lat = pipe.lat
    return {
        "count": len(lat.subgroups),
        "classes": [
            {
                "rep": list(lat.subgroups[cls.representative].elements),
                "size": cls.size,
                "order": lat.subgroups[cls.representative].order,
            }
            for cls in lat.classes
        ],
    }


def cmd_chartable(pipe: Pipeline) -> dict:
    ct = pipe.ct
    return {
        "classes": list(ct.class_data.sizes),
        "irreps": [
            {
                "dim": ct.dims[mu],
                "chi": [[float(v.real), float(v.imag)] for v in ct.chi[mu]],
            }
            for mu in range(ct.num_irreps)
        ],
    }


def cmd_measure(pipe: Pipeline) -> dict:
    cfg = pipe.cfg
    prior = pipe.prior()
    methods = METHODS if cfg.method == "all" else (cfg.method,)
    payload: dict = {
        "group": cfg.group,
        "order": pipe.group.order,
        "prior": cfg.prior,
        "methods": {},
    }
    for method in methods:
        povm, _ = pipe.build(method, prior)
        entry: dict = {"n_operators": len(povm.operators)}
        if method == "optimal":
            entry["plan"] = _plan_payload(pipe, prior)
        if cfg.dump_operators:
            entry["povm"] = _povm_payload(povm, pipe.lat)
        payload["methods"][method] = entry
    return payload


def cmd_verify(pipe: Pipeline) -> dict:
    cfg = pipe.cfg
    prior = pipe.prior()
    states = hsp_states(pipe.group, pipe.lat, prior)
    methods = METHODS if cfg.method == "all" else (cfg.method,)
    payload: dict = {
        "group": cfg.group,
        "order": pipe.group.order,
        "prior": cfg.prior,
        "methods": {},
    }
    for method in methods:
        povm, closed = pipe.build(method, prior)
        report = verification_report(
            povm, states, tolerances=cfg.tolerances(), closed_form=closed
        )
        entry: dict = {"report": _report_payload(report)}
        if cfg.dump_operators:
            entry["povm"] = _povm_payload(povm, pipe.lat)
        payload["methods"][method] = entry
    return payload


def _compare_rows(pipe: Pipeline, methods: tuple[str, ...]) -> list[dict]:
    prior = pipe.prior()
    states = hsp_states(pipe.group, pipe.lat, prior)
    rows = []
    for method in methods:
        povm, closed = pipe.build(method, prior)
        report = verification_report(
            povm, states, tolerances=pipe.cfg.tolerances(), closed_form=closed
        )
        rows.append(
            {
                "schema": CSV_SCHEMA_VERSION,
                "group": pipe.cfg.group,
                "order": pipe.group.order,
                "n_subgroups": len(pipe.lat.subgroups),
                "method": method,
                "valid": report.valid,
                "certified_optimal": report.certified_optimal,
                "p_succ": report.success_probability,
                "error": "",
            }
        )
    return rows


def cmd_compare(pipe: Pipeline) -> list[dict]:
    methods = METHODS if pipe.cfg.method == "all" else (pipe.cfg.method,)
    return _compare_rows(pipe, methods)


_ERROR_CODES: tuple[tuple[type, int], ...] = (
    (CapExceededError, EXIT_CAP),
    (BudgetExceededError, EXIT_CAP),
    (NonInvariantPriorError, EXIT_PRIOR),
    (PriorError, EXIT_PRIOR),
    (ConvergenceError, EXIT_CONVERGENCE),
    (NonIntegerMultiplicityError, EXIT_CONVERGENCE),
    (DescriptorError, EXIT_PARSE),
    (NotAGroupError, EXIT_PARSE),
    (ValueError, EXIT_PARSE),
)


def _exit_code_for(exc: Exception) -> int | None:
    for exc_type, code in _ERROR_CODES:
        if isinstance(exc, exc_type):
            return code
    return None


def _split_descriptors(text: str) -> list[str]:
    """Split a sweep list on top-level commas.

    Every ``product:`` consumes the following comma, so fragments are
    rejoined until each descriptor is structurally complete.
    """
    out: list[str] = []
    buf: list[str] = []
    needed = 1
    for part in text.split(","):
        buf.append(part)
        needed += part.count("product:") - 1
        if needed == 0:
            out.append(",".join(buf))
            buf = []
            needed = 1
    if buf:
        raise DescriptorError(f"incomplete descriptor {','.join(buf)!r} in sweep list")
    return out


def cmd_sweep(cfg: RunConfig) -> tuple[list[dict], int]:
    methods = METHODS if cfg.method == "all" else (cfg.method,)
    rows: list[dict] = []
    code = EXIT_OK
    for desc in _split_descriptors(cfg.group):
        try:
            group = parse_descriptor(desc, cap=cfg.cap)
            pipe = Pipeline(cfg=replace(cfg, group=desc), group=group)
            rows.extend(_compare_rows(pipe, methods))
        except Exception as exc:
            row_code = _exit_code_for(exc)
            if row_code is None:
                raise
            if code == EXIT_OK:
                code = row_code
            rows.append(
                {
                    "schema": CSV_SCHEMA_VERSION,
                    "group": desc,
                    "order": "",
                    "n_subgroups": "",
                    "method": "",
                    "valid": "",
                    "certified_optimal": "",
                    "p_succ": "",
                    "error": f"{type(exc).__name__}: {exc}",
                }
            )
    return rows, code


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _render_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row[k]) for k in CSV_COLUMNS})
    return buf.getvalue()


def _pretty_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    if isinstance(value, list):
        return "[" + ", ".join(_pretty_scalar(v) for v in value) + "]"
    return str(value)


def _flatten_pretty(prefix: str, value, lines: list[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value, key=str):
            _flatten_pretty(f"{prefix}{key}.", value[key], lines)
    else:
        lines.append(f"{prefix.rstrip('.')} = {_pretty_scalar(value)}")


def _render_pretty(payload) -> str:
    if isinstance(payload, list):
        lines = [
            "  ".join(f"{k}={_csv_cell(row[k])}" for k in CSV_COLUMNS)
            for row in payload
        ]
    else:
        lines = []
        _flatten_pretty("", payload, lines)
    return "\n".join(lines) + "\n"


def _render(payload, fmt: str) -> str:
    if fmt == "json":
        return _render_json(payload)
    if fmt == "csv":
        if not isinstance(payload, list):
            raise DescriptorError("csv format is only available for compare and sweep")
        return _render_csv(payload)
    return _render_pretty(payload)


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        if args.command == "sweep":
            rows, code = cmd_sweep(cfg)
            _write(_render(rows, cfg.fmt), cfg.out)
            return code
        group = parse_descriptor(cfg.group, cap=cfg.cap)
        pipe = Pipeline(cfg=cfg, group=group)
        handler = {
            "info": cmd_info,
            "subgroups": cmd_subgroups,
            "chartable": cmd_chartable,
            "measure": cmd_measure,
            "verify": cmd_verify,
            "compare": cmd_compare,
        }[args.command]
        payload = handler(pipe)
        _write(_render(payload, cfg.fmt), cfg.out)
        return EXIT_OK
    except Exception as exc:
        code = _exit_code_for(exc)
        if code is None:
            raise
        sys.stderr.write(f"error: {exc}\n")
        return code


def entrypoint() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
