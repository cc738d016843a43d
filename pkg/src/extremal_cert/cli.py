"""Command line front end: ``extremal-cert {certify,table,branch,hr-check}``.

Exit codes: 0 everything certified, 1 something falsified (or a numerical λ*
above its certified bound), 2 inconclusive or a stalled continuation, 3 bad
configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import platform
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import branch, certifier, table1
from .certifier import Status, Verdict
from .radial import Dimension
from .schema import SUMMARY_COLUMNS

EXIT_OK, EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 3

DEFAULT_OUT = Path("reports")
MIN_DIM = {"certify": 13, "table": 13, "hr-check": 5, "branch": 5}
DEFAULT_DIMS = {"certify": "13..31", "table": "13..32", "hr-check": "5..40", "branch": "13,20,31"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    dimensions: list[int]
    m: Optional[Fraction] = None
    tol: float = 1e-6
    max_depth: int = certifier.DEFAULT_MAX_DEPTH
    fmt: str = "text"
    parallelism: int = 1
    lambda_prime: Optional[str] = None
    beta: Optional[str] = None
    out: Path = DEFAULT_OUT
    force: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        lo = MIN_DIM[self.command]
        bad = [N for N in self.dimensions if N < lo]
        if bad:
            raise ConfigError(f"{self.command}: dimensions must be >= {lo}, got {bad}")
        if self.m is not None and self.m <= 0:
            raise ConfigError("m must be positive")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.max_depth < 1 or self.parallelism < 1:
            raise ConfigError("max-depth and parallelism must be >= 1")

    def as_json(self) -> dict:
        return {
            "command": self.command,
            "dimensions": self.dimensions,
            "m": None if self.m is None else str(self.m),
            "tol": self.tol,
            "max_depth": self.max_depth,
            "format": self.fmt,
            "lambda_prime": self.lambda_prime,
            "beta": self.beta,
            **self.extra,
        }


def parse_dims(text: str) -> list[int]:
    """'13..31' (inclusive), '13,20,31' or a mix such as '5..8,13'."""
    dims: list[int] = []
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"(-?\d+)\s*\.\.\s*(-?\d+)", part)
        if m:
            a, b = int(m.group(1)), int(m.group(2))
            if b < a:
                raise ConfigError(f"empty range {part!r}")
            dims.extend(range(a, b + 1))
        elif re.fullmatch(r"-?\d+", part):
            dims.append(int(part))
        else:
            raise ConfigError(f"cannot parse dimensions {text!r}")
    return sorted(set(dims))


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _prepare_out(cfg: RunConfig) -> Path:
    target = cfg.out / cfg.command
    if target.exists() and any(target.iterdir()) and not cfg.force:
        raise ConfigError(f"{target} is not empty; pass --force to overwrite")
    target.mkdir(parents=True, exist_ok=True)
    return target


def _write_metadata(target: Path, cfg: RunConfig, started: float, per_job: dict) -> None:
    meta = {
        "started": datetime.fromtimestamp(started, timezone.utc).isoformat(),
        "elapsed_seconds": time.time() - started,
        "per_dimension_seconds": per_job,
        "python": platform.python_version(),
        "config": cfg.as_json(),
    }
    (target / "metadata.json").write_text(_dump(meta))


def _run_jobs(fn: Callable, args: Sequence, parallelism: int) -> list:
    """Apply fn to each argument; results come back in input order."""
    if parallelism <= 1 or len(args) <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(fn, args))


def _render(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return _dump(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r.get(c) for c in columns})
        return buf.getvalue()
    widths = {c: max(len(c), *(len(_cell(r.get(c))) for r in rows)) if rows else len(c) for c in columns}
    lines = ["  ".join(c.rjust(widths[c]) for c in columns)]
    lines += ["  ".join(_cell(r.get(c)).rjust(widths[c]) for c in columns) for r in rows]
    return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


# ---------------------------------------------------------------------------
# certify / table

def _certify_job(args) -> tuple[dict, float]:
    N, m, tol, max_depth, lam, beta = args
    t0 = time.perf_counter()
    report = certifier.certify_dimension(N, m=m, tol=tol, max_depth=max_depth, lambda_prime=lam, beta=beta)
    return _report_row(report), time.perf_counter() - t0


def _report_row(report: certifier.DimensionReport) -> dict:
    return {
        "json": report.to_json(),
        "status": report.status.value,
        "verdict": report.verdict.value,
    }


def _summary_row(rep: dict) -> dict:
    return {
        "N": rep["N"],
        "m": rep["m"],
        "route": rep["route"],
        "table_lambda": rep["table_lambda"],
        "table_beta": rep["table_beta"],
        "S_lo": rep["S_N"]["value"]["lo"],
        "S_hi": rep["S_N"]["value"]["hi"],
        "I_lo": rep["I_N"]["value"]["lo"],
        "I_hi": rep["I_N"]["value"]["hi"],
        "margin": rep["margin"],
        "verdict": rep["verdict"],
    }


def cmd_certify(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    target = _prepare_out(cfg)
    started = time.time()
    jobs = [(N, cfg.m, cfg.tol, cfg.max_depth, cfg.lambda_prime, cfg.beta) for N in cfg.dimensions]
    results = _run_jobs(_certify_job, jobs, cfg.parallelism)
    rows, timing, statuses = [], {}, []
    for N, (res, elapsed) in zip(cfg.dimensions, results):
        doc = {"schema": "extremal-cert/dimension-report/1", "result": res["json"]}
        (target / f"N{N:03d}.json").write_text(_dump(doc))
        rows.append(_summary_row(res["json"]))
        timing[str(N)] = elapsed
        status = Status(res["status"])
        if status is Status.CERTIFIED and res["verdict"] != Verdict.SINGULAR_CERTIFIED.value:
            status = Status.INCONCLUSIVE
        statuses.append(status)
        for which in ("cond1", "cond2"):
            w = res["json"][which]["witness"]
            if w is not None:
                print(f"N={N}: {which} falsified at r={w}", file=sys.stderr)
    text = _render(rows, SUMMARY_COLUMNS, cfg.fmt)
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.fmt]
    (target / f"summary.{ext}").write_text(text)
    _write_metadata(target, cfg, started, timing)
    stdout.write(text)
    return _exit_code(statuses)


def _exit_code(statuses) -> int:
    if any(s is Status.FALSIFIED for s in statuses):
        return EXIT_FALSIFIED
    if any(s is not Status.CERTIFIED for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _table_job(args) -> dict:
    N, m, tol, max_depth = args
    m = certifier.default_m(N) if m is None else m
    S = certifier.lambda_prime_enclosure(N, m, tol=tol, max_depth=max_depth)
    closed = m == 2 and N >= 32
    weight = "classical" if closed else "improved"
    I = certifier.beta_enclosure(N, m, tol=tol, max_depth=max_depth, weight=weight)
    row = table1.row(N)
    if closed:
        table_lambda = f"{certifier.closed_form_lambda(N).coeff}e^2"
        table_beta = str(Dimension(N).H)
    else:
        table_lambda, table_beta = (row if row else (None, None))
    return {
        "N": N,
        "m": str(m),
        "table_lambda": table_lambda,
        "table_beta": table_beta,
        "S_lo": repr(S.value.lo),
        "S_hi": repr(S.value.hi),
        "I_lo": repr(I.value.lo),
        "I_hi": repr(I.value.hi),
        "margin": repr(I.value.lo - S.value.hi),
        "table_ok": None if row is None or closed else bool(S.value.hi <= row[0] and row[1] <= I.value.lo),
        "closed_form": certifier.closed_form_check(N) if closed else None,
    }


TABLE_COLUMNS = ("N", "m", "table_lambda", "table_beta", "S_lo", "S_hi", "I_lo", "I_hi", "margin", "table_ok", "closed_form")


def cmd_table(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    target = _prepare_out(cfg)
    started = time.time()
    rows = _run_jobs(_table_job, [(N, cfg.m, cfg.tol, cfg.max_depth) for N in cfg.dimensions], cfg.parallelism)
    text = _render(rows, TABLE_COLUMNS, cfg.fmt)
    ext = {"json": "json", "csv": "csv", "text": "txt"}[cfg.fmt]
    (target / f"table.{ext}").write_text(text)
    _write_metadata(target, cfg, started, {})
    stdout.write(text)
    if not all(float(r["margin"]) > 0 for r in rows) or any(r["table_ok"] is False or r["closed_form"] is False for r in rows):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ---------------------------------------------------------------------------
# branch

def _bound_for(N: int, tol: float) -> Optional[float]:
    """Certified lower end of S_N (or of the closed-form λ') that λ* must stay below."""
    if N < 13:
        return None
    if N >= 32:
        return certifier.closed_form_lambda(N).interval().lo
    return certifier.lambda_prime_enclosure(N, certifier.SEVEN_HALVES, tol=tol).value.lo


def _branch_job(args) -> tuple[dict, list, float]:
    N, tol, u0_max = args
    t0 = time.perf_counter()
    res = branch.continue_branch(N, u0_max=u0_max)
    bound = _bound_for(N, tol)
    summary = res.summary()
    summary["bound"] = None if bound is None else repr(bound)
    summary["bound_ok"] = None if bound is None else bool(res.lambda_star < bound)
    return summary, res.points, time.perf_counter() - t0


def cmd_branch(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    target = _prepare_out(cfg)
    started = time.time()
    u0_max = cfg.extra.get("u0_max", 12.0)
    results = _run_jobs(_branch_job, [(N, cfg.tol, u0_max) for N in cfg.dimensions], cfg.parallelism)
    code, timing, rows = EXIT_OK, {}, []
    for N, (summary, points, elapsed) in zip(cfg.dimensions, results):
        branch.write_csv(points, target / f"branch_N{N:03d}.csv")
        (target / f"branch_N{N:03d}.json").write_text(_dump({"schema": "extremal-cert/branch-summary/1", "result": summary}))
        timing[str(N)] = elapsed
        rows.append({k: summary[k] for k in ("N", "lambda_star", "fold_kind", "converged", "bound", "bound_ok")})
        if summary["bound_ok"] is False:
            code = EXIT_FALSIFIED
        elif not summary["converged"] and code == EXIT_OK:
            code = EXIT_INCONCLUSIVE
    _write_metadata(target, cfg, started, timing)
    stdout.write(_render(rows, ("N", "lambda_star", "fold_kind", "converged", "bound", "bound_ok"), cfg.fmt))
    return code


# ---------------------------------------------------------------------------
# hr-check

def _hr_job(N: int) -> dict:
    return {
        "N": N,
        "hr_constant_identity": certifier.hr_constant_identity(N),
        "phi_identity": certifier.phi_identity(N),
        "bessel": certifier.check_bessel_supersolution(N).to_json(),
        "vr_over_v": certifier.check_vr_over_v(N).to_json(),
        "domination": certifier.check_hr_domination(N).to_json(),
    }


HR_COLUMNS = ("N", "hr_constant_identity", "phi_identity", "bessel", "vr_over_v", "domination")


def cmd_hr_check(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    target = _prepare_out(cfg)
    started = time.time()
    results = _run_jobs(_hr_job, cfg.dimensions, cfg.parallelism)
    statuses, rows = [], []
    for res in results:
        (target / f"N{res['N']:03d}.json").write_text(_dump({"schema": "extremal-cert/hr-report/1", "result": res}))
        row = dict(res)
        for k in ("bessel", "vr_over_v", "domination"):
            row[k] = res[k]["status"]
            statuses.append(Status(res[k]["status"]))
        for k in ("hr_constant_identity", "phi_identity"):
            statuses.append(Status.CERTIFIED if res[k] else Status.FALSIFIED)
        rows.append(row)
    m = cfg.m if cfg.m is not None else certifier.SEVEN_HALVES
    threshold = certifier.classical_hr_threshold(m, tol=cfg.tol)
    (target / "classical_threshold.json").write_text(_dump({"m": str(m), "threshold": threshold}))
    _write_metadata(target, cfg, started, {})
    stdout.write(_render(rows, HR_COLUMNS, cfg.fmt))
    stdout.write(f"classical Hardy-Rellich threshold (m={m}): N >= {threshold}\n")
    return _exit_code(statuses)


COMMANDS = {"certify": cmd_certify, "table": cmd_table, "branch": cmd_branch, "hr-check": cmd_hr_check}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extremal-cert", description="Certified checks for Δ²u = λe^u on the unit ball.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--dims", default=DEFAULT_DIMS[name], help="e.g. 13..31 or 13,20,31")
        s.add_argument("--m", default=None, help="exponent of w_m, exact rational (default 7/2, or 2 for N >= 32)")
        s.add_argument("--tol", type=float, default=1e-6, help="relative branch-and-bound tolerance")
        s.add_argument("--max-depth", type=int, default=certifier.DEFAULT_MAX_DEPTH)
        s.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
        s.add_argument("--parallelism", type=int, default=1)
        s.add_argument("--out", type=Path, default=DEFAULT_OUT)
        s.add_argument("--force", action="store_true", help="overwrite an existing report directory")
        if name == "certify":
            s.add_argument("--lambda-prime", default=None, help="override λ' (rational)")
            s.add_argument("--beta", default=None, help="override β (rational)")
        if name == "branch":
            s.add_argument("--u0-max", type=float, default=12.0, help="stop continuation at this center value")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=ns.command,
        dimensions=parse_dims(ns.dims),
        m=None if ns.m is None else _fraction(ns.m),
        tol=ns.tol,
        max_depth=ns.max_depth,
        fmt=ns.fmt,
        parallelism=ns.parallelism,
        lambda_prime=getattr(ns, "lambda_prime", None),
        beta=getattr(ns, "beta", None),
        out=ns.out,
        force=ns.force,
    )
    if ns.command == "branch":
        cfg.extra["u0_max"] = ns.u0_max
    for v in (cfg.lambda_prime, cfg.beta):
        if v is not None:
            _fraction(v)
    cfg.validate()
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except certifier.UnsupportedDimension as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
