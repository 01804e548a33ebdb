"""Command-line driver writing CSV tables and JSON summaries.

Exit codes: 0 success, 1 a checked inequality or expectation failed,
2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import __version__
from . import diagnostics as diag
from . import kernels, mvbv
from .sequences import UnknownFamilyError, make_family
from .synthesis import PlanPolicy, sample_partial_sum

COMMANDS = ("check-mvbv", "kernels", "converge", "rate", "modulus")

CSV_COLUMNS = {
    "check-mvbv": ["m", "ratio"],
    "kernels": ["k", "norm_D", "norm_E", "log_k", "ratio_to_log"],
    "converge": ["n", "err", "err_bound", "coeff_log", "cond2", "flag"],
    "rate": ["n", "psi", "ratio_err", "ratio_best", "ratio_coeff"],
    "modulus": ["t", "omega"],
}

DEFAULT_GRIDS = {
    "check-mvbv": "2:4096:x2",
    "kernels": "2:4096:x2",
    "converge": "16:1024:x2",
    "rate": "16:1024:x2",
    "modulus": "",
}


class ConfigError(Exception):
    pass


def parse_grid(spec: str, kind=int) -> list:
    """``start:stop:xF`` (geometric), ``start:stop:+S`` (arithmetic) or ``a,b,c``.

    Bounds are inclusive.
    """
    spec = str(spec).strip()
    if not spec:
        raise ConfigError("empty grid")
    try:
        if ":" not in spec:
            out = [kind(v) for v in spec.split(",") if v.strip()]
        else:
            start_s, stop_s, step_s = spec.split(":")
            start, stop = kind(start_s), kind(stop_s)
            out = []
            if step_s.startswith("x"):
                factor = kind(step_s[1:])
                if factor <= 1 or start <= 0:
                    raise ConfigError(f"geometric grid needs factor > 1 and start > 0: {spec}")
                v = start
                while v <= stop * (1 + 1e-12):
                    out.append(v)
                    v = v * factor
            elif step_s.startswith("+"):
                step = kind(step_s[1:])
                if step <= 0:
                    raise ConfigError(f"arithmetic grid needs a positive step: {spec}")
                i = 0
                while start + i * step <= stop * (1 + 1e-12) + 1e-12:
                    out.append(start + i * step)
                    i += 1
            else:
                raise ConfigError(f"grid step must look like xF or +S: {spec}")
    except ValueError as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}") from None
    if not out:
        raise ConfigError(f"grid {spec!r} is empty")
    return out


@dataclass
class ExperimentConfig:
    command: str
    family: dict = field(default_factory=lambda: {"family_id": "inv_n", "params": {}})
    lam: float = 2.0
    mu: float = 1.5
    grid: str = ""
    ref_ratio: int = 16
    m_ratio: int = 8
    k_cap: int = 2 ** 20
    psi: str = "inverse:1"
    r: int = 0
    t_grid: str = "0:3.14159:+0.2"
    order: int = 256
    check_lower_bound: bool = False
    expect: str = ""
    out: str = ""
    csv: str = ""
    out_dir: str = ""

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.lam >= 2:
            raise ConfigError(f"lambda must be >= 2, got {self.lam}")
        if not 1 < self.mu <= 2:
            raise ConfigError(f"mu must lie in (1, 2], got {self.mu}")
        if self.ref_ratio < 2 or self.m_ratio < 8:
            raise ConfigError("ref_ratio must be >= 2 and m_ratio >= 8")
        if not self.grid:
            self.grid = DEFAULT_GRIDS[self.command]
        if self.command != "modulus":
            parse_grid(self.grid)
        try:
            make_family(self.family)
        except (UnknownFamilyError, ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        return self

    def policy(self) -> PlanPolicy:
        return PlanPolicy(self.ref_ratio, self.m_ratio, self.mu, self.k_cap)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


def _fmt(v: Any) -> str:
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "%.12g" % v
    if hasattr(v, "item"):
        return _fmt(v.item())
    return str(v)


def csv_text(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _jsonable(o):
    if isinstance(o, dict):
        return {str(k): _jsonable(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_jsonable(v) for v in o]
    if hasattr(o, "item"):
        o = o.item()
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    return o


def json_text(payload: dict) -> str:
    return json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_outputs(cfg: ExperimentConfig, rows: list[dict], summary: dict) -> None:
    """Write the CSV table and JSON summary to the configured paths."""
    csv_body = csv_text(rows, CSV_COLUMNS[cfg.command])
    payload = {"tool": "l1fourier", "version": __version__, "config": cfg.to_dict(),
               **summary}
    js = json_text(payload)
    targets = []
    if cfg.out_dir:
        d = Path(cfg.out_dir)
        targets += [(d / f"{cfg.command}.csv", csv_body), (d / f"{cfg.command}.json", js)]
    if cfg.out:
        targets.append((Path(cfg.out), js))
    if cfg.csv:
        targets.append((Path(cfg.csv), csv_body))
    if not targets:
        sys.stdout.write(csv_body)
        return
    for path, body in targets:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
        except OSError as exc:
            raise ConfigError(f"cannot write {path}: {exc}") from None


def _make_psi(cfg: ExperimentConfig, seq) -> diag.Psi:
    kind, _, arg = cfg.psi.partition(":")
    try:
        if kind == "inverse":
            return diag.psi_inverse(float(arg or 1))
        if kind == "power":
            return diag.psi_power(float(arg or 1))
        if kind == "geometric":
            return diag.psi_geometric(float(arg or 2))
        if kind == "smoothness":
            r = int(arg or cfg.r or 1)
            if not diag.derivative_summable(seq, r):
                raise ConfigError(f"{seq.family_id}: derivative series of order {r} not summable")
            return diag.smoothness_psi(seq, r, cfg.policy())
    except ValueError as exc:
        raise ConfigError(f"bad psi {cfg.psi!r}: {exc}") from None
    raise ConfigError(f"unknown psi {cfg.psi!r}; use inverse:p, power:p, geometric:b or smoothness:r")


def _run_check_mvbv(cfg):
    seq = make_family(cfg.family)
    rep = mvbv.mvbv_scan(seq, parse_grid(cfg.grid), cfg.lam)
    failed = bool(cfg.expect) and rep.verdict != cfg.expect
    return rep.rows(), {"report": rep.to_dict(), "verdict": rep.verdict}, failed


def _run_kernels(cfg):
    ks = parse_grid(cfg.grid)
    if min(ks) < 2:
        raise ConfigError("kernel grid must start at k >= 2")
    rows = kernels.kernel_table(ks)
    summary = {"rows": len(rows)}
    failed = False
    if cfg.check_lower_bound:
        lb = kernels.lower_bound_check(ks)
        summary["lower_bound_pass"] = lb["pass"]
        failed = not lb["pass"]
    r = [row["ratio_to_log"] for row in rows]
    summary["ratio_to_log_spread"] = max(r) / min(r)
    return rows, summary, failed


def _run_converge(cfg):
    seq = make_family(cfg.family)
    grid = parse_grid(cfg.grid)
    tr = diag.convergence_trace(seq, grid, cfg.policy())
    summary = {"verdict": tr.verdict, "trace": tr.to_dict()}
    failed = False
    if seq.real_nonneg:
        checks = [diag.lemma2_check(seq, n, cfg.policy()) for n in grid]
        summary["lemma2"] = checks
        failed = not all(c["pass"] for c in checks)
    return tr.rows(), summary, failed


def _run_rate(cfg):
    seq = make_family(cfg.family)
    psi = _make_psi(cfg, seq)
    try:
        rep = diag.rate_check(seq, psi, parse_grid(cfg.grid), cfg.mu, cfg.policy())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    failed = rep.doubling_ok and not rep.consistent
    return rep.rows(), {"report": rep.to_dict()}, failed


def _run_modulus(cfg):
    seq = make_family(cfg.family)
    plan = cfg.policy().plan(cfg.order)
    vals = sample_partial_sum(seq, plan.N_ref, plan.M)
    ts = parse_grid(cfg.t_grid, float)
    if any(not 0 <= t <= math.pi for t in ts):
        raise ConfigError("t grid must lie in [0, pi]")
    om = [diag.modulus_of_continuity(vals, t) for t in ts]
    rows = [{"t": t, "omega": w} for t, w in zip(ts, om)]
    monotone = all(b >= a for a, b in zip(om, om[1:]))
    return rows, {"nondecreasing": monotone, "N_ref": plan.N_ref, "M": plan.M}, not monotone


RUNNERS = {
    "check-mvbv": _run_check_mvbv,
    "kernels": _run_kernels,
    "converge": _run_converge,
    "rate": _run_rate,
    "modulus": _run_modulus,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="l1fourier", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--config", help="TOML file; top-level keys plus one section per command")
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--family")
    p.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--coeffs", help="comma-separated cosine coefficients a_0,a_1,... (finite)")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--mu", type=float)
    for flag in ("--m", "--k", "--n"):
        p.add_argument(flag, dest="grid", help="grid start:stop:xF, start:stop:+S or a,b,c")
    p.add_argument("--ref-ratio", type=int)
    p.add_argument("--m-ratio", type=int)
    p.add_argument("--k-cap", type=int)
    p.add_argument("--psi", help="inverse:p, power:p, geometric:b or smoothness:r")
    p.add_argument("--t", dest="t_grid")
    p.add_argument("--order", type=int, help="synthesis order for the modulus command")
    p.add_argument("--check-lower-bound", action="store_true", default=None)
    p.add_argument("--expect", help="expected MVBV verdict; mismatch exits 1")
    p.add_argument("--out", help="JSON summary path")
    p.add_argument("--csv", help="CSV table path")
    p.add_argument("--out-dir", help="directory for <command>.csv and <command>.json")
    return p


def _param_value(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def load_config(argv) -> ExperimentConfig:
    args = build_parser().parse_args(argv)
    data: dict = {}
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                raw = tomllib.load(fh)
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        command = args.command or raw.get("command")
        data = {k: v for k, v in raw.items() if not isinstance(v, dict) or k == "params"}
        if command in raw and isinstance(raw[command], dict):
            data.update(raw[command])
        data["command"] = command
    elif args.command:
        data["command"] = args.command
    if args.command:
        data["command"] = args.command
    if not data.get("command"):
        raise ConfigError("no command given")
    # family descriptor: `family = "inv_log"` with `params = {...}`
    fam = data.pop("family", None)
    params = dict(data.pop("params", {}) or {})
    if isinstance(fam, dict):
        family = {"family_id": fam.get("family_id", fam.get("family")),
                  "params": dict(fam.get("params", {}))}
    else:
        family = {"family_id": fam or "inv_n", "params": params}
    if args.family:
        family = {"family_id": args.family, "params": {}}
    for item in args.param:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        family["params"][name] = _param_value(value)
    if args.coeffs:
        try:
            family["params"]["coeffs"] = [float(v) for v in args.coeffs.split(",")]
        except ValueError:
            raise ConfigError(f"bad --coeffs {args.coeffs!r}") from None
    data["family"] = family
    for alias in ("m", "k", "n", "n_grid", "m_grid", "k_grid"):
        if alias in data:
            data.setdefault("grid", data.pop(alias))
    if "t" in data:
        data["t_grid"] = data.pop("t")
    if "lambda" in data:
        data["lam"] = data.pop("lambda")
    for key in ("lam", "mu", "grid", "ref_ratio", "m_ratio", "k_cap", "psi", "t_grid",
                "order", "check_lower_bound", "expect", "out", "csv", "out_dir"):
        v = getattr(args, key)
        if v is not None:
            data[key] = v
    try:
        cfg = ExperimentConfig.from_dict(data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        cfg = load_config(argv)
        rows, summary, failed = RUNNERS[cfg.command](cfg)
        write_outputs(cfg, rows, summary)
    except ConfigError as exc:
        print(f"l1fourier: error: {exc}", file=sys.stderr)
        return 2
    if failed:
        print(f"l1fourier: {cfg.command}: check failed", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())
