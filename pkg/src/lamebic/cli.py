"""Command-line interface: ``lamebic {bandedges,deform,verify,sweep}``.

CSV files carry ``#`` metadata lines followed by a column header; numbers
are written as ``%.16e`` (17 significant digits). ``verify`` writes
``report.json``, a flat JSON object with one key per line.

Exit codes: 0 ok, 1 verification failed, 2 configuration error, 3 output
not writable, 4 numerical failure in the deformation, 5 integrability
inconclusive (domain too short).
"""

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .darboux import build_chain
from .errors import InconclusiveError, LamebicError, UnsupportedError
from .grid import Grid, SampledFunction
from .lame import LameConfig, band_edge_states, lame_potential
from .spectral import lame_band_edges, recovery_deviations, verify_chain

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4
EXIT_INCONCLUSIVE = 5

EDGE_TOL = 1e-6
FMT = "%.16e"
DEFAULT_LAMBDAS = (1.0, 3.0, 10.0, 30.0, 100.0)


class ConfigError(Exception):
    pass


class CLIExit(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code = code
        self.kind = kind


@dataclass
class RunConfig:
    m: float = 0.5
    j: int = 2
    lam: float = 1.0
    lam1: float = 1.0
    x_max: float = 40.0
    n: int = 8001
    steps: int = 2
    out: Path = Path(".")
    lambdas: tuple = field(default=DEFAULT_LAMBDAS)

    def validate(self):
        if not (0.0 < self.m < 1.0):
            raise ConfigError(f"m must satisfy 0 < m < 1, got {self.m}")
        if self.j not in (1, 2):
            raise ConfigError(f"unsupported j={self.j}: only j=1 and j=2 are implemented")
        for name in ("lam", "lam1"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{'lambda' if name == 'lam' else 'lambda1'} must be > 0, got {v}")
        if not self.lambdas or any(not (math.isfinite(v) and v > 0) for v in self.lambdas):
            raise ConfigError(f"all sweep lambdas must be > 0, got {list(self.lambdas)}")
        if not (math.isfinite(self.x_max) and self.x_max > 0):
            raise ConfigError(f"xmax must be > 0, got {self.x_max}")
        if self.n < 9 or self.n % 2 == 0:
            raise ConfigError(f"n must be an odd integer >= 9, got {self.n}")
        if self.steps not in (1, 2):
            raise ConfigError(f"steps must be 1 or 2, got {self.steps}")
        return self

    @property
    def lame(self):
        return LameConfig(self.j, self.m)

    @property
    def grid(self):
        return Grid(self.x_max, self.n)

    def metadata(self):
        return {"m": self.m, "j": self.j, "lambda": self.lam, "lambda1": self.lam1,
                "x_max": self.x_max, "n": self.n, "h": self.grid.h}


# flag name -> (RunConfig field, parser)
def _parse_lambdas(text):
    return tuple(float(t) for t in str(text).replace(" ", "").split(",") if t)


KEYS = {
    "m": ("m", float),
    "j": ("j", int),
    "lambda": ("lam", float),
    "lambda1": ("lam1", float),
    "xmax": ("x_max", float),
    "n": ("n", int),
    "steps": ("steps", int),
    "out": ("out", Path),
    "lambdas": ("lambdas", _parse_lambdas),
}


def read_config_file(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lstrip("-")
        if not sep or key not in KEYS:
            raise ConfigError(f"{path}:{lineno}: expected one of {sorted(KEYS)} as key=value, got {raw.strip()!r}")
        values[key] = value.strip()
    return values


def build_config(args):
    settings = {}
    if args.config:
        settings.update(read_config_file(args.config))
    for key in KEYS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = v
    cfg = RunConfig()
    for key, raw in settings.items():
        attr, conv = KEYS[key]
        try:
            setattr(cfg, attr, conv(raw))
        except (TypeError, ValueError):
            raise ConfigError(f"invalid value for {key}: {raw!r}") from None
    return cfg.validate()


def _fmt(v):
    return FMT % v


def write_csv(path, columns, header, meta):
    lines = [f"# {k} = {v}" for k, v in meta.items()]
    lines.append(",".join(header))
    data = np.column_stack(columns)
    body = [",".join(FMT % v for v in row) for row in data]
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines + body) + "\n")
    except OSError as exc:
        raise CLIExit(EXIT_IO, "io", f"cannot write {path}: {exc.strerror}") from None


def _outdir(cfg):
    try:
        cfg.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CLIExit(EXIT_IO, "io", f"cannot create output directory {cfg.out}: {exc.strerror}") from None
    return cfg.out


def cmd_bandedges(cfg):
    out = _outdir(cfg)
    lame_cfg = cfg.lame
    g = cfg.grid
    states = band_edge_states(lame_cfg)
    meta = {"command": "bandedges", **cfg.metadata(), "delta": _fmt(lame_cfg.delta)}
    for s in states:
        meta[f"E{s.index}"] = _fmt(s.energy)
    cols = [g.x, lame_potential(lame_cfg, g.x)] + [s(g.x) for s in states]
    header = ["x", "V"] + [s.label for s in states]
    write_csv(out / "bandedges.csv", cols, header, meta)
    print(f"Lame band edges, j={lame_cfg.j}, m={lame_cfg.m:g}")
    print(f"{'state':<6} {'energy':>20}  {'psi(0)=0':<8}  form")
    for s in states:
        print(f"{s.label:<6} {s.energy:>20.12f}  {str(s.vanishes_at_origin):<8}  {s.formula}")
    return EXIT_OK


def _require_two_seeds(cfg):
    if cfg.j != 2:
        raise ConfigError(f"j={cfg.j} has a single half-line seed; deform, verify and sweep need j=2")


def _chain(cfg, lam, lam1, steps=None):
    try:
        return build_chain(cfg.lame, cfg.grid, lam, lam1, steps or cfg.steps)
    except LamebicError as exc:
        raise CLIExit(EXIT_NUMERICAL, "numerical", str(exc)) from None


def cmd_deform(cfg):
    _require_two_seeds(cfg)
    out = _outdir(cfg)
    chain = _chain(cfg, cfg.lam, cfg.lam1)
    g = cfg.grid
    V = chain.base_potential
    psi2, psi3 = chain.seeds
    base_meta = {"command": "deform", **cfg.metadata(), "steps": cfg.steps}
    s1 = chain.steps[0]
    files = [
        ("I0.csv", s1.I, None, "running integral of psi2^2"),
        ("V_tilde.csv", s1.V_out, V, "deformed potential, one step"),
        ("psi2_tilde.csv", s1.state_bound, psi2, "deformed psi2, one step"),
        ("psi3_tilde.csv", s1.state_partner_out, psi3, "deformed psi3, one step"),
    ]
    if cfg.steps == 2:
        s2 = chain.steps[1]
        files += [
            ("I1.csv", s2.I, None, "running integral of deformed psi3^2"),
            ("V_tildetilde.csv", s2.V_out, V, "deformed potential, two steps"),
            ("psi2_tt.csv", s2.state_partner_out, psi2, "deformed psi2, two steps"),
            ("psi3_tt.csv", s2.state_bound, psi3, "deformed psi3, two steps"),
        ]
    for name, f, ref, desc in files:
        meta = {**base_meta, "quantity": desc}
        if ref is None:
            write_csv(out / name, [g.x, f.values], ["x", "value"], meta)
        else:
            write_csv(out / name, [g.x, f.values, ref.values], ["x", "value", "undeformed_value"], meta)
        print(out / name)
    return EXIT_OK


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, Path):
        return str(v)
    return v


def cmd_verify(cfg):
    _require_two_seeds(cfg)
    out = _outdir(cfg)
    chain = _chain(cfg, cfg.lam, cfg.lam1)
    report = verify_chain(chain)
    scan = lame_band_edges(cfg.lame)
    analytic = [s.energy for s in band_edge_states(cfg.lame)]
    found = list(scan.edges)
    report.band_edges_found = found

    rec = {"format": "lamebic-report-1", "version": __version__, "kernel_backend": _kernels.BACKEND}
    rec.update({f"config.{k}": v for k, v in cfg.metadata().items()})
    rec["config.steps"] = cfg.steps
    for r in report.records:
        key = f"state.{r['step']}.{r['role']}"
        for field_ in ("label", "energy", "residual", "tail_ratio", "classification", "expected", "ok"):
            rec[f"{key}.{field_}"] = r[field_]
    edges_ok = len(found) == len(analytic)
    rec["edges.count_analytic"] = len(analytic)
    rec["edges.count_scan"] = len(found)
    for i, e in enumerate(analytic):
        nearest = min(found, key=lambda f: abs(f - e)) if found else float("nan")
        delta = abs(nearest - e)
        edges_ok = edges_ok and delta < EDGE_TOL
        rec[f"edge.{i}.analytic"] = e
        rec[f"edge.{i}.scan"] = nearest
        rec[f"edge.{i}.delta"] = delta
    rec["checks.states_ok"] = report.passed
    rec["checks.edges_ok"] = edges_ok
    for i, w in enumerate(report.warnings):
        rec[f"warning.{i}"] = w
    passed = report.passed and edges_ok
    rec["passed"] = passed

    text = json.dumps({k: _json_value(v) for k, v in rec.items()}, indent=0)
    try:
        (out / "report.json").write_text(text + "\n")
    except OSError as exc:
        raise CLIExit(EXIT_IO, "io", f"cannot write report: {exc.strerror}") from None

    for r in report.records:
        print(f"step {r['step']} {r['label']:<8} E={r['energy']:<6g} residual={r['residual']:.3e} "
              f"tail_ratio={r['tail_ratio']:.4f} {r['classification']:<12} "
              f"(expected {r['expected']}) {'ok' if r['ok'] else 'FAIL'}")
    for i, e in enumerate(analytic):
        print(f"edge {i}: analytic={e:.12f} scan={rec[f'edge.{i}.scan']:.12f} delta={rec[f'edge.{i}.delta']:.2e}")
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print("PASS" if passed else "FAIL")
    if report.warnings:
        raise CLIExit(EXIT_INCONCLUSIVE, "inconclusive", report.warnings[0])
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_sweep(cfg):
    _require_two_seeds(cfg)
    out = _outdir(cfg)
    rows = []
    for lam in cfg.lambdas:
        chain = _chain(cfg, lam, lam)
        rows.append((lam,) + recovery_deviations(chain))
    data = np.array(rows)
    meta = {"command": "sweep", **cfg.metadata(), "steps": cfg.steps, "lambda1": "equal to lambda",
            "window": "[0, 4K]"}
    meta.pop("lambda")
    write_csv(out / "sweep.csv", list(data.T),
              ["lambda", "max_dev_potential", "max_dev_psi2", "max_dev_psi3"], meta)
    print(f"{'lambda':>10} {'dev_V':>12} {'dev_psi2':>12} {'dev_psi3':>12}")
    for row in rows:
        print(f"{row[0]:>10g} {row[1]:>12.5e} {row[2]:>12.5e} {row[3]:>12.5e}")
    order = np.argsort(data[:, 0])
    monotone = bool(np.all(np.diff(data[order, 1:], axis=0) < 0))
    if not monotone:
        print("deviations are not strictly decreasing in lambda", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


COMMANDS = {"bandedges": cmd_bandedges, "deform": cmd_deform, "verify": cmd_verify, "sweep": cmd_sweep}


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--m", type=str, help="elliptic parameter, 0 < m < 1 (default 0.5)")
    common.add_argument("--j", type=str, help="Lamé order, 1 or 2 (default 2)")
    common.add_argument("--lambda", dest="lambda", type=str, help="first deformation parameter (default 1)")
    common.add_argument("--lambda1", type=str, help="second deformation parameter (default 1)")
    common.add_argument("--xmax", type=str, help="half-line length (default 40)")
    common.add_argument("--n", type=str, help="odd number of grid points (default 8001)")
    common.add_argument("--steps", type=str, help="number of deformations, 1 or 2 (default 2)")
    common.add_argument("--out", type=str, help="output directory (default .)")
    parser = argparse.ArgumentParser(
        prog="lamebic",
        description="Bound states at the band edges of the Lamé potential by Darboux deformation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("bandedges", parents=[common], help="closed-form band-edge states and energies")
    sub.add_parser("deform", parents=[common], help="write deformed potentials and states as CSV")
    sub.add_parser("verify", parents=[common], help="check residuals, integrability and band edges")
    sw = sub.add_parser("sweep", parents=[common], help="deviation from the undeformed system versus lambda")
    sw.add_argument("--lambdas", type=str, help="comma-separated lambda values (default 1,3,10,30,100)")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg)
    except (ConfigError, UnsupportedError) as exc:
        print(f"lamebic: error[config]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CLIExit as exc:
        print(f"lamebic: error[{exc.kind}]: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
