"""Command-line entry point.

    heckescope coeffs   --form delta --upto 7
    heckescope scan     --form delta --n 1 --x 100000 --shape powerlog:1 --bound t1:0.1
    heckescope minorize --I "[-1,-0.1]" --M 4
    heckescope density  --form delta --m 2 --d 13 --x 1000000
    heckescope satotate --I full --x 1000000 --y 100000
    heckescope ledger   --q 3 --x 10000 --y 1000 --w 1000
    heckescope config show

Settings resolve as command-line flag, then HECKESCOPE_<NAME> environment
variable, then the built-in default.  Exit status is 0 on success, 1 when an
invariant or certificate check fails and 2 for usage or range errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, fields, replace
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .cache import load_or_build
from .chebyshev import IntervalUnion, build_I_q, build_J_q
from .density import delta1_reference, density_rows_csv, estimate_density
from .eigenform import DeligneBoundError, LucasDivisibilityError, get_form, hecke_powers
from .experiments import (BoundSpec, parse_bound, sato_tate_short_sum, scan_interval,
                          valuation_ledger)
from .minorize import Infeasible, MinorizationCert, MinorizeOptions, minorize, verify_cert
from .primes import FactorBudget, IntervalSpec, interval_length, is_probable_prime, parse_shape

EXIT_OK, EXIT_INVARIANT, EXIT_USAGE = 0, 1, 2


class InvariantFailure(RuntimeError):
    pass


def _default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


@dataclass(frozen=True)
class RunConfig:
    form: str = "delta"
    n_max: int = 0  # 0: size the table to the command
    cache_dir: str = ""
    seed: int = 0
    format: str = "csv"
    output: str = ""
    precision: int = 128
    workers: int = 0  # 0: available parallelism
    trial_bound: int = 10 ** 4
    rho_iterations: int = 1 << 20
    rho_restarts: int = 4
    mr_rounds: int = 64
    lp_nodes: int = 512
    lp_refine: int = 100_000
    lp_violation_tol: float = 1e-10
    lp_max_rounds: int = 100
    verify_grid: int = 1_000_000
    verify_tol: float = 1e-9

    @property
    def budget(self) -> FactorBudget:
        return FactorBudget(self.trial_bound, self.rho_iterations, self.rho_restarts,
                            self.mr_rounds, self.seed)

    @property
    def lp_options(self) -> MinorizeOptions:
        return MinorizeOptions(nodes=self.lp_nodes, refine=self.lp_refine,
                               violation_tol=self.lp_violation_tol, max_rounds=self.lp_max_rounds)

    @property
    def worker_count(self) -> int:
        return self.workers or _default_workers()


_CONFIG_HELP = {
    "form": "eigenform label (delta, k16, k18, k20, k22, k26) or weight",
    "n_max": "coefficient table size (0 sizes it to the command)",
    "cache_dir": "directory for cached coefficient tables (empty disables caching)",
    "seed": "seed for randomized primality and factoring",
    "format": "csv or json",
    "output": "write result files into this directory instead of stdout",
    "precision": "mpmath precision in bits",
    "workers": "factoring processes (0 uses all available)",
    "trial_bound": "trial-division bound before Pollard rho",
    "rho_iterations": "Pollard rho iterations per cofactor",
    "rho_restarts": "Pollard rho restarts per cofactor",
    "mr_rounds": "Miller-Rabin rounds above the deterministic range",
    "lp_nodes": "initial Chebyshev nodes for the minorant LP",
    "lp_refine": "grid size for locating LP violations",
    "lp_violation_tol": "stop exchanging points below this violation",
    "lp_max_rounds": "cap on exchange rounds",
    "verify_grid": "fresh grid size for certificate verification",
    "verify_tol": "accepted certificate margin (in absolute value)",
}


def _convert(f, text: str):
    kind = type(f.default)
    if kind is int:
        return int(float(text)) if "e" in text.lower() else int(text)
    if kind is float:
        return float(text)
    return text


def resolve_config(ns: argparse.Namespace, environ=None) -> RunConfig:
    """Flags beat HECKESCOPE_* environment variables, which beat defaults."""
    environ = os.environ if environ is None else environ
    values = {}
    for f in fields(RunConfig):
        flag = getattr(ns, f.name, None)
        env = environ.get(f"HECKESCOPE_{f.name.upper()}")
        if flag is not None:
            values[f.name] = flag
        elif env is not None and env != "":
            try:
                values[f.name] = _convert(f, env)
            except ValueError as exc:
                raise ValueError(f"HECKESCOPE_{f.name.upper()}={env!r}: {exc}") from None
    cfg = replace(RunConfig(), **values)
    if cfg.format not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, not {cfg.format!r}")
    if cfg.precision < 53:
        raise ValueError("precision must be at least 53 bits")
    if cfg.n_max < 0 or cfg.workers < 0:
        raise ValueError("n_max and workers must be non-negative")
    get_form(int(cfg.form) if cfg.form.isdigit() else cfg.form)
    return cfg


# ---------------------------------------------------------------- helpers

def _form_key(cfg: RunConfig):
    return int(cfg.form) if cfg.form.isdigit() else cfg.form


def _table(cfg: RunConfig, needed: int):
    if cfg.n_max and cfg.n_max < needed:
        raise IndexError(f"command needs coefficients up to {needed}, n_max={cfg.n_max}")
    return load_or_build(_form_key(cfg), max(needed, cfg.n_max), cfg.cache_dir or None)


def parse_interval(text: str) -> IntervalUnion:
    """``full``, ``I:q``, ``J:q``, ``[a,b]`` or a JSON list of pairs."""
    t = text.strip().lower()
    if t == "full":
        return IntervalUnion.full()
    if t.startswith(("i:", "j:")):
        q = int(t[2:])
        return build_I_q(q) if t[0] == "i" else build_J_q(q)[1]
    data = json.loads(t)
    if data and not isinstance(data[0], list):
        data = [data]
    return IntervalUnion.from_pairs([tuple(pair) for pair in data])


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


class Emitter:
    """Sends results to stdout, or to files under --output with a header comment on CSVs."""

    def __init__(self, cfg: RunConfig, command: str, argv: list[str]):
        self.cfg = cfg
        self.command = command
        self.argv = argv
        self.written: list[Path] = []

    def emit(self, name: str, text: str) -> None:
        if not self.cfg.output:
            sys.stdout.write(text)
            return
        out = Path(self.cfg.output)
        out.mkdir(parents=True, exist_ok=True)
        path = out / name
        if name.endswith(".csv"):
            stamp = datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
            text = f"# heckescope {__version__} {' '.join(self.argv)} at {stamp}\n" + text
        path.write_text(text)
        self.written.append(path)

    def result(self, stem: str, csv_text: str | None, json_text: str | None) -> None:
        """Write both forms with --output; otherwise print the one --format asks for."""
        if self.cfg.output:
            if csv_text is not None:
                self.emit(stem + ".csv", csv_text)
            if json_text is not None:
                self.emit(stem + ".json", json_text)
        elif self.cfg.format == "json" or csv_text is None:
            self.emit(stem + ".json", json_text)
        else:
            self.emit(stem + ".csv", csv_text)


# ---------------------------------------------------------------- commands

def cmd_coeffs(args, cfg: RunConfig, out: Emitter) -> int:
    if args.prime is not None:
        p = args.prime
        if p < 2 or not is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        powers = args.power or [1]
        if min(powers) < 0:
            raise ValueError("powers must be non-negative")
        table = _table(cfg, p)
        series = hecke_powers(table.a(p), p, table.weight, max(powers))
        rows = [(p, m, series[m]) for m in powers]
        csv_text = _csv(("p", "m", "a"), rows)
        json_text = _json({"form": table.form.label, "weight": table.weight,
                           "values": [{"p": p, "m": m, "a": str(v)} for p, m, v in rows]})
    else:
        if args.upto is None or args.upto < 1:
            raise ValueError("--upto must be at least 1")
        table = _table(cfg, args.upto)
        rows = [(n, table.a(n)) for n in range(1, args.upto + 1)]
        csv_text = _csv(("n", "a"), rows)
        json_text = _json({"form": table.form.label, "weight": table.weight,
                           "coefficients": [str(v) for _, v in rows]})
    out.result("coeffs", csv_text, json_text)
    return EXIT_OK


def _scan_bound(args, cfg) -> BoundSpec:
    if args.cert:
        cert = MinorizationCert.from_json(Path(args.cert).read_text())
        opts = parse_bound(args.bound, 1)
        if opts.theorem != "T2":
            raise ValueError("--cert only applies to t2 bounds")
        return BoundSpec.t2_from_cert(opts.eps, args.n, cert, opts.c)
    return parse_bound(args.bound, args.n)


def cmd_scan(args, cfg: RunConfig, out: Emitter) -> int:
    if args.n < 1:
        raise ValueError("--n must be at least 1")
    spec = IntervalSpec(args.x, parse_shape(args.shape))
    y = interval_length(spec)
    bound = _scan_bound(args, cfg)
    bound.evaluate(args.x)  # range check before building anything
    table = _table(cfg, args.x + y)
    report = scan_interval(table, args.n, spec, bound, cfg.budget, reduce=args.reduce,
                           precision=cfg.precision, workers=cfg.worker_count)
    out.result("scan", report.to_csv(), report.summary_json() + "\n")
    return EXIT_OK


def cmd_minorize(args, cfg: RunConfig, out: Emitter) -> int:
    if args.M < 0 or args.M > 63:
        raise ValueError("--M must be in [0, 63]")
    I = parse_interval(args.I)
    res = minorize(I, args.M, cfg.lp_options)
    if isinstance(res, Infeasible):
        summary = {"status": "infeasible", "target": I.to_json(), "M": res.M, "b0": res.b0,
                   "rounds": res.rounds}
        out.result("minorize", _csv(("status", "M", "b0"), [("infeasible", res.M, repr(res.b0))]),
                   _json(summary))
        return EXIT_OK
    check = verify_cert(res, cfg.verify_grid, cfg.verify_tol)
    summary = {"status": "certified" if check.accepted else "rejected",
               "cert": res.to_json(), "b0": res.b0,
               "verify": {"margin": check.margin, "grid_size": check.grid_size,
                          "accepted": check.accepted, "lipschitz": check.lipschitz,
                          "between_grid_bound": check.between_grid_bound}}
    rows = [(n, repr(v)) for n, v in enumerate(res.b)]
    out.result("minorize", _csv(("n", "b"), rows), _json(summary))
    if out.cfg.output:
        out.emit("cert.json", res.dumps() + "\n")
    if not check.accepted:
        raise InvariantFailure(f"certificate margin {check.margin:.3e} fails verification")
    return EXIT_OK


def cmd_density(args, cfg: RunConfig, out: Emitter) -> int:
    if args.m < 0 or args.x < 2 or min(args.d) < 2:
        raise ValueError("need m >= 0, x >= 2 and every d >= 2")
    table = _table(cfg, args.x)
    estimates = [estimate_density(table, args.m, d, args.x) for d in args.d]
    rows = []
    for e in estimates:
        ref = delta1_reference(e.d, table.form) if args.m == 1 and is_probable_prime(e.d) else None
        rows.append({"form": e.form.label, "m": e.m, "d": e.d, "x": e.x, "count": e.count,
                     "pi_x": e.pi_x, "ratio": e.ratio,
                     "expected": None if e.expected is None else str(e.expected),
                     "std_err": e.std_err, "deviation": e.deviation(), "flag": e.flag(),
                     "reference_band": list(ref.band) if ref else None})
    out.result("density", density_rows_csv(estimates), _json(rows))
    return EXIT_OK


def cmd_satotate(args, cfg: RunConfig, out: Emitter) -> int:
    if args.x < 2 or args.y < 1:
        raise ValueError("need x >= 2 and y >= 1")
    I = parse_interval(args.I)
    cert = MinorizationCert.from_json(Path(args.cert).read_text()) if args.cert else None
    table = _table(cfg, args.x + args.y)
    s = sato_tate_short_sum(table, I, args.x, args.y, cfg.precision, cert)
    summary = {"target": I.to_json(), "x": args.x, "y": args.y, "S": s.S, "normalized": s.normalized,
               "mu_st": s.mu_st, "primes": s.primes, "endpoint_ties": s.endpoint_ties, "b0": s.b0}
    row = (json.dumps(I.to_json()), args.x, args.y, repr(s.S), repr(s.normalized),
           repr(s.mu_st), s.primes, s.endpoint_ties)
    out.result("satotate", _csv(("target", "x", "y", "S", "normalized", "mu_st", "primes",
                                 "endpoint_ties"), [row]), _json(summary))
    return EXIT_OK


def cmd_ledger(args, cfg: RunConfig, out: Emitter) -> int:
    if args.q < 2 or not is_probable_prime(args.q):
        raise ValueError("--q must be prime")
    if args.x < 2 or args.y < 1 or args.w < 2:
        raise ValueError("need x >= 2, y >= 1 and w >= 2")
    table = _table(cfg, args.x + args.y)
    led = valuation_ledger(table, args.q, args.x, args.y, args.w, cfg.budget,
                           workers=cfg.worker_count)
    rows = [(ell, led.nu.get(ell, 0), bnd, int(led.nu.get(ell, 0) <= bnd))
            for ell, bnd in sorted(led.ledger_bounds.items())]
    out.result("ledger", _csv(("ell", "nu", "bound", "holds"), rows), _json(led.summary()))
    if not led.inequality_holds:
        raise InvariantFailure(f"ledger inequality fails at ell in {led.inequality_failures}")
    if not led.product_identity or led.full_residual > 1e-6:
        raise InvariantFailure(f"log balance off by {led.full_residual:.3e}")
    return EXIT_OK


def cmd_config(args, cfg: RunConfig, out: Emitter) -> int:
    d = asdict(cfg)
    d["workers_effective"] = cfg.worker_count
    if cfg.format == "json":
        sys.stdout.write(_json(d))
    else:
        sys.stdout.write(_csv(("key", "value"), sorted(d.items())))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("run configuration")
    for f in fields(RunConfig):
        kind = type(f.default)
        flag = "--" + f.name.replace("_", "-")
        kw = {"dest": f.name, "default": argparse.SUPPRESS, "help": _CONFIG_HELP[f.name]}
        if f.name == "format":
            kw["choices"] = ("csv", "json")
        g.add_argument(flag, type=(lambda s: int(float(s))) if kind is int else kind, **kw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _add_config_flags(common)
    parser = argparse.ArgumentParser(prog="heckescope", parents=[common],
                                     description="Prime-power coefficients of level-one eigenforms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="list a_f(n) or a_f(p^m)")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--upto", type=int, help="print a_f(1..N)")
    grp.add_argument("--prime", type=int, help="print a_f(p^m) for this prime")
    p.add_argument("--power", type=int, nargs="+", help="exponents m for --prime (default 1)")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("scan", parents=[common], help="largest prime factors over (x, x + y]")
    p.add_argument("--n", type=int, default=1, help="exponent n in a_f(p^n)")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--shape", default="powerlog:1",
                   help="powerlog:A, halfeps:eps, eta or fixed:y")
    p.add_argument("--bound", default="t1:0.1", help="t1:eps, t2:eps[:c[:b]] or t3[:c]")
    p.add_argument("--reduce", action="store_true",
                   help="factor a_f(p^(q-1)) with q the largest prime dividing n + 1")
    p.add_argument("--cert", help="minorant certificate JSON supplying b for t2 bounds")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("minorize", parents=[common], help="Sym^M minorant of an interval")
    p.add_argument("--I", dest="I", default="full",
                   help='"[a,b]", a JSON list of pairs, full, I:q or J:q')
    p.add_argument("--M", dest="M", type=int, required=True)
    p.set_defaults(func=cmd_minorize)

    p = sub.add_parser("density", parents=[common], help="pi_{f,m}(x, d) / pi(x)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, nargs="+", required=True)
    p.add_argument("--x", type=int, required=True)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("satotate", parents=[common], help="sum of log p with lambda_f(p) in I")
    p.add_argument("--I", dest="I", default="full")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--cert", help="minorant certificate JSON to report b_0 alongside")
    p.set_defaults(func=cmd_satotate)

    p = sub.add_parser("ledger", parents=[common], help="valuation ledger for a_f(p^(q-1))")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--y", type=int, required=True)
    p.add_argument("--w", type=int, default=1000, help="smoothness bound")
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("config", parents=[common], help="show resolved settings")
    p.add_argument("action", choices=("show",))
    p.set_defaults(func=cmd_config)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg, Emitter(cfg, args.command, argv))
    except (DeligneBoundError, LucasDivisibilityError, InvariantFailure, AssertionError) as exc:
        print(f"heckescope: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, IndexError, KeyError, OSError) as exc:
        print(f"heckescope: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
