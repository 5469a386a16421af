"""Command-line front end.

Subcommands: ``test`` (run a hypothesis test on a CSV dataset),
``simulate`` (null tables and size/power studies), ``calibrate``
(bootstrap null distribution for a dataset), ``bandwidth`` (multi-scale
bandwidth selection) and ``kernel-constants``.

Exit codes: 0 ok, 2 configuration error, 3 data error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import secrets
import sys

import numpy as np

from .dataio import ingest_csv
from .errors import ConfigError, DataError, NumericalError, SelrError
from .estfun import parse_g_spec
from .kernels import kernel_by_name, kernel_constants, tabulated_kernel
from .montecarlo import (
    SimulationConfig,
    moment_match,
    null_table,
    size_power_study,
)
from .selr import (
    Hypothesis,
    bootstrap_null,
    const_coef,
    select_bandwidth,
    selr_test,
    zero_coef,
)

__all__ = ["main", "build_parser"]


def _read_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selrtest")
    parser.add_argument("--config", help="key=value defaults file; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kernel(p):
        p.add_argument("--kernel", default="triweight")
        p.add_argument("--tabulated-kernel", help="two-column file (t, K(t))")

    kc = sub.add_parser("kernel-constants", help="print calibration constants")
    add_kernel(kc)

    t = sub.add_parser("test", help="run a test on a CSV dataset")
    t.add_argument("--input", required=True)
    t.add_argument("--h", type=float, required=True)
    t.add_argument("--g", default="identity")
    add_kernel(t)
    t.add_argument("--null", default="zero",
                   help="zero | const:<v1,v2,...> (simple null)")
    t.add_argument("--gof", action="store_true", help="goodness-of-fit test")
    t.add_argument("--no-estimated-coefficients", action="store_true")
    t.add_argument("--fix", help="composite null: idx=value[,idx=value...] (0-based)")
    t.add_argument("--bootstrap", type=int, default=0, metavar="B")
    t.add_argument("--scheme", default="gaussian",
                   choices=["gaussian", "wild", "resample"])
    t.add_argument("--seed", type=int)
    t.add_argument("--omega", help="lo,hi testing interval")
    t.add_argument("--include-full-term", action="store_true")
    t.add_argument("--output", help="JSON report path")
    t.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("simulate", help="simulation studies")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--table1", action="store_true", help="null mean/sd table")
    mode.add_argument("--power", action="store_true", help="size/power study")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--c0", type=float, default=1.0)
    s.add_argument("--c1", type=float, default=0.0)
    s.add_argument("--reps", type=int, default=500)
    s.add_argument("--seed", type=int)
    add_kernel(s)
    s.add_argument("--alternative", default="linear", choices=["linear", "sine"])
    s.add_argument("--r-grid", default="0,0.4,0.8,1.2")
    s.add_argument("--threshold-selr", type=float)
    s.add_argument("--threshold-f", type=float)
    s.add_argument("--level", type=float, default=0.05)
    s.add_argument("--output", help="CSV output path")
    s.add_argument("--plot-data", help="plot-ready whitespace-column file")
    s.add_argument("--threads", type=int, default=1)

    c = sub.add_parser("calibrate", help="bootstrap null distribution")
    c.add_argument("--input", required=True)
    c.add_argument("--h", type=float, required=True)
    c.add_argument("--g", default="identity")
    add_kernel(c)
    c.add_argument("--null", default="zero")
    c.add_argument("--bootstrap", type=int, default=199, metavar="B")
    c.add_argument("--scheme", default="gaussian",
                   choices=["gaussian", "wild", "resample"])
    c.add_argument("--seed", type=int)
    c.add_argument("--omega")
    c.add_argument("--output")

    b = sub.add_parser("bandwidth", help="multi-scale bandwidth selection")
    b.add_argument("--input", required=True)
    b.add_argument("--grid", required=True, help="h1,h2,...")
    b.add_argument("--g", default="identity")
    add_kernel(b)
    b.add_argument("--null", default="zero")
    b.add_argument("--bootstrap", type=int, default=0, metavar="B")
    b.add_argument("--scheme", default="gaussian",
                   choices=["gaussian", "wild", "resample"])
    b.add_argument("--seed", type=int)
    b.add_argument("--omega")
    b.add_argument("--output")
    return parser


def _kernel_from(args):
    if args.tabulated_kernel:
        table = np.loadtxt(args.tabulated_kernel)
        if table.ndim != 2 or table.shape[1] != 2:
            raise DataError("tabulated kernel file needs two columns (t, K(t))")
        return tabulated_kernel(table[:, 0], table[:, 1])
    return kernel_by_name(args.kernel)


def _omega_from(args):
    if getattr(args, "omega", None) is None:
        return None
    try:
        lo, hi = (float(v) for v in args.omega.split(","))
    except ValueError:
        raise ConfigError(f"bad --omega {args.omega!r}; expected lo,hi") from None
    return (lo, hi)


def _null_coefs(spec: str, p: int):
    if spec == "zero":
        return [zero_coef()] * p
    if spec.startswith("const:"):
        vals = [float(v) for v in spec[len("const:"):].split(",")]
        if len(vals) != p:
            raise ConfigError(f"--null const needs {p} values")
        return [const_coef(v) for v in vals]
    raise ConfigError(f"unknown --null spec {spec!r}")


def _hypothesis_from(args, data):
    omega = _omega_from(args)
    if getattr(args, "gof", False):
        return Hypothesis.goodness_of_fit(
            omega=omega,
            no_estimated_coefficients=getattr(args, "no_estimated_coefficients", False),
        )
    if getattr(args, "fix", None):
        pairs = []
        for item in args.fix.split(","):
            idx, _, val = item.partition("=")
            if not val:
                raise ConfigError(f"bad --fix entry {item!r}; expected idx=value")
            pairs.append((int(idx), float(val)))
        a10 = [const_coef(v) for _, v in pairs]
        return Hypothesis.composite(a10, [i for i, _ in pairs], omega=omega)
    return Hypothesis.simple(_null_coefs(args.null, data.p), omega=omega)


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    seed = secrets.randbelow(2**31)
    print(f"seed: {seed} (drawn; pass --seed {seed} to reproduce)")
    return seed


def _write_report(report: dict, path: str | None) -> None:
    doc = dict(report)
    doc["metadata"] = {
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat()
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_kernel_constants(args) -> int:
    kern = _kernel_from(args)
    consts = kernel_constants(kern)
    print(f"kernel: {kern.family}")
    print(f"mu2: {consts.mu2:.10g}")
    print(f"kstar0: {consts.kstar0:.10g}")
    print(f"kstar_l2: {consts.kstar_l2:.10g}")
    print(f"r_K: {consts.r_K:.10g}")
    print(f"c_K: {consts.c_K:.10g}")
    return 0


def _cmd_test(args) -> int:
    data = ingest_csv(args.input)
    kern = _kernel_from(args)
    g = parse_g_spec(args.g)
    spec = _hypothesis_from(args, data)
    include_full = True if args.include_full_term else None
    result = selr_test(data, kern, args.h, g, spec, include_full_term=include_full)
    if args.bootstrap > 0:
        seed = _resolve_seed(args)
        _, p_boot = bootstrap_null(
            data, kern, args.h, g, spec, B=args.bootstrap, scheme=args.scheme,
            seed=seed, include_full_term=include_full, observed=result.statistic,
        )
        result.p_bootstrap = p_boot
        result.B = args.bootstrap
    _write_report(result.to_dict(), args.output)
    return 0


def _cmd_simulate(args) -> int:
    seed = _resolve_seed(args)
    if args.table1:
        config = SimulationConfig(
            n=args.n, c0=args.c0, c1=args.c1, reps=args.reps,
            seed=seed, kernel=args.kernel,
        )
        rows = null_table([config], n_jobs=args.threads)
        out = sys.stdout if not args.output else open(args.output, "w", newline="")
        try:
            writer = csv.writer(out)
            writer.writerow(["n", "h", "variance", "mu", "sigma", "reps"])
            for row in rows:
                writer.writerow(
                    [row.n, f"{row.h:.5f}", row.variance_label,
                     f"{row.mu:.4f}", f"{row.sigma:.4f}", row.reps]
                )
        finally:
            if args.output:
                out.close()
        return 0
    # size/power study
    config = SimulationConfig(
        n=args.n, c0=args.c0, c1=args.c1, reps=args.reps, seed=seed,
        kernel=args.kernel, alternative=args.alternative,
    )
    r_grid = [float(v) for v in args.r_grid.split(",")]
    thresholds = None
    if args.threshold_selr is not None and args.threshold_f is not None:
        thresholds = {0: (args.threshold_selr, args.threshold_f)}
    rows = size_power_study([config], r_grid, thresholds=thresholds,
                            level=args.level, n_jobs=args.threads)
    out = sys.stdout if not args.output else open(args.output, "w", newline="")
    try:
        writer = csv.writer(out)
        writer.writerow(["n", "h", "c1", "r", "power_selr", "power_f"])
        for row in rows:
            writer.writerow([row.n, f"{row.h:.5f}", row.c1, row.r,
                             f"{row.power_selr:.4f}", f"{row.power_f:.4f}"])
    finally:
        if args.output:
            out.close()
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            fh.write(f"# power curves: n={args.n} h={config.h:.5f} c1={args.c1}\n")
            fh.write("# r power_selr power_f\n")
            for row in rows:
                fh.write(f"{row.r:g} {row.power_selr:.4f} {row.power_f:.4f}\n")
    return 0


def _cmd_calibrate(args) -> int:
    data = ingest_csv(args.input)
    kern = _kernel_from(args)
    g = parse_g_spec(args.g)
    spec = _hypothesis_from(args, data)
    seed = _resolve_seed(args)
    result = selr_test(data, kern, args.h, g, spec)
    sample, p = bootstrap_null(
        data, kern, args.h, g, spec, B=args.bootstrap,
        scheme=args.scheme, seed=seed, observed=result.statistic,
    )
    report = result.to_dict()
    report["p_bootstrap"] = p
    report["B"] = args.bootstrap
    report["null_sample"] = [float(v) for v in sample]
    _write_report(report, args.output)
    return 0


def _cmd_bandwidth(args) -> int:
    data = ingest_csv(args.input)
    kern = _kernel_from(args)
    g = parse_g_spec(args.g)
    spec = _hypothesis_from(args, data)
    grid = [float(v) for v in args.grid.split(",")]
    seed = _resolve_seed(args) if args.bootstrap > 0 else 0
    sel = select_bandwidth(data, kern, g, spec, grid, B=args.bootstrap,
                           scheme=args.scheme, seed=seed)
    report = {
        "h_selected": sel.h,
        "statistic": sel.statistic,
        "per_h": {f"{h:g}": v for h, v in sel.per_h.items()},
        "p_bootstrap": sel.p_bootstrap,
    }
    _write_report(report, args.output)
    return 0


_COMMANDS = {
    "kernel-constants": _cmd_kernel_constants,
    "test": _cmd_test,
    "simulate": _cmd_simulate,
    "calibrate": _cmd_calibrate,
    "bandwidth": _cmd_bandwidth,
}


def main(argv=None) -> int:
    parser = build_parser()
    # apply config-file defaults before the real parse; explicit flags win.
    # the pre-scan must not enforce required flags, so it only knows --config
    pre_parser = argparse.ArgumentParser(add_help=False)
    pre_parser.add_argument("--config")
    pre, _ = pre_parser.parse_known_args(argv)
    if pre.config:
        try:
            defaults = _read_config_file(pre.config)
        except ConfigError as exc:
            print(f"error[config]: {exc}", file=sys.stderr)
            return 2
        sub_action = next(
            a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
        )
        for sp in sub_action.choices.values():
            for action in sp._actions:
                if action.dest not in defaults:
                    continue
                value = defaults[action.dest]
                if action.type is not None:
                    value = action.type(value)
                elif isinstance(action.default, bool):
                    value = value.lower() in ("1", "true", "yes")
                sp.set_defaults(**{action.dest: value})
                action.required = False
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error[config]: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error[data]: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"error[numerical]: {exc}", file=sys.stderr)
        return 4
    except SelrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
