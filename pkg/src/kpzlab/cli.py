"""Command-line front end.

Every output file starts with ``# config: {...}`` echoing the full parameter
record, so reruns with the same config reproduce files byte for byte.
Exit codes: 0 success, 1 runtime error, 2 invalid config, 3 comparison failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_RUNTIME, EXIT_CONFIG, EXIT_FAILED = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _config_line(cfg: dict) -> str:
    return "# config: " + json.dumps(cfg, sort_keys=True, separators=(",", ":"))


def _write_table(path, cfg: dict, header: list[str], rows) -> None:
    lines = [_config_line(cfg), ",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def read_table(path):
    """Parse a file written by this tool into (config, header, columns)."""
    cfg = None
    header = None
    rows = []
    for line in Path(path).read_text().splitlines():
        if line.startswith("# config: "):
            cfg = json.loads(line[len("# config: ") :])
        elif line.startswith("#") or not line.strip():
            continue
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    if cfg is None or header is None:
        raise ConfigError(f"{path}: not a kpzlab sample file")
    data = np.array(rows, dtype=float).reshape(-1, len(header))
    return cfg, header, {h: data[:, i] for i, h in enumerate(header)}


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _public(args) -> dict:
    skip = {"func", "config", "out", "workers", "dat"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ------------------------------------------------------------------ commands


def cmd_sample_matrix(args) -> int:
    from .battery import matrix_samples

    if args.n is None:
        raise ConfigError("--n is required")
    if args.ensemble in ("gaussian", "matched") and args.beta not in (1, 2):
        raise ConfigError(f"dense {args.ensemble} ensemble is defined only for beta in {{1, 2}}")
    if args.ensemble == "tridiagonal" and args.beta <= 0:
        raise ConfigError("beta must be positive")
    if args.ensemble != "tridiagonal" and args.n > 2000:
        raise ConfigError("dense ensembles are capped at n = 2000; use --ensemble tridiagonal")
    beta = int(args.beta) if float(args.beta).is_integer() else args.beta
    vals, flags = matrix_samples(args.ensemble, args.n, beta, args.alpha, args.reps, args.seed, workers=args.workers)
    _write_table(args.out, _public(args), ["replica", "value", "overflow"], zip(range(args.reps), vals, flags))
    return EXIT_OK


def cmd_sample_airy(args) -> int:
    from .battery import kpz_samples
    from .edge import sample_airy_edge
    from .rand import SeedSpec

    if args.beta not in (1, 2):
        raise ConfigError("decorated Airy samples are defined for beta in {1, 2}")
    if args.quantity == "kpz":
        vals, bounds = kpz_samples(int(args.beta), args.alpha, args.reps, args.seed, n_sim=args.n_sim, k=args.k, workers=args.workers)
        rows = zip(range(args.reps), vals, bounds)
        header = ["replica", "value", "truncation_bound"]
    else:
        top = [sample_airy_edge(int(args.beta), 1, args.n_sim, SeedSpec(args.seed, i).generator()).points[0] for i in range(args.reps)]
        rows = zip(range(args.reps), top)
        header = ["replica", "value"]
    _write_table(args.out, _public(args), header, rows)
    return EXIT_OK


def cmd_sample_excursion(args) -> int:
    from .battery import kernel_samples

    if args.beta <= 0:
        raise ConfigError("beta must be positive")
    noise_seed = args.seed + 1 if args.noise_seed is None else args.noise_seed
    vals, ses, rej = kernel_samples(
        args.beta, args.alpha, args.reps, args.seed, noise_seed,
        n_excursions=args.inner_m, n_steps=args.n_steps, bin_width=args.bin_width, workers=args.workers,
    )
    cfg = _public(args)
    cfg["noise_seed"] = noise_seed
    _write_table(args.out, cfg, ["replica", "value", "se", "rejected"], zip(range(args.reps), vals, ses, rej))
    return EXIT_OK


def cmd_eval_laplace(args) -> int:
    from .fredholm import laplace_rhs_beta1_mc, laplace_rhs_beta2

    u = _floats(args.u_grid)
    if any(x < 0 for x in u):
        raise ConfigError("u must be >= 0")
    if args.beta == 2:
        rows = [(x, laplace_rhs_beta2(x, args.alpha, order=args.order)) for x in u]
        header = ["u", "value"]
    elif args.beta == 1:
        est = laplace_rhs_beta1_mc(u, args.alpha, args.reps, args.seed, n_sim=args.n_sim, k=args.k)
        rows = zip(est.u, est.estimate, est.se, est.lower)
        header = ["u", "value", "se", "lower"]
    else:
        raise ConfigError("eval-laplace supports beta in {1, 2}")
    _write_table(args.out, _public(args), header, rows)
    return EXIT_OK


def cmd_tw2(args) -> int:
    from .fredholm import tracy_widom_f2, tracy_widom_f2_moments

    s = np.linspace(args.s_min, args.s_max, args.points)
    f = tracy_widom_f2(s, order=args.order)
    cfg = _public(args)
    if args.moments:
        mean, var = tracy_widom_f2_moments(order=args.order)
        cfg["mean"], cfg["variance"] = mean, var
    _write_table(args.out, cfg, ["s", "F2"], zip(s, f))
    return EXIT_OK


_MATCH_KEYS = ("alpha", "beta")


def cmd_compare(args) -> int:
    from . import stats

    reports = []
    if args.battery:
        from .battery import BatteryConfig, desk_config, verification_matrix

        cfg = desk_config(seed=args.seed, workers=args.workers) if args.battery == "desk" else BatteryConfig(seed=args.seed, workers=args.workers)
        if args.tests:
            cfg.tests = tuple(t.strip() for t in args.tests.split(",") if t.strip())
        reports = verification_matrix(cfg)
        params = cfg.to_dict()
    else:
        if len(args.inputs) != 2:
            raise ConfigError("compare needs exactly two input files (or --battery)")
        (ca, _, a), (cb, _, b) = (read_table(p) for p in args.inputs)
        for key in _MATCH_KEYS:
            if key in ca and key in cb and ca[key] != cb[key]:
                raise ConfigError(f"parameter mismatch: {key}={ca[key]} vs {cb[key]}")
        x, y = a["value"], b["value"]
        reports.append(stats.ks_check(x, y, args.p_min, name="ks"))
        if args.u_grid:
            u = _floats(args.u_grid)
            ea = stats.empirical_laplace(x, u, args.n_bootstrap, args.seed)
            eb = stats.empirical_laplace(y, u, args.n_bootstrap, args.seed + 1)
            ok = stats.intervals_overlap(ea.lower, ea.upper, eb.lower, eb.upper)
            reports.append(stats.ComparisonReport("laplace", float(np.max(np.abs(ea.mean - eb.mean))), None, bool(np.all(ok)), 0.99,
                                                  details={"u": u, "a": ea.mean.tolist(), "b": eb.mean.tolist()}))
        params = {"inputs": [str(p) for p in args.inputs], "a": ca, "b": cb, "p_min": args.p_min}
        if args.dat:
            _write_ecdf_dat(args.dat, x, y)
    passed = all(r.passed for r in reports)
    doc = {"config": _public(args), "params": params, "passed": passed, "reports": [r.to_dict() for r in reports]}
    text = json.dumps(_jsonable(doc), sort_keys=True, indent=2) + "\n"
    if args.out is None or args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK if passed else EXIT_FAILED


def _write_ecdf_dat(prefix, x, y):
    for tag, v in (("a", x), ("b", y)):
        v = np.sort(v)
        p = np.arange(1, v.size + 1) / v.size
        Path(f"{prefix}_{tag}.dat").write_text("".join(f"{_fmt(s)} {_fmt(q)}\n" for s, q in zip(v, p)))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


# -------------------------------------------------------------------- parser


def _common(p, *, n=False, n_sim=False, k=False):
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--alpha", type=float, default=1.0)
    if n:
        p.add_argument("--n", type=int, default=None)
    if n_sim:
        p.add_argument("--n-sim", type=int, default=4000)
    if k:
        p.add_argument("--k", type=int, default=None)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None, help="key = value file; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kpzlab", description="Random-matrix and decorated-Airy representations of the KPZ one-point law.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-matrix", help="(1,1) moment functional of random matrices")
    _common(p, n=True)
    p.add_argument("--ensemble", choices=("gaussian", "matched", "tridiagonal"), default="tridiagonal")
    p.set_defaults(func=cmd_sample_matrix)

    p = sub.add_parser("sample-airy", help="decorated Airy sums (or largest Airy points)")
    _common(p, n_sim=True, k=True)
    p.add_argument("--quantity", choices=("kpz", "largest"), default="kpz")
    p.set_defaults(func=cmd_sample_airy)

    p = sub.add_parser("sample-excursion", help="excursion/white-noise kernel variable")
    _common(p)
    p.add_argument("--noise-seed", type=int, default=None)
    p.add_argument("--inner-m", type=int, default=2000)
    p.add_argument("--n-steps", type=int, default=256)
    p.add_argument("--bin-width", type=float, default=None)
    p.set_defaults(func=cmd_sample_excursion)

    p = sub.add_parser("eval-laplace", help="Fredholm (beta=2) or Monte Carlo (beta=1) Laplace transform")
    _common(p, n_sim=True, k=True)
    p.add_argument("--u-grid", default="0,0.1,0.25,0.5,1,2,4,8")
    p.add_argument("--order", type=int, default=80)
    p.set_defaults(func=cmd_eval_laplace)

    p = sub.add_parser("compare", help="compare two sample files or run the verification battery")
    _common(p)
    p.add_argument("inputs", nargs="*")
    p.add_argument("--p-min", type=float, default=0.01)
    p.add_argument("--u-grid", default=None)
    p.add_argument("--n-bootstrap", type=int, default=1000)
    p.add_argument("--battery", choices=("desk", "full"), default=None)
    p.add_argument("--tests", default=None, help="comma-separated battery subset")
    p.add_argument("--dat", default=None, help="prefix for empirical CDF .dat curves")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tw2", help="tabulate the Tracy-Widom GUE distribution")
    p.add_argument("--s-min", type=float, default=-8.0)
    p.add_argument("--s-max", type=float, default=4.0)
    p.add_argument("--points", type=int, default=121)
    p.add_argument("--order", type=int, default=64)
    p.add_argument("--moments", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--config", default=None)
    p.set_defaults(func=cmd_tw2)
    return parser


def _load_config_file(path) -> dict:
    cp = configparser.ConfigParser()
    text = Path(path).read_text()
    cp.read_string("[kpzlab]\n" + text)
    return {k.replace("-", "_"): v for k, v in cp["kpzlab"].items()}


def parse_args(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            values = _load_config_file(args.config)
        except (OSError, configparser.Error) as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, raw in values.items():
            if key not in known or key in ("config", "func", "help"):
                raise ConfigError(f"unknown config key {key!r}")
            act = known[key]
            if act.type is not None:
                try:
                    defaults[key] = act.type(raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key}: {raw!r}") from exc
            elif isinstance(act, argparse._StoreTrueAction):
                defaults[key] = raw.strip().lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = raw
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    if getattr(args, "reps", 0) < 0:
        raise ConfigError("--reps must be >= 0")
    return args


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_CONFIG
    except ConfigError as exc:
        print(f"kpzlab: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"kpzlab: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
