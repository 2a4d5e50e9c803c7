"""Sample generators keyed by replica and the configurable verification battery."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np

from . import stats
from .edge import kpz_sample
from .excursion import kernel_mean, kernel_rv_sample, sample_noise
from .fredholm import first_moment_target, laplace_rhs_beta1_mc, laplace_rhs_beta2
from .matrices import dense_functional_sample, tridiagonal_functional_sample
from .rand import SeedSpec, replica_map

# Seeds for different generators are separated by this offset in stream_id
# space so that a single master seed can drive a whole battery.
_STREAM_BLOCK = 1 << 40


def _kpz_one(spec: SeedSpec, beta, alpha, k, n_sim):
    return kpz_sample(beta, alpha, k, n_sim, spec.generator(), return_bound=True)


def kpz_samples(beta, alpha, reps, seed, *, n_sim=4000, k=None, workers=1, first_replica=0):
    """Values and truncation bounds of ``reps`` decorated-Airy draws."""
    out = replica_map(partial(_kpz_one, beta=beta, alpha=alpha, k=k, n_sim=n_sim), reps, seed, workers, first_replica)
    if not out:
        return np.empty(0), np.empty(0)
    v, b = zip(*out)
    return np.array(v), np.array(b)


def _matrix_one(spec: SeedSpec, ensemble, n, beta, alpha):
    rng = spec.generator()
    if ensemble == "tridiagonal":
        return tridiagonal_functional_sample(n, beta, alpha, rng, with_flag=True)
    return dense_functional_sample(n, beta, alpha, rng, ensemble, with_flag=True)


def matrix_samples(ensemble, n, beta, alpha, reps, seed, *, workers=1, first_replica=0):
    """(1,1) functional draws and per-draw overflow flags."""
    out = replica_map(partial(_matrix_one, ensemble=ensemble, n=n, beta=beta, alpha=alpha), reps, seed, workers, first_replica)
    if not out:
        return np.empty(0), np.empty(0, dtype=bool)
    v, f = zip(*out)
    return np.array(v), np.array(f, dtype=bool)


def _kernel_one(spec: SeedSpec, beta, alpha, n_excursions, n_steps, noise_seed, bin_width):
    noise = sample_noise(alpha, SeedSpec(noise_seed, spec.stream_id).generator(), bin_width=bin_width)
    r = kernel_rv_sample(beta, alpha, noise, n_excursions, n_steps, spec.generator())
    return r.value, r.se, r.n_rejected


def kernel_samples(beta, alpha, reps, seed, noise_seed, *, n_excursions=2000, n_steps=256, bin_width=None, workers=1, first_replica=0):
    """Excursion/noise kernel draws: replica i uses noise stream (noise_seed, i)
    and excursion stream (seed, i).  Returns (values, inner SEs, rejections)."""
    fn = partial(_kernel_one, beta=beta, alpha=alpha, n_excursions=n_excursions, n_steps=n_steps, noise_seed=noise_seed, bin_width=bin_width)
    out = replica_map(fn, reps, seed, workers, first_replica)
    if not out:
        return np.empty(0), np.empty(0), np.empty(0, dtype=int)
    v, s, r = zip(*out)
    return np.array(v), np.array(s), np.array(r, dtype=int)


@dataclass
class BatteryConfig:
    tests: tuple = ("moments", "laplace_beta2", "laplace_beta1", "matrix_vs_airy", "universality", "kernel_vs_airy")
    seed: int = 2024
    alpha: float = 1.0
    matrix_alpha: float = 0.5
    reps: int = 2000
    laplace_reps: int = 10000
    n_sim: int = 4000
    n_matrix: int = 100000
    n_dense: int = 400
    u_grid: tuple = (0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
    n_bootstrap: int = 1000
    level: float = 0.99
    beta1_reps: int = 4000
    kernel_reps: int = 1000
    inner_m: int = 2000
    n_steps: int = 256
    kernel_bin_width: float | None = None
    mean_excursions: int = 100000
    mean_steps: int = 8192
    p_min: float = 0.01
    se_multiplier: float = 3.0
    finite_n_allowance: float = 0.10
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _seed(cfg, slot):
    # distinct master seed per generator role
    return (cfg.seed * 1000003 + slot) % (1 << 63)


def _t_moments(cfg):
    target = first_moment_target(cfg.alpha)
    kpz, _ = kpz_samples(2, cfg.alpha, cfg.laplace_reps, _seed(cfg, 1), n_sim=cfg.n_sim, workers=cfg.workers)
    mat, _ = matrix_samples("gaussian", cfg.n_dense, 2, cfg.alpha, cfg.reps, _seed(cfg, 2), workers=cfg.workers)
    km = kernel_mean(2, cfg.alpha, cfg.mean_excursions, cfg.mean_steps, SeedSpec(_seed(cfg, 3), 0))
    out = [
        stats.moment_check(kpz, target, cfg.se_multiplier, name="moment/kpz_sample"),
        stats.moment_check(mat, target, cfg.se_multiplier, name="moment/matrix_functional", rel_allowance=cfg.finite_n_allowance),
    ]
    gap = abs(km.value - target)
    out.append(
        stats.ComparisonReport(
            "moment/kernel_mean",
            gap / km.se,
            None,
            bool(gap <= cfg.se_multiplier * km.se),
            cfg.se_multiplier,
            details={"mean": km.value, "se": km.se, "target": target},
        )
    )
    return out


def _t_laplace_beta2(cfg):
    kpz, _ = kpz_samples(2, cfg.alpha, cfg.laplace_reps, _seed(cfg, 1), n_sim=cfg.n_sim, workers=cfg.workers)
    exact = [laplace_rhs_beta2(u, cfg.alpha) for u in cfg.u_grid]
    return [stats.laplace_check(kpz, cfg.u_grid, exact, cfg.n_bootstrap, SeedSpec(_seed(cfg, 4), 0), cfg.level, name="laplace/beta2")]


def _t_laplace_beta1(cfg):
    kpz, _ = kpz_samples(1, cfg.alpha, cfg.laplace_reps, _seed(cfg, 5), n_sim=cfg.n_sim, workers=cfg.workers)
    est = stats.empirical_laplace(kpz, cfg.u_grid, cfg.n_bootstrap, SeedSpec(_seed(cfg, 6), 0), cfg.level)
    mc = laplace_rhs_beta1_mc(cfg.u_grid, cfg.alpha, cfg.beta1_reps, _seed(cfg, 7), n_sim=cfg.n_sim)
    z = _normal_quantile(cfg.level)
    ok = stats.intervals_overlap(est.lower, est.upper, mc.lower - z * mc.se, mc.upper + z * mc.se)
    return [
        stats.ComparisonReport(
            "laplace/beta1",
            float(np.max(np.abs(est.mean - mc.estimate))),
            None,
            bool(np.all(ok)),
            cfg.level,
            details={"u": list(cfg.u_grid), "sample": est.mean.tolist(), "rhs": mc.estimate.tolist(), "rhs_se": mc.se.tolist()},
        )
    ]


def _normal_quantile(level):
    from scipy.stats import norm

    return float(norm.ppf(0.5 + level / 2.0))


def _t_matrix_vs_airy(cfg):
    out = []
    for beta in (2, 1):
        mat, _ = matrix_samples("tridiagonal", cfg.n_matrix, beta, cfg.matrix_alpha, cfg.reps, _seed(cfg, 10 + beta), workers=cfg.workers)
        kpz, _ = kpz_samples(beta, cfg.matrix_alpha, cfg.reps, _seed(cfg, 20 + beta), n_sim=cfg.n_sim, workers=cfg.workers)
        # the matrix functional carries N/beta, the decorated sum 2/beta^2 chi^2_beta
        out.append(stats.ks_check(mat, kpz, cfg.p_min, name=f"ks/matrix_vs_airy/beta{beta}"))
    return out


def _t_universality(cfg):
    out = []
    for beta in (1, 2):
        g, _ = matrix_samples("gaussian", cfg.n_dense, beta, cfg.alpha, cfg.reps, _seed(cfg, 30 + beta), workers=cfg.workers)
        w, _ = matrix_samples("matched", cfg.n_dense, beta, cfg.alpha, cfg.reps, _seed(cfg, 40 + beta), workers=cfg.workers)
        out.append(stats.ks_check(g, w, cfg.p_min, name=f"ks/universality/beta{beta}"))
    return out


def _t_kernel_vs_airy(cfg):
    vals, _, rej = kernel_samples(
        2, cfg.alpha, cfg.kernel_reps, _seed(cfg, 50), _seed(cfg, 51),
        n_excursions=cfg.inner_m, n_steps=cfg.n_steps, bin_width=cfg.kernel_bin_width, workers=cfg.workers,
    )
    kpz, _ = kpz_samples(2, cfg.alpha, cfg.kernel_reps, _seed(cfg, 52), n_sim=cfg.n_sim, workers=cfg.workers)
    rep = stats.ks_check(vals, kpz, cfg.p_min, name="ks/kernel_vs_airy")
    rep.details["rejected_excursions"] = int(rej.sum())
    return [rep]


BATTERY = {
    "moments": _t_moments,
    "laplace_beta2": _t_laplace_beta2,
    "laplace_beta1": _t_laplace_beta1,
    "matrix_vs_airy": _t_matrix_vs_airy,
    "universality": _t_universality,
    "kernel_vs_airy": _t_kernel_vs_airy,
}


def desk_config(**overrides) -> BatteryConfig:
    """A reduced battery that runs in a few minutes on one core."""
    small = dict(
        reps=300, laplace_reps=3000, n_matrix=20000, beta1_reps=1500, kernel_reps=200, inner_m=500,
        n_bootstrap=400, mean_excursions=20000, mean_steps=2048,
    )
    small.update(overrides)
    return BatteryConfig(**small)


def verification_matrix(config: BatteryConfig) -> list[stats.ComparisonReport]:
    """Run each configured test; a failing generator stops the run and its
    exception carries the reports gathered so far as ``partial_report``."""
    reports: list[stats.ComparisonReport] = []
    for name in config.tests:
        if name not in BATTERY:
            raise ValueError(f"unknown battery test {name!r}")
        try:
            reports.extend(BATTERY[name](config))
        except Exception as exc:
            exc.partial_report = list(reports)
            raise
    for r in reports:
        r.params = {"alpha": config.alpha, "seed": config.seed}
    return reports
