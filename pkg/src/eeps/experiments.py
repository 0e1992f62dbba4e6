"""Experiment drivers: disorder sweeps, finite-size extrapolation, CSV output.

Each run_* function takes an ExperimentConfig and writes one CSV file.
Output is deterministic for a fixed seed and independent of the worker
count: every task derives its RNG stream from (seed, task index) and
results are merged in task order.  CSV files start with '#'-prefixed
metadata lines (tool version and effective config), then a header row.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import __version__
from .bell import (
    bell_count,
    bell_expected_s,
    combine_moments,
    erasure_from_moments,
    excitation_moments,
    select_near_cut,
)
from .entropy import Bipartition, OrbitalSet, correlation_matrix, entanglement_entropy, slater_entropy
from .manybody import (
    SectorBasis,
    build_sector_hamiltonian,
    cut_adjacent_product_state,
    many_body_ee,
    select_max_overlap_eigenstate,
)
from .models import ChainSpec, build_hamiltonian, derived_seed_sequence, diagonalize, plane_wave
from .two_particle import (
    analyze_pair,
    pair_with_overlap,
    tb_ee_asymptotic,
    tb_sigma,
    tb_two_particle_ee,
)

EXPERIMENTS = (
    "anderson-erasure",
    "mbl-erasure",
    "tb-bands",
    "erasure-factor",
    "bell-oracle",
    "two-particle",
)

ERASURE_MODELS = ("bell", "tight-binding", "staggered", "anderson", "central-site")


@dataclass(frozen=True)
class ExperimentConfig:
    """Effective parameters of one experiment run."""

    experiment: str
    L: tuple[int, ...] = ()
    N: tuple[int, ...] = ()
    filling: tuple[float, ...] = (0.25, 0.5, 0.75)
    W: tuple[float, ...] = ()
    V: float = 2.0
    mu: float = 1.0
    coupling: float = 1.0
    models: tuple[str, ...] = ERASURE_MODELS
    realizations: int = 20
    samples: int = 1000
    seed: int = 1
    out: str = "eeps_out.csv"
    svg: bool = False
    threads: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        for name in ("realizations", "samples", "threads"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if any(not 0.0 < f <= 1.0 for f in self.filling):
            raise ValueError("fillings must lie in (0, 1]")
        bad = [m for m in self.models if m not in ERASURE_MODELS]
        if bad:
            raise ValueError(f"unknown models: {bad}")


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def write_csv(path: str, header: list[str], rows: list[tuple], config: ExperimentConfig) -> None:
    """Write rows with '#' metadata lines; '.' decimal, UTF-8, comma-separated."""
    meta = " ".join(
        f"{k}={getattr(config, k)!r}".replace(" ", "")
        for k in (
            "experiment", "L", "N", "filling", "W", "V", "mu", "coupling",
            "models", "realizations", "samples", "seed",
        )
    )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(f"# eeps {__version__}\n")
            f.write(f"# config: {meta}\n")
            f.write(",".join(header) + "\n")
            for row in rows:
                f.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def _parallel_map(fn, items, threads: int) -> list:
    """Order-preserving map over a thread pool (order-independent result)."""
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _task_seed(seed: int, task: int) -> int:
    """64-bit seed for a worker task, derived from the experiment seed."""
    state = derived_seed_sequence(seed, task).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


def _mean_stderr(values: np.ndarray) -> tuple[float, float]:
    values = np.asarray(values, dtype=float)
    n = len(values)
    mean = float(np.mean(values))
    if n < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(n))


# ---------------------------------------------------------------------------
# tb-bands (discrete two-particle EE bands of the clean chain)


def run_tb_bands(config: ExperimentConfig) -> str:
    L = config.L[0] if config.L else 4096
    if L % 2 != 0:
        raise ValueError("tb-bands needs even L")
    bands = tuple(config.N) if config.N else tuple(range(1, 10))
    part = Bipartition.half_chain(L)

    def one(n: int):
        pair = OrbitalSet((plane_wave(L, 0), plane_wave(L, n)))
        ee_numeric = entanglement_entropy(correlation_matrix(pair, part))
        return (n, L, tb_sigma(n), ee_numeric, tb_two_particle_ee(n), tb_ee_asymptotic(n))

    rows = _parallel_map(one, bands, config.threads)
    header = ["n", "L", "sigma", "ee_numeric", "ee_closed_form", "ee_asymptotic"]
    write_csv(config.out, header, rows, config)
    return config.out


# ---------------------------------------------------------------------------
# anderson-erasure (joint EE of near-cut eigenstates vs particle number)


def fit_decay_rate(N: np.ndarray, mean_ee: np.ndarray, floor: float = 1e-6) -> float:
    """Least-squares slope magnitude of log EE vs N where EE > floor."""
    mask = mean_ee > floor
    if np.sum(mask) < 2:
        return float("nan")
    slope = np.polyfit(N[mask], np.log(mean_ee[mask]), 1)[0]
    return float(-slope)


def run_anderson_erasure(config: ExperimentConfig) -> str:
    L = config.L[0] if config.L else 4096
    Ws = tuple(config.W) if config.W else (4.0, 8.0)
    Ns = tuple(config.N) if config.N else tuple(range(2, 34, 2))
    part = Bipartition.half_chain(L)
    positive = [n for n in Ns if n > 0]

    def one(task_args):
        task, W = task_args
        spec = ChainSpec(L=L, disorder_width=W, potential_kind="random_uniform")
        basis = diagonalize(build_hamiltonian(spec, seed=_task_seed(config.seed, task)))
        out = []
        for n in positive:
            ee = slater_entropy(select_near_cut(basis, part, n), part)
            out.append(ee)
        return out

    tasks = [(iw * config.realizations + r, W) for iw, W in enumerate(Ws) for r in range(config.realizations)]
    per_task = _parallel_map(one, tasks, config.threads)

    rows = []
    for iw, W in enumerate(Ws):
        block = np.array(per_task[iw * config.realizations : (iw + 1) * config.realizations])
        means = np.array([np.mean(block[:, j]) for j in range(len(positive))])
        lam = fit_decay_rate(np.array(positive, dtype=float), means)
        for n in Ns:
            if n == 0:
                rows.append((W, 0, 0.0, 0.0, float("-inf"), lam))
                continue
            j = positive.index(n)
            mean, se = _mean_stderr(block[:, j])
            mean_log = float(np.mean(np.log2(np.maximum(block[:, j], 1e-300))))
            rows.append((W, n, mean, se, mean_log, lam))
    header = ["W", "N", "mean_ee", "stderr", "mean_log2_ee", "lambda_fit"]
    write_csv(config.out, header, rows, config)
    return config.out


# ---------------------------------------------------------------------------
# erasure-factor (universal law r_inf = 1 - N/L)


def _erasure_basis(model: str, L: int, config: ExperimentConfig, seed: int):
    if model == "tight-binding":
        spec = ChainSpec(L=L, boundary="periodic")
    elif model == "staggered":
        spec = ChainSpec(L=L, boundary="periodic", potential_kind="staggered", mu=config.mu)
    elif model == "anderson":
        W = config.W[0] if config.W else 2.0
        spec = ChainSpec(L=L, disorder_width=W, potential_kind="random_uniform")
    elif model == "central-site":
        W = config.W[0] if config.W else 2.0
        spec = ChainSpec(
            L=L,
            disorder_width=W,
            potential_kind="random_uniform",
            central_site_coupling=config.coupling,
        )
    else:
        raise ValueError(f"unknown sampled model {model!r}")
    return diagonalize(build_hamiltonian(spec, seed=seed))


def extrapolate_to_thermodynamic_limit(
    L: np.ndarray, r: np.ndarray, stderr: np.ndarray
) -> tuple[float, float]:
    """Weighted affine fit of r against 1/(L-1); returns intercept and its error.

    1/(L-1) rather than 1/L makes the Bell value (L-N)/(L-1) exactly
    affine, so the exact path extrapolates to 1 - N/L with no bias.
    """
    if len(L) < 3:
        raise ValueError("extrapolation needs at least 3 system sizes")
    x = 1.0 / (np.asarray(L, dtype=float) - 1.0)
    X = np.column_stack([np.ones_like(x), x])
    if np.all(stderr > 0):
        w = 1.0 / np.asarray(stderr) ** 2
    else:
        w = np.ones_like(x)
    XtWX = X.T @ (w[:, None] * X)
    cov = np.linalg.inv(XtWX)
    beta = cov @ (X.T @ (w * r))
    if np.all(stderr > 0):
        intercept_err = math.sqrt(cov[0, 0])
    else:
        resid = r - X @ beta
        dof = max(len(L) - 2, 1)
        sigma2 = float(resid @ resid) / dof
        intercept_err = math.sqrt(sigma2 * cov[0, 0])
    return float(beta[0]), float(intercept_err)


def run_erasure_factor(config: ExperimentConfig) -> str:
    Ls = tuple(config.L) if config.L else (128, 256, 512, 1024)
    if len(set(Ls)) < 3:
        raise ValueError("erasure-factor needs at least 3 distinct L values")
    disordered = {"anderson", "central-site"}

    def particle_number(f: float, L: int) -> int:
        n = max(int(round(f * L)), 1)
        if n % 2 != 0:  # the Bell combinatorics needs even N; keep all models comparable
            n += 1 if n + 1 <= L else -1
        return n

    def one(task_args):
        task, model, f, L = task_args
        N = particle_number(f, L)
        if model == "bell":
            r = (L - N) / (L - 1)
            return (r, 0.0)
        basis = None
        part = None
        if model in disordered:
            reals = config.realizations
            moments = []
            for rlz in range(reals):
                basis = _erasure_basis(model, L, config, _task_seed(config.seed, 1000 * task + rlz))
                part = Bipartition(basis.matrix.shape[1], tuple(range(L // 2)))
                per = max(config.samples // reals, 1)
                moments.append(
                    excitation_moments(
                        basis, part, N, per, _task_seed(config.seed, 1000 * task + 500 + rlz)
                    )
                )
            est = erasure_from_moments(combine_moments(moments))
        else:
            basis = _erasure_basis(model, L, config, _task_seed(config.seed, task))
            part = Bipartition.half_chain(L)
            est = erasure_from_moments(
                excitation_moments(basis, part, N, config.samples, _task_seed(config.seed, task))
            )
        return (est.ratio, est.std_error)

    grid = [
        (i, model, f, L)
        for i, (model, f, L) in enumerate(
            (m, f, L) for m in config.models for f in config.filling for L in sorted(set(Ls))
        )
    ]
    results = _parallel_map(one, grid, config.threads)

    rows = []
    n_L = len(set(Ls))
    for g in range(0, len(grid), n_L):
        chunk = grid[g : g + n_L]
        vals = results[g : g + n_L]
        model, f = chunk[0][1], chunk[0][2]
        Lvals = np.array([c[3] for c in chunk], dtype=float)
        r = np.array([v[0] for v in vals])
        se = np.array([v[1] for v in vals])
        r_inf, r_inf_se = extrapolate_to_thermodynamic_limit(Lvals, r, se)
        for (_, _, _, L), (ri, si) in zip(chunk, vals):
            rows.append((model, f, L, ri, si, r_inf, r_inf_se))
    header = ["model", "filling", "L", "r", "stderr", "r_inf", "r_inf_stderr"]
    write_csv(config.out, header, rows, config)
    return config.out


# ---------------------------------------------------------------------------
# mbl-erasure (interacting chain, Fig.-1-inset style)


def run_mbl_erasure(config: ExperimentConfig) -> str:
    L = config.L[0] if config.L else 12
    Ws = tuple(config.W) if config.W else (2.0, 16.0)
    Ns = tuple(config.N) if config.N else (2, 4, 6)
    part = Bipartition.half_chain(L)

    def one(task_args):
        task, W, N = task_args
        spec = ChainSpec(L=L, disorder_width=W, potential_kind="random_uniform")
        seed = _task_seed(config.seed, task)
        H = build_sector_hamiltonian(spec, config.V, N, seed=seed)
        basis = SectorBasis.build(L, N)
        target = cut_adjacent_product_state(basis, part)
        chosen = select_max_overlap_eigenstate(H, target)
        overlap = float(np.dot(chosen.amplitudes, target.amplitudes) ** 2)
        return (many_body_ee(chosen, part), overlap)

    tasks = [
        ((iw * len(Ns) + j) * config.realizations + r, W, N)
        for iw, W in enumerate(Ws)
        for j, N in enumerate(Ns)
        for r in range(config.realizations)
    ]
    results = _parallel_map(one, tasks, config.threads)

    rows = []
    idx = 0
    for W in Ws:
        for N in Ns:
            block = results[idx : idx + config.realizations]
            idx += config.realizations
            ee = np.array([b[0] for b in block])
            ov = np.array([b[1] for b in block])
            mean, se = _mean_stderr(ee)
            rows.append((W, W / 2.0, N, mean, se, float(np.mean(ov))))
    header = ["W", "W_over_2t", "N", "mean_ee", "stderr", "mean_overlap"]
    write_csv(config.out, header, rows, config)
    return config.out


# ---------------------------------------------------------------------------
# bell-oracle (exact combinatorics vs Monte Carlo)


def run_bell_oracle(config: ExperimentConfig) -> str:
    Ls = tuple(config.L) if config.L else (4, 8, 12)
    if any(L > 24 or L % 2 for L in Ls):
        raise ValueError("bell-oracle needs even L <= 24")

    rows = []
    for iL, L in enumerate(Ls):
        Ns = tuple(n for n in config.N if n <= L) if config.N else (max(2, (L // 2) & ~1),)
        for N in Ns:
            total = math.comb(L, N)
            counts = {s: bell_count(s, N, L) for s in range(0, min(N, L // 2) + 1, 2)}
            exact_mean = sum(s * c for s, c in counts.items()) / total
            formula_mean = float(bell_expected_s(N, L))
            pairs = L // 2
            rng_seed = _task_seed(config.seed, iL * 100 + N)
            rng = np.random.default_rng(np.random.SeedSequence(entropy=rng_seed))
            draws = np.empty(config.samples)
            for i in range(config.samples):
                chosen = rng.choice(L, size=N, replace=False)
                occ = np.zeros(pairs, dtype=int)
                np.add.at(occ, chosen // 2, 1)
                draws[i] = np.sum(occ == 1)
            mc_mean, mc_se = _mean_stderr(draws)
            for s, c in counts.items():
                rows.append((L, N, s, c, exact_mean, formula_mean, mc_mean, mc_se))
    header = ["L", "N", "s", "n_of_s", "exact_mean_s", "formula_mean_s", "mc_mean_s", "mc_stderr"]
    write_csv(config.out, header, rows, config)
    return config.out


# ---------------------------------------------------------------------------
# two-particle (erasure landscape of analyze_pair on a parameter grid)


def run_two_particle(config: ExperimentConfig) -> str:
    lambdas = np.round(np.arange(0.1, 0.91, 0.2), 10)
    sigmas = np.round(np.linspace(0.0, 1.0, 11), 10)
    rows = []
    for lam1 in lambdas:
        for lam2 in lambdas:
            if lam2 > lam1:
                continue
            for sigma in sigmas:
                try:
                    s1, s2, part = pair_with_overlap(float(lam1), float(lam2), float(sigma))
                except ValueError:
                    continue
                pa = analyze_pair(s1, s2, part)
                rows.append(
                    (pa.lambda1, pa.lambda2, pa.sigma, pa.delta, pa.nu1, pa.nu2, pa.ee_joint, pa.ee_sum)
                )
    header = ["lambda1", "lambda2", "sigma", "delta", "nu1", "nu2", "ee_joint", "ee_sum"]
    write_csv(config.out, header, rows, config)
    return config.out


RUNNERS = {
    "tb-bands": run_tb_bands,
    "anderson-erasure": run_anderson_erasure,
    "erasure-factor": run_erasure_factor,
    "mbl-erasure": run_mbl_erasure,
    "bell-oracle": run_bell_oracle,
    "two-particle": run_two_particle,
}


def run_experiment(config: ExperimentConfig) -> str:
    """Dispatch one experiment; returns the CSV path."""
    out_dir = os.path.dirname(os.path.abspath(config.out))
    if not os.path.isdir(out_dir):
        raise OSError(f"output directory does not exist: {out_dir}")
    return RUNNERS[config.experiment](config)
