"""Benchmark harnesses: per-step timing curves, thread scaling, error scaling.

Timing methodology: monotonic wall clock, one discarded warm-up run, median
of the repeated runs.  Timing sweeps feed from exact-probability sources so
sampling cost never pollutes the measurements.
"""

import statistics
import time

import numpy as np

from . import metrics, pauli, pipeline, simulate

DEFAULT_REPEATS = 3


def median_step_times(
    n: int,
    kernel: str = "fast",
    workers: int = 1,
    repeats: int = DEFAULT_REPEATS,
    state_kind: str = "maxmixed",
) -> dict:
    """Median per-step seconds of the in-memory pipeline at one size."""
    state = simulate.StateDescriptor(state_kind, n)
    source = pipeline.ExactFrequencies(state)
    runs = []
    for _ in range(repeats + 1):
        runs.append(pipeline.reconstruct(source, workers=workers, kernel=kernel).timings)
    runs = runs[1:]  # discard warm-up
    out = {
        key: statistics.median(r[key] for r in runs)
        for key in ("t_step1_s", "t_step2_s", "t_step3_s", "t_total_s")
    }
    out.update(n=n, kernel=kernel, threads=workers)
    return out


def fit_growth_factor(ns, times) -> float:
    """Per-qubit growth factor from a log-linear fit of time versus n."""
    ns = np.asarray(ns, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if ns.size < 2:
        raise ValueError("need at least two sizes to fit a growth factor")
    slope = np.polyfit(ns, np.log(times), 1)[0]
    return float(np.exp(slope))


def linear_fit_r2(x, y) -> tuple[float, float, float]:
    """Least-squares line y = a*x + b; returns (a, b, R^2)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    total = y - y.mean()
    ss_tot = float(total @ total)
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(resid @ resid) / ss_tot
    return float(a), float(b), r2


def time_scaling(
    n_values,
    kernel: str = "fast",
    workers: int = 1,
    repeats: int = DEFAULT_REPEATS,
) -> dict:
    """Per-step timing rows over a range of qubit counts plus fitted factors."""
    rows = [median_step_times(n, kernel=kernel, workers=workers, repeats=repeats) for n in n_values]
    ns = [r["n"] for r in rows]
    summary = {
        "kernel": kernel,
        "threads": workers,
        "t1_growth_factor": fit_growth_factor(ns, [r["t_step1_s"] for r in rows]),
        "t3_growth_factor": fit_growth_factor(ns, [r["t_step3_s"] for r in rows]),
    }
    return {"rows": rows, "summary": summary}


def thread_scaling(
    n: int,
    worker_counts,
    kernel: str = "fast",
    repeats: int = DEFAULT_REPEATS,
    state_kind: str = "maxmixed",
) -> dict:
    """Step (i) times and speeds across worker counts, with a linearity fit.

    Also cross-checks that every worker count reproduces the same coefficient
    vector; the maximum entrywise deviation is reported.
    """
    state = simulate.StateDescriptor(state_kind, n)
    source = pipeline.ExactFrequencies(state)
    rows = []
    thetas = []
    for workers in worker_counts:
        times = []
        theta = None
        for _ in range(repeats + 1):
            t0 = time.perf_counter()
            theta = pipeline.step_one_least_squares(source, workers=workers, kernel=kernel)
            times.append(time.perf_counter() - t0)
        t1 = statistics.median(times[1:])
        rows.append({"threads": workers, "t1_s": t1, "speed": 1.0 / t1})
        thetas.append(theta)
    max_dev = 0.0
    for theta in thetas[1:]:
        max_dev = max(max_dev, float(np.abs(theta - thetas[0]).max()))
    slope, intercept, r2 = linear_fit_r2(
        [r["threads"] for r in rows], [r["speed"] for r in rows]
    )
    return {
        "rows": rows,
        "summary": {
            "n": n,
            "kernel": kernel,
            "fit_slope": slope,
            "fit_intercept": intercept,
            "r_squared": r2,
            "max_theta_deviation": max_dev,
        },
    }


def error_scaling(
    n: int,
    n0_values,
    trials: int,
    seed: int = 0,
    workers: int = 1,
) -> list[dict]:
    """Mean estimation errors of the maximally mixed state over an N0 grid.

    N0 is the per-basis copy budget, so each sampled record carries d*N0
    shots per setting.  Every trial uses its own deterministic seed derived
    from (seed, N0, trial).
    """
    state = simulate.StateDescriptor("maxmixed", n)
    d = 1 << n
    rho_true = np.eye(d, dtype=np.complex128) / d
    rows = []
    for n0 in n0_values:
        hs_mu = []
        hs_rho = []
        infid = []
        for trial in range(trials):
            trial_seed = ((seed * 1_000_003 + int(n0)) * 1_000_003 + trial) & 0x7FFFFFFFFFFFFFFF
            record = simulate.sample_counts(state, shots=d * int(n0), seed=trial_seed)
            result = pipeline.reconstruct(record, workers=workers)
            hs_mu.append(metrics.hs_squared_distance(result.mu, rho_true))
            hs_rho.append(metrics.hs_squared_distance(result.rho, rho_true))
            infid.append(1.0 - metrics.fidelity_with_maxmixed(result.eigenvalues, d))
        rows.append(
            {
                "N0": int(n0),
                "mean_hs_mu": float(np.mean(hs_mu)),
                "mean_hs_rho": float(np.mean(hs_rho)),
                "mean_infidelity": float(np.mean(infid)),
                "pred_hs": metrics.predicted_mse_max_mixed(n, n0),
                "pred_infid": metrics.predicted_infidelity_max_mixed(n, n0),
            }
        )
    return rows
