"""Command-line front end: simulate records, reconstruct states, evaluate
errors, and run the scaling benchmarks as machine-readable CSV/JSON.

Exit codes: 0 on success, 2 on validation errors (bad arguments, malformed
record files), 3 on I/O failures.
"""

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import bench, metrics, pauli, pipeline, records, simulate, statefile

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3


def _add_common(parser, *names):
    if "n" in names:
        parser.add_argument("--n", type=int, required=True, help="number of qubits")
    if "shots" in names:
        parser.add_argument("--shots", type=int, help="shots per measurement setting")
    if "seed" in names:
        parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    if "state" in names:
        parser.add_argument(
            "--state",
            default="maxmixed",
            help="true state: maxmixed | ghz | productz:<bits> | random:<seed>",
        )
    if "threads" in names:
        parser.add_argument("--threads", default="1", help="worker count or 'auto'")
    if "kernel" in names:
        parser.add_argument(
            "--kernel", choices=pipeline.KERNELS, default="fast", help="step (i) kernel"
        )


def _parse_threads(text) -> int:
    if text == "auto":
        return os.cpu_count() or 1
    workers = int(text)
    if workers < 1:
        raise ValueError(f"--threads must be >= 1, got {workers}")
    return workers


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pauli-lre",
        description="Pauli-measurement state tomography via optimised linear regression",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="sample a measurement record file")
    _add_common(p, "n", "shots", "seed", "state")
    p.add_argument("--exact", action="store_true", help="write exact probabilities as counts (shots=2**n)")
    p.add_argument("--out", required=True, help="record file to write")

    p = sub.add_parser("reconstruct", help="reconstruct a density matrix from a record file")
    _add_common(p, "threads", "kernel")
    p.add_argument("--in", dest="in_path", required=True, help="record file")
    p.add_argument("--out", required=True, help="density-matrix file to write")

    p = sub.add_parser("eval", help="compare a reconstructed state against a known truth")
    _add_common(p, "n", "state", "shots")
    p.add_argument("--in", dest="in_path", required=True, help="density-matrix file")
    p.add_argument("--record", help="record file; enables the pre-projection distance")

    p = sub.add_parser("predict", help="print theoretical error predictors")
    _add_common(p, "n", "shots", "state")

    p = sub.add_parser("bench-time", help="per-step timing curve over qubit counts")
    _add_common(p, "threads", "kernel")
    p.add_argument("--grid", required=True, help="comma-separated qubit counts, e.g. 7,8,9,10")
    p.add_argument("--out", help="CSV file (default stdout)")

    p = sub.add_parser("bench-threads", help="step (i) speed versus worker count")
    _add_common(p, "n", "kernel")
    p.add_argument("--grid", required=True, help="comma-separated worker counts, e.g. 1,2,4")
    p.add_argument("--out", help="CSV file (default stdout)")

    p = sub.add_parser("bench-error", help="estimation error versus per-basis copies N0")
    _add_common(p, "n", "seed", "threads")
    p.add_argument("--grid", required=True, help="comma-separated N0 values")
    p.add_argument("--trials", type=int, default=50, help="trials per grid point")
    p.add_argument("--out", help="CSV file (default stdout)")

    return parser


def _parse_grid(text) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad --grid value {text!r}; expected comma-separated integers") from None
    if not values:
        raise ValueError("--grid is empty")
    return values


def _write_csv(rows, fieldnames, path):
    if path:
        fh = open(path, "w", newline="", encoding="utf-8")
    else:
        fh = sys.stdout
    try:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if path:
            fh.close()


def cmd_simulate(args) -> int:
    state = simulate.parse_state(args.state, args.n)
    if args.exact:
        record = simulate.exact_record(state)
    else:
        if args.shots is None:
            raise ValueError("simulate needs --shots (or --exact)")
        record = simulate.sample_counts(state, shots=args.shots, seed=args.seed)
    size = records.write_record(record, args.out)
    print(json.dumps({"settings": record.num_settings, "shots": record.shots, "bytes": size}))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    record = records.read_record(args.in_path)
    result = pipeline.reconstruct(
        record, workers=_parse_threads(args.threads), kernel=args.kernel
    )
    statefile.write_state(args.out, result.rho)
    print(json.dumps(result.timings))
    return EXIT_OK


def cmd_eval(args) -> int:
    truth = simulate.parse_state(args.state, args.n)
    n_file, rho_hat = statefile.read_state(args.in_path)
    if n_file != args.n:
        raise ValueError(f"state file has n={n_file}, --n says {args.n}")
    mu_hat = None
    shots = args.shots
    if args.record:
        record = records.read_record(args.record)
        if record.n != args.n:
            raise ValueError(f"record has n={record.n}, --n says {args.n}")
        theta = pipeline.step_one_least_squares(record)
        mu_hat = pipeline.step_two_assemble(theta)
        shots = record.shots
    n0 = shots / (1 << args.n) if shots is not None else None
    report = metrics.evaluate_errors(truth, rho_hat, mu_hat=mu_hat, n0=n0)
    print(report.to_json())
    return EXIT_OK


def cmd_predict(args) -> int:
    if args.shots is None:
        raise ValueError("predict needs --shots (the per-basis copy budget N0)")
    n0 = args.shots
    out = {
        "n": args.n,
        "N0": n0,
        "pred_hs_maxmixed": metrics.predicted_mse_max_mixed(args.n, n0),
        "pred_infidelity_maxmixed": metrics.predicted_infidelity_max_mixed(args.n, n0),
    }
    state = simulate.parse_state(args.state, args.n)
    if args.n <= metrics.PREDICTOR_DENSE_MAX_QUBITS:
        out["pred_hs_dense"] = metrics.predicted_mse_dense(simulate.dense_matrix(state), n0)
    print(json.dumps(out, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_bench_time(args) -> int:
    result = bench.time_scaling(
        _parse_grid(args.grid), kernel=args.kernel, workers=_parse_threads(args.threads)
    )
    rows = [
        {
            "n": r["n"],
            "t1": r["t_step1_s"],
            "t2": r["t_step2_s"],
            "t3": r["t_step3_s"],
            "total": r["t_total_s"],
            "kernel": r["kernel"],
            "threads": r["threads"],
        }
        for r in result["rows"]
    ]
    _write_csv(rows, ["n", "t1", "t2", "t3", "total", "kernel", "threads"], args.out)
    print(json.dumps(result["summary"]), file=sys.stderr)
    return EXIT_OK


def cmd_bench_threads(args) -> int:
    result = bench.thread_scaling(args.n, _parse_grid(args.grid), kernel=args.kernel)
    _write_csv(result["rows"], ["threads", "t1_s", "speed"], args.out)
    print(json.dumps(result["summary"]), file=sys.stderr)
    return EXIT_OK


def cmd_bench_error(args) -> int:
    rows = bench.error_scaling(
        args.n,
        _parse_grid(args.grid),
        trials=args.trials,
        seed=args.seed,
        workers=_parse_threads(args.threads),
    )
    _write_csv(
        rows,
        ["N0", "mean_hs_mu", "mean_hs_rho", "mean_infidelity", "pred_hs", "pred_infid"],
        args.out,
    )
    return EXIT_OK


_COMMANDS = {
    "simulate": cmd_simulate,
    "reconstruct": cmd_reconstruct,
    "eval": cmd_eval,
    "predict": cmd_predict,
    "bench-time": cmd_bench_time,
    "bench-threads": cmd_bench_threads,
    "bench-error": cmd_bench_error,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (records.RecordFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
