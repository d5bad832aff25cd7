"""Command-line front end: solve, bench, certify.

Configs are JSON files with optional ``--set key=value`` overrides (dots
descend into nested objects; values are parsed as JSON when possible).
Outputs are deterministic byte-for-byte given the same config and seed,
except for wall-clock columns.

Exit codes: 0 done, 1 config or validation error, 2 solver divergence,
3 certificate found no contractive rate.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__, certificates, data, problems, sampling, solvers

_REQUIRED = object()


class ConfigError(ValueError):
    pass


def _get(cfg: dict, key: str, default=_REQUIRED):
    if key in cfg:
        return cfg[key]
    if default is _REQUIRED:
        raise ConfigError(f"config is missing required key {key!r}")
    return default


def load_config(path: str, overrides) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    for item in overrides or []:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--set needs key=value, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = cfg
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {part!r} is not an object")
        node[parts[-1]] = value
    return cfg


def build_dataset(cfg: dict):
    """Return (matrix, labels, task) from a dataset config block."""
    kind = _get(cfg, "kind", "synthetic")
    if kind == "synthetic":
        spec = data.SyntheticSpec(
            n=int(_get(cfg, "n")),
            d=int(_get(cfg, "d")),
            rank=int(_get(cfg, "rank")),
            task=_get(cfg, "task", problems.LEAST_SQUARES),
            noise_std=float(_get(cfg, "noise_std", 0.0)),
            row_scale_spread=float(_get(cfg, "row_scale_spread", 1.0)),
            seed=int(_get(cfg, "seed", 0)),
        )
        matrix, y, _ = data.gen_synthetic(spec)
        return matrix, y, spec.task
    if kind == "libsvm":
        task = _get(cfg, "task", None)
        matrix, y = data.read_libsvm(
            _get(cfg, "path"),
            n_cols=cfg.get("n_cols"),
            task=task,
            remap01=bool(cfg.get("remap01", False)),
        )
        return matrix, y, task or problems.LEAST_SQUARES
    if kind == "inline":
        X = np.asarray(_get(cfg, "X"), dtype=np.float64)
        y = np.asarray(_get(cfg, "y"), dtype=np.float64)
        return problems.SparseDesignMatrix.from_dense(X), y, _get(
            cfg, "task", problems.LEAST_SQUARES)
    raise ConfigError(f"unknown dataset kind {kind!r}; valid: synthetic, libsvm, inline")


def _expand_bound(value, d):
    arr = np.asarray(value, dtype=np.float64)
    return np.full(d, float(arr)) if arr.ndim == 0 else arr


def build_problem(cfg: dict):
    """Assemble a ProblemSpec from the dataset and problem config blocks."""
    matrix, y, task = build_dataset(_get(cfg, "dataset"))
    pcfg = _get(cfg, "problem", {})
    q = pcfg.get("q")
    constraint = None
    regularizer = None
    ccfg = pcfg.get("constraint")
    rcfg = pcfg.get("regularizer")
    if ccfg is not None and rcfg is not None:
        raise ConfigError("problem cannot have both a constraint and a regularizer")
    if ccfg is not None:
        ctype = _get(ccfg, "type")
        if ctype == "l1_ball":
            constraint = problems.L1Ball(tau=float(_get(ccfg, "tau")))
        elif ctype == "box":
            constraint = problems.Box(
                lower=_expand_bound(_get(ccfg, "lower"), matrix.n_cols),
                upper=_expand_bound(_get(ccfg, "upper"), matrix.n_cols),
            )
        else:
            raise ConfigError(f"unknown constraint type {ctype!r}; valid: l1_ball, box")
    elif rcfg is not None:
        regularizer = problems.L1Regularizer(lam=float(_get(rcfg, "lam")))
    else:
        raise ConfigError("problem needs a constraint or a regularizer")
    loss = problems.LossSpec(kind=task, labels=y)
    return problems.ProblemSpec(matrix=matrix, loss=loss, q=q,
                                constraint=constraint, regularizer=regularizer)


_ALGORITHMS = ("vrpsg", "prox_svrg", "sgd", "afg", "vrpsg2")


def _resolve_run(problem, cfg: dict, seed: int):
    """Turn a run config into (algorithm, SolverConfig, resolved-eta, m, l_p)."""
    algorithm = _get(cfg, "algorithm")
    if algorithm not in _ALGORITHMS:
        raise ConfigError(
            f"unknown algorithm {algorithm!r}; valid choices: {', '.join(_ALGORITHMS)}")
    mode = _get(cfg, "sampling", sampling.PROPORTIONAL)
    info = problems.compute_lipschitz_info(problem)
    dist = sampling.build_distribution(mode, info, seed=seed)
    l_p = problems.aggregate_lipschitz(info, dist)

    eta = float(_get(cfg, "eta", 1.0))
    units = _get(cfg, "eta_units", "inv_lp")
    if units == "inv_lp":
        if l_p <= 0:
            raise ConfigError("eta_units=inv_lp needs a positive weighted Lipschitz constant")
        eta_abs = eta / l_p
    elif units == "absolute":
        eta_abs = eta
    else:
        raise ConfigError(f"unknown eta_units {units!r}; valid: inv_lp, absolute")

    m = cfg.get("m")
    if m is None and cfg.get("m_factor") is not None:
        m = max(1, int(round(float(cfg["m_factor"]) * problem.n)))
    solver_cfg = solvers.SolverConfig(
        epochs=int(_get(cfg, "epochs", 10)),
        step_size=eta_abs,
        inner_iterations=int(m) if m is not None else None,
        sgd_initial_step=float(_get(cfg, "eta0", 1.0)),
        seed=seed,
        sampling_mode=mode,
        average_epoch_output=bool(_get(cfg, "average_epoch_output", True)),
    )
    return algorithm, solver_cfg, eta_abs, m, l_p, info


_RUNNERS = {
    "vrpsg": lambda p, c, f, info: solvers.run_vrpsg(p, c, f_star=f, info=info),
    "prox_svrg": lambda p, c, f, info: solvers.run_prox_svrg(p, c, f_star=f, info=info),
    "sgd": lambda p, c, f, info: solvers.run_projected_sgd(p, c, f_star=f),
    "afg": lambda p, c, f, info: solvers.run_afg(p, c, f_star=f),
    "vrpsg2": lambda p, c, f, info: solvers.run_hybrid_vrpsg2(p, c, f_star=f, info=info),
}


def write_trace_csv(path, trace: solvers.RunTrace) -> None:
    """Fixed-column CSV; floats via repr so identical runs match bytewise."""
    cols = ["epoch", "grad_evals", "objective", "gap", "wall_ms"]
    with_probes = trace.probe_evals is not None
    if with_probes:
        cols.append("probe_evals")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(trace.epoch.size):
            row = [
                str(int(trace.epoch[i])),
                str(int(trace.grad_evals[i])),
                repr(float(trace.objective[i])),
                repr(float(trace.gap[i])),
                repr(float(trace.wall_ms[i])),
            ]
            if with_probes:
                row.append(str(int(trace.probe_evals[i])))
            fh.write(",".join(row) + "\n")


def _versions() -> dict:
    return {
        "package": __version__,
        "python": ".".join(str(v) for v in sys.version_info[:3]),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_solve(cfg: dict, out_dir: str, seed: int = None) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = build_problem(cfg)
    run_seed = int(cfg.get("seed", 0)) if seed is None else int(seed)

    algorithm, solver_cfg, eta_abs, m, l_p, info = _resolve_run(problem, cfg, run_seed)
    ref_cfg = _get(cfg, "reference", {})
    facts = None
    f_star = None
    if bool(_get(ref_cfg, "compute", True)):
        facts = certificates.reference_solution(
            problem, tol=float(_get(ref_cfg, "tol", 1e-12)),
            seed=int(_get(ref_cfg, "seed", 0)))
        f_star = facts.f_star

    trace = _RUNNERS[algorithm](problem, solver_cfg, f_star, info)
    write_trace_csv(out / "trace.csv", trace)
    manifest = {
        "command": "solve",
        "config": cfg,
        "versions": _versions(),
        "algorithm": algorithm,
        "seed": run_seed,
        "rows": int(trace.epoch.size),
        "eta_resolved": eta_abs,
        "m_resolved": int(m) if m is not None else None,
        "l_p": l_p,
        "theory_warning": bool(trace.theory_warning),
        "final_objective": float(trace.objective[-1]),
        "reference": None if facts is None else {
            "f_star": facts.f_star,
            "tolerance_achieved": facts.tolerance_achieved,
            "certified": bool(facts.certified),
        },
    }
    _write_json(out / "manifest.json", manifest)
    gap_note = "" if f_star is None else f", final gap {trace.gap[-1]:.3e}"
    print(f"{algorithm}: {trace.epoch.size} rows, final objective "
          f"{trace.objective[-1]:.12g}{gap_note}")
    print(f"wrote {out / 'trace.csv'} and {out / 'manifest.json'}")
    if trace.theory_warning:
        print("note: step size is at or above 1/(4 L_P); the linear-rate "
              "guarantee does not apply", file=sys.stderr)
    return 0


def _bench_cell(payload):
    """Worker for one (dataset, algorithm, sweep value, seed) cell."""
    cfg, ds_cfg, algo_cfg, sweep_kv, seed, f_star = payload
    run_cfg = dict(cfg)
    run_cfg["dataset"] = ds_cfg["dataset"]
    run_cfg["problem"] = ds_cfg["problem"]
    run_cfg.update({k: v for k, v in algo_cfg.items() if k != "name"})
    if sweep_kv is not None:
        run_cfg[sweep_kv[0]] = sweep_kv[1]
    problem = build_problem(run_cfg)
    algorithm, solver_cfg, eta_abs, m, l_p, info = _resolve_run(problem, run_cfg, seed)
    trace = _RUNNERS[algorithm](problem, solver_cfg, f_star, info)
    return {
        "grad_evals": trace.grad_evals.tolist(),
        "objective": trace.objective.tolist(),
        "gap": trace.gap.tolist(),
        "epoch": trace.epoch.tolist(),
        "wall_ms": trace.wall_ms.tolist(),
        "theory_warning": bool(trace.theory_warning),
    }


def cmd_bench(cfg: dict, out_dir: str, workers: int = 1) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    datasets = _get(cfg, "datasets")
    algorithms = _get(cfg, "algorithms")
    seeds = [int(s) for s in _get(cfg, "seeds", [0])]
    if not algorithms:
        raise ConfigError("bench needs at least one algorithm")
    if not datasets:
        raise ConfigError("bench needs at least one dataset")
    sweep = cfg.get("sweep")
    sweep_values = [None]
    sweep_param = None
    if sweep is not None:
        sweep_param = _get(sweep, "param")
        sweep_values = _get(sweep, "values")
        if not sweep_values:
            raise ConfigError("sweep.values must be non-empty")

    base = {k: v for k, v in cfg.items()
            if k not in ("datasets", "algorithms", "seeds", "sweep")}
    manifest_cells = []
    for ds_cfg in datasets:
        ds_name = _get(ds_cfg, "name")
        problem = build_problem({"dataset": _get(ds_cfg, "dataset"),
                                 "problem": _get(ds_cfg, "problem")})
        facts = certificates.reference_solution(
            problem, tol=float(_get(cfg, "reference_tol", 1e-12)))
        jobs = []
        for algo_cfg in algorithms:
            for sv in sweep_values:
                for seed in seeds:
                    kv = (sweep_param, sv) if sweep_param is not None else None
                    jobs.append((algo_cfg, sv, seed,
                                 (base, ds_cfg, algo_cfg, kv, seed, facts.f_star)))
        if workers > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_bench_cell, [j[3] for j in jobs]))
        else:
            results = [_bench_cell(j[3]) for j in jobs]

        # per-cell traces, then per-(algorithm, sweep value) mean gap over seeds
        grouped = {}
        for (algo_cfg, sv, seed, _), res in zip(jobs, results):
            name = _get(algo_cfg, "name", algo_cfg.get("algorithm"))
            tag = f"{name}" if sv is None else f"{name}_{sweep_param}={sv}"
            cell_path = out / f"trace_{ds_name}_{tag}_s{seed}.csv"
            with open(cell_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("epoch,grad_evals,objective,gap,wall_ms\n")
                for i in range(len(res["epoch"])):
                    fh.write(",".join([
                        str(res["epoch"][i]), str(res["grad_evals"][i]),
                        repr(res["objective"][i]), repr(res["gap"][i]),
                        repr(res["wall_ms"][i])]) + "\n")
            grouped.setdefault((name, sv), []).append(res)
            manifest_cells.append({"dataset": ds_name, "algorithm": name,
                                   "sweep": sv, "seed": seed,
                                   "theory_warning": res["theory_warning"],
                                   "rows": len(res["epoch"])})

        agg_path = out / f"aggregate_{ds_name}.csv"
        with open(agg_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("algorithm,sweep_value,epoch,grad_evals,mean_gap\n")
            for (name, sv), runs in grouped.items():
                n_rows = min(len(r["epoch"]) for r in runs)
                for i in range(n_rows):
                    gaps = [r["gap"][i] for r in runs]
                    fh.write(",".join([
                        name,
                        "" if sv is None else json.dumps(sv),
                        str(runs[0]["epoch"][i]),
                        str(runs[0]["grad_evals"][i]),
                        repr(float(np.mean(gaps))),
                    ]) + "\n")
        print(f"{ds_name}: f* = {facts.f_star:.12g} "
              f"(certified={facts.certified}), wrote {agg_path}")

    manifest = {
        "command": "bench",
        "config": cfg,
        "versions": _versions(),
        "algorithm": ",".join(_get(a, "name", a.get("algorithm")) for a in algorithms),
        "rows": len(manifest_cells),
        "cells": manifest_cells,
    }
    _write_json(out / "manifest.json", manifest)
    return 0


def cmd_certify(cfg: dict, out_dir: str) -> int:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    problem = build_problem(cfg)
    c = problem.constraint
    if isinstance(c, problems.L1Ball):
        C, b = certificates.l1_ball_rows(problem.d, c.tau)
    elif isinstance(c, problems.Box):
        C, b = certificates.box_rows(c.lower, c.upper)
    else:
        raise ConfigError("certify needs a constrained problem (l1_ball or box)")

    report = certificates.build_certificate(
        problem, C, b,
        sampling_mode=_get(cfg, "sampling", sampling.PROPORTIONAL),
        eta_fractions=tuple(_get(cfg, "eta_fractions", (0.02, 0.05, 0.1, 0.2))),
        m_values=tuple(_get(cfg, "m_values",
                            (10, 100, 1000, 10 ** 4, 10 ** 5, 10 ** 6, 10 ** 7))),
        reference_tol=float(_get(cfg, "reference_tol", 1e-12)),
        probe=bool(_get(cfg, "probe", False)),
        probes=int(_get(cfg, "probes", 200)),
        seed=int(_get(cfg, "seed", 0)),
    )
    payload = report.to_dict()
    payload["versions"] = _versions()
    _write_json(out / "certificate.json", payload)
    print(f"theta <= {report.theta_bound:.6g}, mu = {report.mu:.6g}"
          f"{'' if report.mu_exact else ' (grid estimate)'}, M <= {report.gap_bound:.6g}, "
          f"beta >= {report.beta:.6g}")
    print(f"best grid point: eta = {report.eta:.6g}, m = {report.m}, rho = {report.rho:.6g} "
          f"({'contractive' if report.contractive else 'NOT contractive'})")
    if report.beta_empirical is not None:
        print(f"empirical ratio probe: beta_emp = {report.beta_empirical:.6g}")
    print(f"wrote {out / 'certificate.json'}")
    return 0 if report.contractive else 3


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="vrgrad",
        description="Variance-reduced stochastic solvers with rate certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver, write trace.csv + manifest.json")
    p_solve.add_argument("--config", required=True)
    p_solve.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_solve.add_argument("--seed", type=int, default=None,
                         help="override the config seed")
    p_solve.add_argument("--out", default=".")

    p_bench = sub.add_parser("bench", help="grids of (dataset, algorithm, seed) runs")
    p_bench.add_argument("--config", required=True)
    p_bench.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_bench.add_argument("--out", default=".")
    p_bench.add_argument("--workers", type=int, default=1)

    p_cert = sub.add_parser("certify", help="compute the linear-rate certificate")
    p_cert.add_argument("--config", required=True)
    p_cert.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")
    p_cert.add_argument("--out", default=".")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.set)
        if args.command == "solve":
            return cmd_solve(cfg, args.out, seed=args.seed)
        if args.command == "bench":
            return cmd_bench(cfg, args.out, workers=args.workers)
        return cmd_certify(cfg, args.out)
    except solvers.DivergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError, KeyError, OSError,
            certificates.CertificateError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
