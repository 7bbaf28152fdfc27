"""Command-line front end: simulate, sweep, spectra, bounds, construct, check-merge.

Vertex indices are 1-based on the command line and in all output files, and
0-based inside the library.  Trajectory and energy tables are CSV (or JSON
with --format json); events and verdicts are JSONL.  All file writes are
atomic (temp file then rename).  Exit codes: 0 ok, 1 usage or malformed
input, 2 numerical/domain failure, 3 step budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import bounds as bounds_mod
from . import dynamics, graphs, sampling, slowmerge, spectral
from .errors import BudgetExhausted, GraphFormatError, InvalidSeed, SocialHKError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _atomic_write(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_graph(source: str) -> graphs.Graph:
    if ":" in source:
        name, _, arg = source.partition(":")
        if name == "rpartite":
            sizes = tuple(int(s) for s in arg.split(","))
            return graphs.complete_r_partite(graphs.PartiteSpec(sizes))
        if name in ("path", "cycle", "star", "complete", "dumbbell"):
            return graphs.standard_graph(name, int(arg))
        raise UsageError(f"unknown graph constructor {name!r}")
    if not os.path.exists(source):
        raise UsageError(f"graph file not found: {source}")
    with open(source) as fh:
        return graphs.graph_from_json(fh.read())


def _parse_kv(arg: str) -> dict:
    out = {}
    if arg:
        for item in arg.split(","):
            key, _, val = item.partition("=")
            if not _:
                raise UsageError(f"expected key=value, got {item!r}")
            out[key.strip()] = float(val)
    return out


def _parse_x0(source: str, n: int, bound: float, seed) -> dynamics.OpinionState:
    if os.path.exists(source):
        with open(source) as fh:
            payload = json.load(fh)
        vals = payload["opinions"] if isinstance(payload, dict) else payload
        return dynamics.OpinionState(np.array(vals, dtype=float), bound)
    name, _, arg = source.partition(":")
    if name == "four-path":
        kv = _parse_kv(arg)
        state, _pred = slowmerge.four_path_family(kv["delta"], bound)
        return state
    if name in ("narrow-spread", "uniform-box"):
        if seed is None:
            raise UsageError(f"sampler {name!r} requires --seed")
        kv = _parse_kv(arg)
        mode = name.replace("-", "_")
        return sampling.sample_initial_state(n, bound, mode, seed, **kv)
    if ":" not in source:
        try:
            vals = [float(v) for v in source.split(",")]
        except ValueError:
            raise UsageError(f"cannot parse initial state {source!r}")
        return dynamics.OpinionState(np.array(vals), bound)
    raise UsageError(f"unknown initial-state source {source!r}")


def _parse_vertices(text: str, n: int) -> tuple:
    try:
        vs = tuple(int(v) - 1 for v in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse vertex list {text!r}")
    if any(not 0 <= v < n for v in vs):
        raise UsageError(f"vertex out of range in {text!r} (1..{n})")
    return vs


def _table(header, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write_trajectory(traj: dynamics.Trajectory, out: str, fmt: str) -> dict:
    n = traj.gph.n
    paths = {}
    header = ["k"] + [f"x_{i+1}" for i in range(n)]
    rows = [[k] + [repr(float(x)) for x in s] for k, s in enumerate(traj.states)]
    ext = "json" if fmt == "json" else "csv"
    paths["trajectory"] = os.path.join(out, f"trajectory.{ext}")
    _atomic_write(paths["trajectory"], _table(header, rows, fmt))

    lines = [json.dumps(e.to_payload(one_based=True)) for e in traj.events]
    paths["events"] = os.path.join(out, "events.jsonl")
    _atomic_write(paths["events"], "".join(line + "\n" for line in lines))

    if traj.energies is not None:
        erows = [[k, repr(e), repr(a)] for k, (e, a) in enumerate(traj.energies)]
        paths["energy"] = os.path.join(out, f"energy.{ext}")
        _atomic_write(paths["energy"], _table(["k", "E", "E_act"], erows, fmt))
    return paths


def _summary(traj: dynamics.Trajectory, eps_list) -> dict:
    out = {
        "steps": traj.n_steps,
        "lock_k": traj.lock_k,
        "termination_k": traj.termination_k,
        "merge_times": traj.merge_times(),
        "event_counts": {
            kind: len(traj.events_of(kind))
            for kind in ("link_break", "link_form", "merge", "lock", "termination")
        },
    }
    if traj.locked:
        ss = dynamics.steady_state(traj)
        out["steady_values"] = list(ss.values)
        out["k_eps"] = {
            repr(e): dynamics.eps_convergence_time(traj, ss, e) for e in eps_list
        }
        if traj.energies is not None and traj.lock_k < len(traj.energies):
            out["energy_at_lock"] = traj.energies[traj.lock_k][0]
    return out


# -- subcommands ---------------------------------------------------------------


def _cmd_simulate(args) -> int:
    g = _parse_graph(args.graph)
    state = _parse_x0(args.x0, g.n, args.R, args.seed)
    stop = None
    if args.stop_on == "lock":
        stop = "lock"
    elif args.stop_on == "termination":
        stop = "termination"
    elif args.stop_on == "eps":
        if not args.eps:
            raise UsageError("--stop-on eps requires --eps")
        stop = ("eps", args.eps[0])
    traj = dynamics.simulate(g, state, args.max_steps, stop_on=stop)
    paths = _write_trajectory(traj, args.out, args.format)
    print(json.dumps({**_summary(traj, args.eps or []), "files": paths}, indent=1))
    return EXIT_OK


def _cmd_spectra(args) -> int:
    g = _parse_graph(args.graph)
    dec = spectral.decompose(g)
    out = {
        "n": g.n,
        "eigenvalues_by_abs": [float(v) for v in dec.eigenvalues],
        "eigenvalues_by_value": [float(v) for v in dec.eigenvalues_by_value()],
        "clusters": [list(c) for c in dec.clusters],
    }
    if g.is_connected() and not g.is_complete():
        rep = spectral.incomplete_spectrum_report(g, dec)
        out["spectrum_checks"] = {
            "top_eigenvalue_simple": bool(rep.top_eigenvalue_simple),
            "second_abs_positive": bool(rep.second_abs_positive),
            "has_positive_secondary": bool(rep.has_positive_secondary),
        }
    if args.graph.startswith("rpartite:"):
        sizes = tuple(int(s) for s in args.graph.split(":")[1].split(","))
        spec = graphs.PartiteSpec(sizes)
        rep = spectral.verify_rpartite_eigenbasis(spec, spectral.rpartite_eigenbasis(spec))
        out["rpartite_basis_checks"] = {
            "eigenpairs_ok": bool(rep.eigenpairs_ok),
            "nonunit_b_nonpositive": bool(rep.nonunit_b_nonpositive),
            "full_rank": bool(rep.full_rank),
            "lifted_orthogonal_to_local": bool(rep.lifted_orthogonal_to_local),
        }
    print(json.dumps(out, indent=1))
    return EXIT_OK


def _cmd_bounds(args) -> int:
    g = _parse_graph(args.graph)
    phi, witness = graphs.conductance(g)
    diam = graphs.diameter(g)
    dec = spectral.decompose(g)
    reports = [
        bounds_mod.conductance_lower_bound(phi, args.eps, args.R),
        bounds_mod.constant_influence_upper_bound(g.n, diam, args.eps, args.R),
        bounds_mod.link_break_budget(g.n, args.R),
        bounds_mod.lambda2_diameter_bound(g.n, diam),
    ]
    out = {
        "phi": phi,
        "phi_witness": sorted(v + 1 for v in witness),
        "diameter": diam,
        "lambda2_abs": dec.second_largest_abs(),
        "bounds": [
            {
                "kind": r.kind,
                "value": r.value,
                "inputs": r.inputs,
                "degenerate": r.degenerate,
                **r.extras,
            }
            for r in reports
        ],
    }
    print(json.dumps(out, indent=1))
    return EXIT_OK


def _verdict_payload(v: slowmerge.MergeVerdict) -> dict:
    return {
        "kind": v.kind,
        "eigenvalue": v.eigenvalue,
        "witness": None if v.witness is None else [float(x) for x in v.witness],
        "records": [
            {
                "eigenvalue": r.eigenvalue,
                "dim": r.dim,
                "feasible": r.feasible,
                "margin": None if np.isnan(r.margin) else r.margin,
            }
            for r in v.records
        ],
    }


def _cmd_check_merge(args) -> int:
    g = _parse_graph(args.graph)
    split = slowmerge.make_split(g, _parse_vertices(args.vp, g.n), _parse_vertices(args.vq, g.n))
    out = {
        "vp": [v + 1 for v in split.vp],
        "vq": [v + 1 for v in split.vq],
        "boundary_edges": [[i + 1, j + 1] for i, j in split.boundary_edges],
        "sufficient": _verdict_payload(slowmerge.sufficient_check(g, split)),
        "necessary": _verdict_payload(slowmerge.necessary_check(g, split)),
    }
    print(json.dumps(out, indent=1))
    return EXIT_OK


def _cmd_construct(args) -> int:
    g = _parse_graph(args.graph)
    split = slowmerge.make_split(g, _parse_vertices(args.vp, g.n), _parse_vertices(args.vq, g.n))
    verdict = slowmerge.sufficient_check(g, split)
    if verdict.kind != slowmerge.SUFFICIENT_HOLDS:
        print(json.dumps({"error": "sufficient condition fails", "verdict": _verdict_payload(verdict)}))
        return EXIT_NUMERICAL
    state, predicted = slowmerge.construct_slow_state(g, split, verdict, args.delta, args.R)
    path = os.path.join(args.out, "x0.json")
    _atomic_write(
        path,
        json.dumps(
            {"opinions": [repr(float(v)) for v in state.opinions], "confidence_bound": args.R}
        )
        + "\n",
    )
    print(
        json.dumps(
            {
                "eigenvalue": verdict.eigenvalue,
                "delta": args.delta,
                "predicted_merge_time": predicted,
                "state_file": path,
                "opinions": [float(v) for v in state.opinions],
            },
            indent=1,
        )
    )
    return EXIT_OK


def _graph_bounds(g, eps, bound) -> dict:
    out = {}
    if g.is_connected() and g.n >= 2:
        if g.n <= graphs.CONDUCTANCE_CAP:
            phi, _ = graphs.conductance(g)
            out["bound_conductance_floor"] = bounds_mod.conductance_lower_bound(
                phi, eps, bound
            ).value
        out["bound_kappa_cap"] = bounds_mod.constant_influence_upper_bound(
            g.n, graphs.diameter(g), eps, bound
        ).value
    out["bound_break_budget"] = bounds_mod.link_break_budget(g.n, bound).value
    return out


def _sweep_row(g, cfg, row_id, params, graph_bounds) -> dict:
    bound = cfg["R"]
    eps_list = cfg.get("eps", [])
    max_steps = cfg.get("max_steps", 1000)
    if "delta" in params:
        delta = params["delta"]
        if "split" in cfg:
            split = slowmerge.make_split(
                g,
                [v - 1 for v in cfg["split"]["vp"]],
                [v - 1 for v in cfg["split"]["vq"]],
            )
            verdict = slowmerge.sufficient_check(g, split)
            state, predicted = slowmerge.construct_slow_state(g, split, verdict, delta, bound)
        else:
            state, predicted = slowmerge.four_path_family(delta, bound)
    else:
        state = sampling.sample_initial_state(
            g.n, bound, cfg["sampler"]["mode"], params["seed"],
            **{k: v for k, v in cfg["sampler"].items() if k != "mode"},
        )
        predicted = None
    traj = dynamics.simulate(g, state, max_steps)
    row = {"row": row_id, **params, "predicted_merge": predicted}
    row.update(_flatten_summary(_summary(traj, eps_list)))
    row["partial"] = traj.n_steps >= max_steps and not traj.locked and traj.termination_k is None
    row.update(graph_bounds)
    row["config"] = json.dumps({**cfg, **params}, sort_keys=True)
    return row


def _flatten_summary(summary: dict) -> dict:
    out = {
        "steps": summary["steps"],
        "lock_k": summary["lock_k"],
        "termination_k": summary["termination_k"],
        "first_merge": summary["merge_times"][0] if summary["merge_times"] else None,
        "n_breaks": summary["event_counts"]["link_break"],
        "n_forms": summary["event_counts"]["link_form"],
        "n_merges": summary["event_counts"]["merge"],
        "energy_at_lock": summary.get("energy_at_lock"),
    }
    for key, val in summary.get("k_eps", {}).items():
        out[f"k_eps_{key}"] = val
    return out


def _cmd_sweep(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config: {exc}")
    for field in ("graph", "R"):
        if field not in cfg:
            raise UsageError(f"config is missing required field {field!r}")
    g = _parse_graph(cfg["graph"])
    if "deltas" in cfg:
        jobs = [{"delta": d} for d in cfg["deltas"]]
    elif "seeds" in cfg:
        if "sampler" not in cfg:
            raise UsageError("config with 'seeds' needs a 'sampler' section")
        if any(s == 0 for s in cfg["seeds"]):
            raise InvalidSeed("seed 0 is reserved; pick any other integer")
        jobs = [{"seed": s} for s in cfg["seeds"]]
    else:
        raise UsageError("config needs either 'deltas' or 'seeds'")

    graph_bounds = _graph_bounds(g, min(cfg.get("eps", [1e-2])), cfg["R"])
    with ThreadPoolExecutor(max_workers=min(4, len(jobs))) as pool:
        futures = [
            pool.submit(_sweep_row, g, cfg, i, params, graph_bounds)
            for i, params in enumerate(jobs)
        ]
        rows = [f.result() for f in futures]

    header = sorted({k for r in rows for k in r}, key=lambda k: (k != "row", k))
    table = [[r.get(h) for h in header] for r in rows]
    path = os.path.join(args.out, "sweep.csv")
    _atomic_write(path, _table(header, table, "csv"))
    print(json.dumps({"rows": len(rows), "file": path}, indent=1))
    return EXIT_OK


def build_parser() -> _Parser:
    p = _Parser(prog="socialhk", description=__doc__)
    p.add_argument("--seed", type=int, default=None, help="seed for samplers (0 is invalid)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run one trajectory and write its records")
    s.add_argument("--graph", required=True)
    s.add_argument("--x0", required=True)
    s.add_argument("--R", type=float, default=1.0)
    s.add_argument("--max-steps", type=int, default=1000)
    s.add_argument("--eps", type=float, nargs="*", default=[])
    s.add_argument("--stop-on", choices=("none", "lock", "termination", "eps"), default="none")
    s.set_defaults(func=_cmd_simulate)

    s = sub.add_parser("spectra", help="eigenvalues, clusters, and spectrum checks")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=_cmd_spectra)

    s = sub.add_parser("bounds", help="closed-form convergence-time bounds")
    s.add_argument("--graph", required=True)
    s.add_argument("--eps", type=float, default=1e-2)
    s.add_argument("--R", type=float, default=1.0)
    s.set_defaults(func=_cmd_bounds)

    s = sub.add_parser("check-merge", help="sufficient/necessary slow-merge verdicts")
    s.add_argument("--graph", required=True)
    s.add_argument("--vp", required=True, help="comma-separated 1-based vertices")
    s.add_argument("--vq", required=True)
    s.set_defaults(func=_cmd_check_merge)

    s = sub.add_parser("construct", help="emit a slow-merging initial state")
    s.add_argument("--graph", required=True)
    s.add_argument("--vp", required=True)
    s.add_argument("--vq", required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--R", type=float, default=1.0)
    s.set_defaults(func=_cmd_construct)

    s = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    s.add_argument("--config", required=True)
    s.set_defaults(func=_cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphFormatError, InvalidSeed) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc} (partial results kept in memory only)", file=sys.stderr)
        return EXIT_BUDGET
    except SocialHKError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
