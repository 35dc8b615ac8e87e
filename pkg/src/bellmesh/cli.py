"""Command-line interface.

One entry point with a subcommand per capability.  Machine-readable
output is JSON (with a schema tag, the echoed configuration, seed,
version and wall time) or, for `sweep`, a CSV whose bytes depend only on
the configuration and seed.  Exit codes: 0 success, 1 verification
mismatch, 2 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__, bell, bounds, gadget, montecarlo
from .geometry import LatticeSpec, build

KIND_ALIASES = {"x": "to", "to": "to", "z": "te", "te": "te"}

CSV_COLUMNS = ["kind", "p", "N_o", "trials", "successes", "estimate", "std_error"]


def _emit_json(args, command: str, config: dict, result: dict, t0: float) -> None:
    doc = {
        "schema": f"bellmesh/{command}/1",
        "version": __version__,
        "config": config,
        "result": result,
        "wall_time_s": round(time.time() - t0, 3),
    }
    def np_scalar(obj):
        if hasattr(obj, "item"):
            return obj.item()
        raise TypeError(f"not JSON serializable: {type(obj).__name__}")

    text = json.dumps(doc, indent=2, sort_keys=True, default=np_scalar) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_kind(value: str) -> str:
    try:
        return KIND_ALIASES[value.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"kind must be one of {sorted(KIND_ALIASES)}, got {value!r}"
        )


def _int_list(value: str) -> list[int]:
    return [int(tok) for tok in value.split(",") if tok]


def _float_list(value: str) -> list[float]:
    return [float(tok) for tok in value.split(",") if tok]


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_prep(args) -> int:
    t0 = time.time()
    eps = args.eps
    if not 0.0 < eps < 0.5:
        print(f"error: --eps must be in (0, 0.5), got {eps}", file=sys.stderr)
        return 2
    state = bell.standardize(eps)
    inter = bell.standardize_intermediate(eps)
    result = {
        "eps": eps,
        "werner_fidelity": 1.0 - 3.0 * eps * eps,
        "intermediate": list(inter.coeffs),
        "state": list(state.coeffs),
        "fidelity": bell.fidelity(state),
        "node_error_rate": gadget.node_error_rate(eps),
    }
    _emit_json(args, "prep", {"eps": eps}, result, t0)
    return 0


def cmd_gadget_verify(args) -> int:
    t0 = time.time()
    rng = np.random.default_rng(args.seed)
    rows = []
    worst = 0.0
    for bond in gadget.BELL_LABELS:
        byproduct = gadget.classify_byproduct(bond)
        for out_a in (0, 1):
            for out_b in (0, 1):
                dev = 0.0
                for _ in range(args.samples):
                    a = rng.normal(size=2) + 1j * rng.normal(size=2)
                    b = rng.normal(size=2) + 1j * rng.normal(size=2)
                    a /= np.linalg.norm(a)
                    b /= np.linalg.norm(b)
                    got = gadget.run_gadget(a, b, bond, (out_a, out_b))
                    want = gadget.apply_byproduct(gadget.cz_reference(a, b), byproduct)
                    dev = max(dev, gadget.phase_distance(got, want))
                rows.append({
                    "bond": bond,
                    "branch": [out_a, out_b],
                    "byproduct": [byproduct.z_on_a, byproduct.z_on_b],
                    "max_deviation": dev,
                    "ok": dev <= args.tol,
                })
                worst = max(worst, dev)
    ok = all(r["ok"] for r in rows)
    _emit_json(args, "gadget-verify",
               {"samples": args.samples, "tol": args.tol, "seed": args.seed},
               {"table": rows, "max_deviation": worst, "ok": ok}, t0)
    return 0 if ok else 1


def cmd_geometry(args) -> int:
    t0 = time.time()
    try:
        spec = LatticeSpec(args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    model = build(spec, args.kind)
    census = model.census()
    census["boundary_dist_max"] = int(model.boundary_dist.max())
    _emit_json(args, "geometry", {"n": args.n, "kind": args.kind}, census, t0)
    return 0


def cmd_decode_trace(args) -> int:
    t0 = time.time()
    from . import decoder

    try:
        spec = LatticeSpec(args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    model = build(spec, args.kind)
    errors = np.zeros(model.num_edges, dtype=bool)
    if args.edges is not None:
        bad = [e for e in args.edges if not 0 <= e < model.num_edges]
        if bad:
            print(f"error: edge indices out of range: {bad}", file=sys.stderr)
            return 2
        errors[args.edges] = True
    else:
        rng = np.random.default_rng(args.seed)
        errors = decoder.sample_errors(model, args.p, rng)
    trace = decoder.decode_trace(model, errors)
    result = {
        "errors": trace["errors"].tolist(),
        "known_defects": trace["known_defects"].tolist(),
        "inferred_defects": trace["inferred_defects"].tolist(),
        "pairs": [[pr.v1, pr.v2] for pr in trace["pairs"]],
        "correction": trace["correction"].tolist(),
        "residual_membrane_parity": trace["residual_membrane_parity"],
        "failure": trace["failure"],
    }
    config = {"n": args.n, "kind": args.kind, "p": args.p,
              "seed": args.seed, "edges": args.edges}
    _emit_json(args, "decode-trace", config, result, t0)
    return 0


def _sweep_rows(kinds, ps, sizes, trials, seed):
    for kind in kinds:
        for p in ps:
            for n_o in sizes:
                pt = montecarlo.estimate_F(kind, p, n_o, trials, seed)
                yield {
                    "kind": pt.kind,
                    "p": repr(pt.p),
                    "N_o": pt.n_o,
                    "trials": pt.trials,
                    "successes": pt.trials - pt.failures,
                    "estimate": f"{pt.estimate:.10f}",
                    "std_error": f"{pt.std_error:.10f}",
                }


def cmd_sweep(args) -> int:
    if any(not 0.0 <= p < 0.5 for p in args.p):
        print("error: every --p must be in [0, 0.5)", file=sys.stderr)
        return 2
    if any(n < 1 for n in args.no):
        print("error: every --no must be >= 1", file=sys.stderr)
        return 2
    kinds = [args.kind] if args.kind else ["to", "te"]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in _sweep_rows(kinds, args.p, args.no, args.trials, args.seed):
        writer.writerow(row)
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_fit(args) -> int:
    t0 = time.time()
    with open(args.input) as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        print("error: empty CSV", file=sys.stderr)
        return 2
    missing = [c for c in CSV_COLUMNS if c not in rows[0]]
    if missing:
        print(f"error: CSV lacks columns {missing}", file=sys.stderr)
        return 2
    groups: dict[tuple[str, float], list[dict]] = {}
    for row in rows:
        groups.setdefault((row["kind"], float(row["p"])), []).append(row)
    fits = []
    for (kind, p), pts in sorted(groups.items()):
        pts.sort(key=lambda r: int(r["N_o"]))
        fit = montecarlo.extrapolate(
            [int(r["N_o"]) for r in pts],
            [float(r["estimate"]) for r in pts],
            [float(r["std_error"]) for r in pts],
        )
        fits.append({
            "kind": kind, "p": p,
            "f_infinity": fit.f_infinity, "a": fit.a, "b": fit.b,
            "f_err": fit.f_err, "converged": fit.converged,
            "message": fit.message, "sizes": fit.sizes,
        })
    _emit_json(args, "fit", {"input": args.input}, {"fits": fits}, t0)
    return 0 if all(f["converged"] for f in fits) else 1


def cmd_threshold(args) -> int:
    t0 = time.time()
    config = {
        "p_lo": args.p_lo, "p_hi": args.p_hi, "no": args.no,
        "trials": args.trials, "seed": args.seed, "resolution": args.resolution,
    }
    if args.config:
        with open(args.config) as fh:
            config.update(json.load(fh))
    if not 0.0 < config["p_lo"] < config["p_hi"] < 0.5:
        print("error: need 0 < p_lo < p_hi < 0.5", file=sys.stderr)
        return 2
    try:
        res = montecarlo.find_threshold(
            p_lo=config["p_lo"], p_hi=config["p_hi"], sizes=config["no"],
            trials=config["trials"], seed=config["seed"], tol=config["resolution"],
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fx = montecarlo.estimate_F_inf("to", res.p_star, config["no"], config["trials"], config["seed"])
    fz = montecarlo.estimate_F_inf("te", res.p_star, config["no"], config["trials"], config["seed"])
    sigma = (fx.f_err**2 + fz.f_err**2) ** 0.5
    result = {
        "p_star": res.p_star,
        "bracket": list(res.bracket),
        "p_star_err": ((config["resolution"] / 2) ** 2 + sigma**2) ** 0.5,
        "evaluations": [[p, v] for p, v in res.evaluations],
        "epsilon_star": gadget.invert_node_error_rate(res.p_star),
    }
    _emit_json(args, "threshold", config, result, t0)
    return 0


def cmd_bounds(args) -> int:
    t0 = time.time()
    cfg = bounds.BoundConfig(rtol=args.rtol)
    result: dict = {"convergence_onset": bounds.convergence_onset()}
    config = {"p": args.p, "solve_threshold": args.solve_threshold, "rtol": args.rtol}
    if args.p is not None:
        try:
            result["p"] = args.p
            result["bound_pX"] = bounds.bound_pX(args.p, cfg)
            result["bound_pZ"] = bounds.bound_pZ(args.p, cfg)
            result["fidelity_bound"] = bounds.combined_fidelity_bound(args.p, cfg)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    if args.solve_threshold:
        p_star = bounds.rigorous_threshold(cfg)
        result["rigorous_threshold"] = p_star
        result["rigorous_epsilon_threshold"] = gadget.invert_node_error_rate(p_star)
    if args.p is None and not args.solve_threshold:
        print("error: give --p and/or --solve-threshold", file=sys.stderr)
        return 2
    _emit_json(args, "bounds", config, result, t0)
    return 0


# ---------------------------------------------------------------------------
# Parser.


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bellmesh",
        description="Long-range entanglement in noisy cubic quantum networks.",
    )
    parser.add_argument("--version", action="version", version=f"bellmesh {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="standardized Bell-diagonal link state and node error rate")
    p.add_argument("--eps", type=float, required=True, help="bond error rate in (0, 0.5)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("gadget-verify", help="statevector check of the CZ gadget byproduct table")
    p.add_argument("--samples", type=int, default=20, help="random input states per branch")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_gadget_verify)

    p = sub.add_parser("geometry", help="dump the decoding-lattice census")
    p.add_argument("--n", type=int, required=True, help="cube size, 1 mod 4")
    p.add_argument("--kind", type=_parse_kind, required=True)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("decode-trace", help="decode one error configuration with a full trace")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", type=_parse_kind, required=True)
    p.add_argument("--p", type=float, default=0.02, help="error rate for sampling")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--edges", type=_int_list, default=None,
                   help="comma-separated erroneous edge indices (overrides sampling)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_decode_trace)

    p = sub.add_parser("sweep", help="Monte Carlo fidelity grid, CSV output")
    p.add_argument("--kind", type=_parse_kind, default=None,
                   help="x/to or z/te; default both")
    p.add_argument("--p", type=_float_list, required=True, help="comma-separated error rates")
    p.add_argument("--no", type=_int_list, required=True, help="comma-separated lattice sizes n_o")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="extrapolate a sweep CSV to infinite size")
    p.add_argument("--input", required=True, help="CSV produced by sweep")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("threshold", help="bisect for the error-rate threshold p*")
    p.add_argument("--p-lo", type=float, default=0.010)
    p.add_argument("--p-hi", type=float, default=0.030)
    p.add_argument("--no", type=_int_list, default=[2, 3, 4, 5])
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resolution", type=float, default=5e-4)
    p.add_argument("--config", help="JSON file overriding the flags above")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("bounds", help="analytic path-counting bounds")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--solve-threshold", action="store_true")
    p.add_argument("--rtol", type=float, default=1e-12)
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
