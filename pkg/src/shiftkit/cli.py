"""Command line front-end.

Exit codes: 0 success, 1 failed self-check, 2 bad input, 3 numerical failure.
Reports go to ``--output`` (or stdout) and are only written on success.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import derivatives as dv
from .circuit import CachedCost, Observable, _parse_operator, cost_function, load_circuit
from .errors import InputError, NumericalError, ShiftkitError
from .optimizers import MinimizerConfig, qad_build, qad_eval, qad_minimize, rotosolve
from .qaoa import bound_spectra, frequency_bound, load_graph, qaoa_circuit, qaoa_eval_counts
from .qaoa import maxcut_hamiltonian, true_problem_spectrum
from .reconstruction import full_reconstruct_equidistant, reconstruct_nonuniform
from .resources import MIXED_RULES, ResourceQuery, hessian_shot_budgets, resource_table_csv
from .rules import GaussLegendre, MonteCarlo, stochastic_derivative
from .spectrum import param_spectrum


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _load(args):
    circ, obs = load_circuit(args.circuit)
    if getattr(args, "observable", None):
        obs = _parse_operator(json.loads(Path(args.observable).read_text()), "observable", Observable)
    params = np.zeros(circ.n_params) if args.params is None else np.asarray(args.params)
    params = circ.check_params(params)
    return circ, obs, params


def _need_obs(obs):
    if obs is None:
        raise InputError("missing field 'observable' (in the circuit file or via --observable)")
    return obs


def _emit_report(args, report: dv.DerivativeReport, **extra) -> str:
    if args.format == "csv":
        return dv.matrix_to_csv(report.value)
    d = dv.report_to_dict(report)
    d.update(extra)
    return json.dumps(d, sort_keys=True, indent=1) + "\n"


# --- commands ---

def cmd_gradient(args) -> str:
    c, obs, p = _load(args)
    rep = dv.gradient(c, p, _need_obs(obs), method=args.method)
    return _emit_report(args, rep, command="gradient")


def cmd_hessian(args) -> str:
    c, obs, p = _load(args)
    obs = _need_obs(obs)
    if args.with_gradient:
        rep = dv.gradient_and_hessian(c, p, obs, strategy=args.strategy)
    else:
        rep = dv.hessian(c, p, obs, strategy=args.strategy)
    return _emit_report(args, rep, command="hessian")


def cmd_metric(args) -> str:
    c, _, p = _load(args)
    rep = dv.metric_tensor(c, p, method=args.method)
    return _emit_report(args, rep, command="metric")


def cmd_reconstruct(args) -> str:
    c, obs, p = _load(args)
    obs = _need_obs(obs)
    spec = param_spectrum(c, args.param)
    cost = CachedCost(cost_function(c, obs))
    v = np.zeros(c.n_params)
    v[args.param] = 1.0
    line = lambda t: cost(p + t * v)
    if spec.equidistant:
        poly = full_reconstruct_equidistant(line, spec.r_count, spec.scale, verify=args.verify)
    else:
        poly = reconstruct_nonuniform(line, spec.frequencies)
    evals = cost.evaluations
    report = {"command": "reconstruct", "param": args.param, "evaluations_used": evals,
              "R": spec.r_count, "equidistant": spec.equidistant, "trigpoly": poly.to_dict()}
    if args.format == "csv":
        rows = ["frequency,a,b", f"0,{poly.a0:.17g},0"]
        rows += [f"{f:.17g},{a:.17g},{b:.17g}" for f, a, b in zip(poly.frequencies, poly.a, poly.b)]
        return "\n".join(rows) + "\n"
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def cmd_rotosolve(args) -> str:
    c, obs, p = _load(args)
    trace = rotosolve(c, p, _need_obs(obs), args.epochs,
                      MinimizerConfig(grid_per_frequency=args.grid_density))
    if args.format == "csv":
        return trace.to_csv()
    return json.dumps({"command": "rotosolve", "final_params": trace.final_params.tolist(),
                       "costs": trace.costs.tolist(),
                       "evaluations_used": trace.total_evaluations}, sort_keys=True, indent=1) + "\n"


def cmd_qad(args) -> str:
    c, obs, p = _load(args)
    model = qad_build(c, p, _need_obs(obs), args.variant)
    report = {"command": "qad", "evaluations_used": model.evaluations_used, "model": model.to_dict(),
              "model_value_at_x0": qad_eval(model, p)}
    if args.minimize:
        res = qad_minimize(model)
        report["minimum"] = {"x": res.x.tolist(), "value": res.value, "converged": res.converged,
                             "steps": res.steps}
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def cmd_qaoa_resources(args) -> str:
    g = load_graph(args.graph)
    n = args.n_params
    bound = frequency_bound(g)
    rows = [{"quantity": q, "strategy": s, "evaluations": qaoa_eval_counts(g, n, q, s)}
            for q in ("grad", "grad_and_hessian") for s in ("decomposition", "gen_shift")]
    info = {"N": g.n_vertices, "M": g.n_edges, "kind": bound.kind, "phi": bound.phi,
            "even_frequencies": bound.even, "R_bound": bound.r_max}
    if g.n_vertices <= 16:
        true = true_problem_spectrum(g)
        info["lambda"] = int(round(true.max_frequency))
        info["R_true"] = true.r_count
    if args.instrumented:
        circ = qaoa_circuit(g, n // 2)
        obs = maxcut_hamiltonian(g)
        x = np.full(n, 0.1)
        info["instrumented_gen_shift_grad"] = dv.gradient(circ, x, obs, spectra=bound_spectra(g, n)).evaluations_used
        info["instrumented_decomposition_grad"] = dv.gradient(circ, x, obs, method="decomposition").evaluations_used
    if args.format == "csv":
        head = "quantity,strategy,evaluations\n"
        return head + "".join(f"{r['quantity']},{r['strategy']},{r['evaluations']}\n" for r in rows)
    return json.dumps({"command": "qaoa-resources", "graph": info, "counts": rows},
                      sort_keys=True, indent=1) + "\n"


def cmd_resources(args) -> str:
    q = ResourceQuery(R_vec=args.R, P_vec=args.P, sigma=args.sigma, epsilon=args.epsilon)
    if args.format == "csv":
        return resource_table_csv(q, mixed_rule=args.mixed_rule)
    from .resources import resource_table

    out = {"command": "resources", "model": "constant single-shot variance",
           "counts": resource_table(q, mixed_rule=args.mixed_rule)}
    if args.R is not None and args.P is not None:
        out["hessian_shot_budgets"] = dict(zip(("diag", "genPS", "decomp"), hessian_shot_budgets(q)))
    return json.dumps(out, sort_keys=True, indent=1) + "\n"


def cmd_stochastic(args) -> str:
    c, obs, p = _load(args)
    if args.samples is not None:
        if args.seed is None:
            raise InputError("missing field 'seed': Monte Carlo sampling needs --seed")
        integ = MonteCarlo(args.samples, args.seed)
    else:
        integ = GaussLegendre(args.nodes)
    res = stochastic_derivative(c, args.param, p, _need_obs(obs), integ)
    return json.dumps({"command": "stochastic-grad", "param": args.param, "value": res.value,
                       "stderr": res.stderr, "evaluations_used": res.evaluations},
                      sort_keys=True, indent=1) + "\n"


def cmd_selfcheck(args) -> str:
    from .selfcheck import run_selfcheck

    checks = run_selfcheck(args.rules)
    lines = ["check,tolerance,error,status"]
    lines += [f"{ch.name},{ch.tolerance:.1e},{ch.error:.3e},{'PASS' if ch.ok else 'FAIL'}" for ch in checks]
    text = "\n".join(lines) + "\n"
    failed = [ch.name for ch in checks if not ch.ok]
    if failed:
        sys.stdout.write(text)
        print("failed: " + ", ".join(failed), file=sys.stderr)
        raise SystemExit(1)
    return text


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shiftkit", description="General parameter-shift derivatives and tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, circuit=True):
        p.add_argument("--output", "-o", help="report path (default: stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int)
        p.add_argument("--threads", type=int, default=1, help="accepted; computations are sequential")
        if circuit:
            p.add_argument("--circuit", required=True)
            p.add_argument("--observable")
            p.add_argument("--params", type=_float_list)
        return p

    p = common(sub.add_parser("gradient"))
    p.add_argument("--method", choices=("shift", "decomposition"), default="shift")
    p.set_defaults(func=cmd_gradient)

    p = common(sub.add_parser("hessian"))
    p.add_argument("--strategy", choices=dv.HESSIAN_STRATEGIES + ("decomposition",),
                   default="diagonal_rule")
    p.add_argument("--with-gradient", action="store_true")
    p.set_defaults(func=cmd_hessian)

    p = common(sub.add_parser("metric"))
    p.add_argument("--method", choices=("overlap_hessian", "covariance_block"), default="overlap_hessian")
    p.set_defaults(func=cmd_metric)

    p = common(sub.add_parser("reconstruct"))
    p.add_argument("--param", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = common(sub.add_parser("rotosolve"))
    p.add_argument("--epochs", type=int, default=1)
    p.add_argument("--grid-density", type=int, default=100)
    p.set_defaults(func=cmd_rotosolve)

    p = common(sub.add_parser("qad"))
    p.add_argument("--variant", choices=("original", "extended", "interpolation"), default="original")
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=cmd_qad)

    p = common(sub.add_parser("qaoa-resources"), circuit=False)
    p.add_argument("--graph", required=True)
    p.add_argument("--n-params", type=int, required=True)
    p.add_argument("--instrumented", action="store_true")
    p.set_defaults(func=cmd_qaoa_resources)

    p = common(sub.add_parser("resources"), circuit=False)
    p.add_argument("--R", type=_int_list)
    p.add_argument("--P", type=_int_list)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--mixed-rule", choices=MIXED_RULES, default="diagonal_rule")
    p.set_defaults(func=cmd_resources)

    p = common(sub.add_parser("stochastic-grad"))
    p.add_argument("--param", type=int, required=True)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--samples", type=int)
    p.set_defaults(func=cmd_stochastic)

    p = common(sub.add_parser("selfcheck"), circuit=False)
    p.add_argument("--rules", help="JSON file of shift rules to audit instead of the built-in ones")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except ShiftkitError as exc:  # pragma: no cover - every error has a family
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
