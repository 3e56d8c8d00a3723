"""Command-line interface.

Subcommands: validate (operator/observable files), evolve (trajectory CSV),
classify (constancy report), observable (distributions and the observable
calculus), examples (built-in worked-example cross-checks), scan (randomized
symmetry-gap search). Data goes to stdout (or to files for scan); all
diagnostics go to stderr. Exit codes: 0 success, 1 examples failure,
2 invalid inputs or flags, 3 parse failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import closed_forms, evolution, linalg, serialization
from .effects import DECISION_TOL, Effect, validate_effect, validate_state
from .errors import EffectdynError, SchemaError
from .explorer import ScanConfig, conjecture_scan, random_effect
from .observables import (
    Observable,
    conditioned_observable,
    convex_combination,
    distribution,
    obs_evolution,
    obs_seq_product,
    obs_time_seq_product,
    time_conditional_observable,
    validate_observable,
)

EXIT_OK = 0
EXIT_EXAMPLES_FAILED = 1
EXIT_INVALID = 2
EXIT_PARSE = 3


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_effect(path: str, tol: float) -> Effect:
    return validate_effect(serialization.parse_operator_json(_read_text(path)), tol)


def _load_observable(path: str, tol: float) -> Observable:
    outcomes, matrices = serialization.parse_observable_json(_read_text(path))
    return validate_observable(
        [validate_effect(m, tol) for m in matrices], outcomes
    )


def _fmt_eigs(values) -> str:
    return "[" + ", ".join(format(float(v), ".17g") for v in values) + "]"


def cmd_validate(args) -> int:
    text = _read_text(args.file)
    if args.kind == "observable":
        outcomes, matrices = serialization.parse_observable_json(text)
        try:
            obs = validate_observable(
                [validate_effect(m, args.tol) for m in matrices], outcomes
            )
        except EffectdynError as exc:
            print("valid: false")
            print(f"reason: {exc}")
            return EXIT_INVALID
        total = sum(e.matrix for e in obs.effects)
        print("valid: true")
        print(f"outcomes: {list(obs.outcomes)}")
        print(f"sum_residual: {linalg.operator_norm(total - np.eye(obs.dim)):.3e}")
        return EXIT_OK
    matrix = serialization.parse_operator_json(text)
    residual = linalg.hermiticity_defect(matrix)
    try:
        if args.kind == "state":
            obj = validate_state(matrix, args.tol)
        else:
            obj = validate_effect(matrix, args.tol)
    except EffectdynError as exc:
        print("valid: false")
        print(f"hermiticity_residual: {residual:.3e}")
        print(f"reason: {exc}")
        return EXIT_INVALID
    print("valid: true")
    print(f"hermiticity_residual: {residual:.3e}")
    print(f"eigenvalues: {_fmt_eigs(np.linalg.eigvalsh(obj.matrix))}")
    if args.kind == "state":
        print(f"trace: {float(np.trace(obj.matrix).real):.17g}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.steps < 0:
        raise EffectdynError(f"--steps must be nonnegative, got {args.steps}")
    a = _load_effect(args.a_file, args.tol)
    b = _load_effect(args.b_file, args.tol)
    times = np.linspace(args.t0, args.t1, args.steps + 1)
    matrices, deviations, dnorms = [], [], []
    if args.mode == "evolution":
        for t in times:
            evolved = evolution.effect_evolution(b, a, t)
            matrices.append(evolved.matrix)
            deviations.append(linalg.operator_norm(evolved.matrix - b.matrix))
            dnorms.append(linalg.operator_norm(evolution.evolution_derivative(b, a, t)))
    else:
        base = evolution.time_seq_product(a, b, 0.0).matrix
        for t in times:
            product = evolution.time_seq_product(a, b, t)
            matrices.append(product.matrix)
            deviations.append(linalg.operator_norm(product.matrix - base))
            dnorms.append(linalg.operator_norm(evolution.seq_product_derivative(a, b, t)))
    sys.stdout.write(serialization.trajectory_csv(times, matrices, deviations, dnorms))
    return EXIT_OK


def cmd_classify(args) -> int:
    a = _load_effect(args.a_file, args.tol)
    b = _load_effect(args.b_file, args.tol)
    report = evolution.constancy_classifier(a, b, args.tol)
    print(f"constant: {'true' if report.constant else 'false'}")
    print(f"reason: {report.reason}")
    print(f"residual: {report.residual:.17g}")
    if report.decomposition is not None:
        print(f"scale: {report.decomposition.scale:.17g}")
        print(
            "projection_rank: "
            f"{int(round(float(np.trace(report.decomposition.projection.matrix).real)))}"
        )
    return EXIT_OK


def _maybe_distribution(args, obs: Observable) -> int:
    """Emit the observable document, wrapping in a distribution when asked."""
    doc = serialization.observable_to_document(obs)
    if args.state is not None:
        rho = validate_state(serialization.parse_operator_json(_read_text(args.state)))
        dist = distribution(obs, rho)
        doc = {"observable": doc, "distribution": dist.as_dict()}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_observable(args) -> int:
    tol = args.tol
    if args.obs_cmd == "dist":
        obs = _load_observable(args.observable, tol)
        rho = validate_state(serialization.parse_operator_json(_read_text(args.state)))
        sys.stdout.write(serialization.distribution_json(distribution(obs, rho)))
        return EXIT_OK
    if args.obs_cmd == "seqprod":
        result = obs_seq_product(
            _load_observable(args.a_file, tol), _load_observable(args.b_file, tol)
        )
    elif args.obs_cmd == "cond":
        result = conditioned_observable(
            _load_observable(args.b_file, tol), _load_observable(args.a_file, tol)
        )
    elif args.obs_cmd == "evolve":
        result = obs_evolution(
            _load_observable(args.observable, tol),
            _load_effect(args.effect, tol),
            args.t,
        )
    elif args.obs_cmd == "tseq":
        result = obs_time_seq_product(
            _load_observable(args.a_file, tol), _load_observable(args.b_file, tol), args.t
        )
    elif args.obs_cmd == "tcond":
        result = time_conditional_observable(
            _load_observable(args.b_file, tol), _load_observable(args.a_file, tol), args.t
        )
    elif args.obs_cmd == "convex":
        weights = [float(w) for w in args.weights.split(",") if w != ""]
        result = convex_combination(
            weights, [_load_observable(f, tol) for f in args.files]
        )
    else:  # pragma: no cover - argparse enforces choices
        raise SchemaError(f"unknown observable subcommand {args.obs_cmd!r}")
    return _maybe_distribution(args, result)


def _examples_report(inject_fault: bool = False):
    """Cross-check the generic evolution code against every closed form.

    Returns (name, target, residual) triples; the fault flag inflates
    residuals to exercise the failure path in tests.
    """
    checks = []
    grid = np.linspace(0.0, 4.0 * math.pi, 64)

    a1, b1 = closed_forms.example1_effects()
    res1 = 0.0
    for t in grid:
        evolved = evolution.effect_evolution(b1, a1, t).matrix
        res1 = max(res1, float(np.max(np.abs(evolved - closed_forms.example1_evolution(t)))))
        eigs = np.linalg.eigvalsh(evolution.evolution_derivative(b1, a1, t))
        res1 = max(res1, float(np.max(np.abs(eigs - closed_forms.example1_derivative_eigs()))))
    checks.append(
        (
            "example 1: a=diag(1,1/2), b=ones/2",
            "evolved (1/2)[[1,e^{-it/2}],[e^{it/2},1]]; derivative eigenvalues ±1/4",
            res1,
        )
    )

    res2 = 0.0
    for scale in (0.3, 0.7, 1.0):
        for b12 in (0.1, 0.25 + 0.25j):
            params = closed_forms.QubitExampleParams(scale, 0.5, 0.5, b12)
            a2, b2 = params.effect_a(), params.effect_b()
            for t in grid:
                res2 = max(
                    res2,
                    abs(
                        evolution.deviation_norm(b2, a2, t)
                        - closed_forms.example2_deviation(params, t)
                    ),
                )
            res2 = max(
                res2,
                abs(evolution.deviation_norm(b2, a2, math.pi / scale) - 2.0 * abs(b12)),
            )
            eigs = np.linalg.eigvalsh(evolution.evolution_derivative(b2, a2, 1.7))
            res2 = max(
                res2,
                float(np.max(np.abs(eigs - closed_forms.example2_derivative_eigs(params)))),
            )
    checks.append(
        (
            "example 2: a=λ·diag(1,0), general qubit b",
            "deviation √(2(1−cos λt))|b12|, maximum 2|b12| at t=π/λ, derivative eigenvalues ±λ|b12|",
            res2,
        )
    )

    rng = np.random.default_rng(7)
    res3 = 0.0
    hadamard_p = np.full((2, 2), 0.5)
    for dim, proj in ((2, np.diag([1.0, 0.0])), (2, hadamard_p), (3, np.diag([1.0, 1.0, 0.0]))):
        p = validate_effect(proj)
        b3 = random_effect(dim, rng)
        for scale in (0.3, 1.0):
            a3 = validate_effect(scale * p.matrix)
            target = closed_forms.example3_constant_product(scale, p, b3, 0.0).matrix
            for t in np.linspace(0.0, 4.0 * math.pi, 17):
                res3 = max(
                    res3,
                    linalg.operator_norm(
                        evolution.time_seq_product(a3, b3, t).matrix - target
                    ),
                )
    checks.append(
        (
            "example 3: a=λp for a projection p",
            "a[t]b = λpbp = a∘b for all t (constant product)",
            res3,
        )
    )

    if inject_fault:
        checks = [(name, target, res + 1.0) for name, target, res in checks]
    return checks


def cmd_examples(args) -> int:
    failures = 0
    for name, target, residual in _examples_report(args.inject_fault):
        ok = residual <= 1e-10
        failures += 0 if ok else 1
        print(f"{name}: {'PASS' if ok else 'FAIL'}  max residual {residual:.3e}")
        print(f"  target: {target}")
    return EXIT_OK if failures == 0 else EXIT_EXAMPLES_FAILED


def cmd_scan(args) -> int:
    try:
        cfg = ScanConfig(
            dim=args.dim,
            trials=args.trials,
            t_window=(args.tmin, args.tmax),
            grid_points=args.grid,
            refine_iters=args.refine,
            seed=args.seed,
            commutator_floor=args.floor,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = conjecture_scan(cfg)
    json_path = Path(f"{args.out}.json")
    csv_path = Path(f"{args.out}.csv")
    json_path.write_text(serialization.scan_json(cfg, result), encoding="utf-8")
    csv_path.write_text(serialization.scan_csv(result), encoding="utf-8")
    gmin = result.summary["global_min"]
    gap_note = "no records" if gmin is None else f"global min gap {gmin['min_gap']:.3e}"
    print(
        f"wrote {json_path} and {csv_path} ({len(result.records)} records, {gap_note})",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effectdyn",
        description="Quantum effect calculus under unitary time evolution.",
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="override the yes/no decision tolerance (validation spectra, "
        f"commutation, constancy; default {DECISION_TOL:g})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an operator or observable JSON file")
    p.add_argument("file")
    p.add_argument("--kind", choices=("effect", "state", "observable"), default="effect")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("evolve", help="emit a trajectory CSV on stdout")
    p.add_argument("a_file", help="effect generating the evolution")
    p.add_argument("b_file", help="effect being evolved")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--t1", type=float, default=2.0 * math.pi)
    p.add_argument("--steps", type=int, default=64, help="rows = steps + 1 (inclusive grid)")
    p.add_argument(
        "--mode",
        choices=("evolution", "seqprod"),
        default="evolution",
        help="evolution: b(t|a); seqprod: a[t]b",
    )
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("classify", help="decide whether a[t]b is constant, and why")
    p.add_argument("a_file")
    p.add_argument("b_file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("observable", help="observable calculus on JSON files")
    obs_sub = p.add_subparsers(dest="obs_cmd", required=True)

    q = obs_sub.add_parser("dist", help="distribution of an observable in a state")
    q.add_argument("observable")
    q.add_argument("--state", required=True)
    q.set_defaults(func=cmd_observable)

    for name, help_text in (
        ("seqprod", "sequential product A∘B"),
        ("tseq", "time-dependent product A[t]B"),
    ):
        q = obs_sub.add_parser(name, help=help_text)
        q.add_argument("a_file")
        q.add_argument("b_file")
        if name == "tseq":
            q.add_argument("--t", type=float, default=0.0)
        q.add_argument("--state", default=None, help="also emit the distribution in this state")
        q.set_defaults(func=cmd_observable)

    for name, help_text in (
        ("cond", "conditioned observable (B|A): B after a nonselective A"),
        ("tcond", "time-dependent conditional observable (B|A)(t|A)"),
    ):
        q = obs_sub.add_parser(name, help=help_text)
        q.add_argument("a_file", help="conditioning observable A")
        q.add_argument("b_file", help="conditioned observable B")
        if name == "tcond":
            q.add_argument("--t", type=float, default=0.0)
        q.add_argument("--state", default=None, help="also emit the distribution in this state")
        q.set_defaults(func=cmd_observable)

    q = obs_sub.add_parser("evolve", help="a-evolution B(t|a) of an observable")
    q.add_argument("observable")
    q.add_argument("effect", help="operator file for the evolving effect a")
    q.add_argument("--t", type=float, default=0.0)
    q.add_argument("--state", default=None, help="also emit the distribution in this state")
    q.set_defaults(func=cmd_observable)

    q = obs_sub.add_parser("convex", help="convex combination of observables")
    q.add_argument("--weights", required=True, help="comma-separated, summing to 1")
    q.add_argument("files", nargs="+")
    q.add_argument("--state", default=None, help="also emit the distribution in this state")
    q.set_defaults(func=cmd_observable)

    p = sub.add_parser("examples", help="re-run the built-in worked-example cross-checks")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("scan", help="randomized symmetry-gap search (writes JSON + CSV)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tmin", type=float, default=-4.0 * math.pi)
    p.add_argument("--tmax", type=float, default=4.0 * math.pi)
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--refine", type=int, default=60)
    p.add_argument("--floor", type=float, default=1e-3)
    p.add_argument("--out", default="scan", help="output prefix for .json/.csv")
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.tol is not None and args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INVALID
    if args.tol is None:
        args.tol = DECISION_TOL
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EffectdynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
