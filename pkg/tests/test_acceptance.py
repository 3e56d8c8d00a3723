"""End-to-end acceptance gate.

Each test covers one numbered criterion, prints a single PASS/FAIL line
(visible with ``pytest -s``), and asserts at the stated tolerance. Every
check is seeded, so a failure here reproduces exactly.
"""

import json
import math

import numpy as np

from effectdyn import (
    CoexistenceWitness,
    ScanConfig,
    cli,
    closed_forms,
    commuting_witness,
    commutator_norm,
    constancy_bruteforce,
    constancy_classifier,
    convex_combination,
    deviation_norm,
    distribution,
    effect_evolution,
    evolution_derivative,
    identity_effect,
    linalg,
    max_seq_deviation,
    minimize_gap,
    obs_time_seq_product,
    sequential_product,
    symmetry_gap,
    symmetry_gap_profile,
    time_conditional_observable,
    time_seq_product,
    validate_effect,
    validate_observable,
    verify_coexistence_witness,
    zero_effect,
)
from effectdyn.observables import conditioned_observable, obs_evolution, obs_seq_product

from support import (
    random_commuting_pair,
    random_effect,
    random_observable,
    random_projection,
    random_scaled_projection,
    random_state,
)


def _report(num: int, ok: bool, what: str, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} — {what} ({detail})")
    assert ok, f"criterion {num} failed: {what} ({detail})"


def _norm(m: np.ndarray) -> float:
    return float(linalg.spectral_norm(m))


def test_criterion_1_qubit_evolution_closed_form():
    a, b = closed_forms.example1_effects()
    mat_res = 0.0
    eig_res = 0.0
    for t in np.linspace(0.0, 4.0 * math.pi, 32):
        evolved = effect_evolution(b, a, t).matrix
        mat_res = max(mat_res, float(np.max(np.abs(evolved - closed_forms.example1_evolution(t)))))
        eigs = np.linalg.eigvalsh(evolution_derivative(b, a, t))
        eig_res = max(eig_res, float(np.max(np.abs(eigs - closed_forms.example1_derivative_eigs()))))
    _report(
        1,
        eig_res <= 1e-10 and mat_res <= 1e-12,
        "qubit pair a=diag(1,1/2), b=ones/2: derivative eigenvalues ±1/4, evolved matrix entrywise",
        f"eig residual {eig_res:.2e} ≤ 1e-10, matrix residual {mat_res:.2e} ≤ 1e-12",
    )


def test_criterion_2_rank_one_generator_deviation():
    dev_res = 0.0
    max_res = 0.0
    eig_res = 0.0
    grid = np.linspace(0.0, 4.0 * math.pi, 64)
    for scale in (0.3, 0.7, 1.0):
        for b12 in (0.1, 0.25 + 0.25j):
            params = closed_forms.QubitExampleParams(scale, 0.5, 0.5, b12)
            a, b = params.effect_a(), params.effect_b()
            for t in grid:
                dev_res = max(
                    dev_res,
                    abs(deviation_norm(b, a, t) - closed_forms.example2_deviation(params, t)),
                )
                eigs = np.linalg.eigvalsh(evolution_derivative(b, a, t))
                eig_res = max(
                    eig_res,
                    float(np.max(np.abs(eigs - closed_forms.example2_derivative_eigs(params)))),
                )
            max_res = max(
                max_res, abs(deviation_norm(b, a, math.pi / scale) - 2.0 * abs(b12))
            )
    _report(
        2,
        dev_res <= 1e-10 and max_res <= 1e-9 and eig_res <= 1e-10,
        "generator λ·diag(1,0): deviation √(2(1−cos λt))|b12|, max 2|b12| at π/λ, derivative eigenvalues ±λ|b12|",
        f"deviation {dev_res:.2e} ≤ 1e-10, max-at-π/λ {max_res:.2e} ≤ 1e-9, eigs {eig_res:.2e} ≤ 1e-10",
    )


def test_criterion_3_scaled_projection_constant_product():
    rng = np.random.default_rng(3)
    res = 0.0
    grid = np.linspace(0.0, 4.0 * math.pi, 33)
    for dim in (2, 3):
        for _ in range(10):
            rank = int(rng.integers(1, dim))
            p = random_projection(dim, rank, rng)
            b = random_effect(dim, rng)
            scale = float(rng.uniform(0.05, 1.0))
            a = validate_effect(scale * p.matrix)
            target = scale * (p.matrix @ b.matrix @ p.matrix)
            for t in grid:
                res = max(res, _norm(time_seq_product(a, b, t).matrix - target))
    _report(
        3,
        res <= 1e-10,
        "a=λp (qubit and qutrit projections): ‖(λp)[t]b − λpbp‖ along the grid",
        f"max residual {res:.2e} ≤ 1e-10",
    )


def test_criterion_4_constancy_classifier_vs_bruteforce():
    rng = np.random.default_rng(4)
    grid = np.concatenate([np.linspace(0.0, 10.0, 101), [math.pi, math.e]])
    n_random = 0
    n_constructed = 0
    mismatches = 0
    reasons_ok = True
    neither_floor = math.inf

    def check(a, b, constructed):
        nonlocal n_random, n_constructed, mismatches, reasons_ok, neither_floor
        report = constancy_classifier(a, b)
        brute = constancy_bruteforce(a, b, grid)
        if report.constant != brute:
            mismatches += 1
        if report.constant and report.reason not in ("Commuting", "ScaledProjection"):
            reasons_ok = False
        if not report.constant:
            neither_floor = min(neither_floor, max_seq_deviation(a, b, grid))
        if constructed:
            n_constructed += 1
        else:
            n_random += 1

    for dim in (2, 3, 4, 5):
        for _ in range(500):
            check(random_effect(dim, rng), random_effect(dim, rng), constructed=False)
        for _ in range(15):
            a, b = random_commuting_pair(dim, rng)
            check(a, b, constructed=True)
        for _ in range(15):
            _, _, a = random_scaled_projection(dim, rng)
            check(a, random_effect(dim, rng), constructed=True)
        b = random_effect(dim, rng)
        check(zero_effect(dim), b, constructed=True)
        check(identity_effect(dim), b, constructed=True)
        check(validate_effect(0.37 * np.eye(dim)), b, constructed=True)
        check(random_projection(dim, dim - 1, rng), b, constructed=True)
    _report(
        4,
        mismatches == 0 and reasons_ok and n_constructed >= 100 and neither_floor > 1e-6,
        "constancy classifier agrees with grid bruteforce; constant ⟺ Commuting/ScaledProjection",
        f"{n_random} random + {n_constructed} constructed pairs, {mismatches} disagreements, "
        f"smallest non-constant grid deviation {neither_floor:.2e} > 1e-6",
    )


def test_criterion_5_evolution_identities():
    rng = np.random.default_rng(5)
    tol = 1e-9
    worst: dict[str, float] = {}

    def dim_t():
        return int(rng.integers(2, 7)), float(rng.uniform(-10.0, 10.0))

    res = 0.0
    for _ in range(1000):
        dim, t1 = dim_t()
        t2 = float(rng.uniform(-10.0, 10.0))
        a, b = random_effect(dim, rng), random_effect(dim, rng)
        lhs = effect_evolution(b, a, t1 + t2).matrix
        rhs = effect_evolution(effect_evolution(b, a, t1), a, t2).matrix
        res = max(res, _norm(lhs - rhs))
    worst["(i) two-step evolution composes"] = res

    res = 0.0
    for _ in range(1000):
        dim, t1 = dim_t()
        t2 = float(rng.uniform(-10.0, 10.0))
        a, b = random_effect(dim, rng), random_effect(dim, rng)
        lhs = time_seq_product(a, b, t1 + t2).matrix
        rhs = effect_evolution(time_seq_product(a, b, t1), a, t2).matrix
        res = max(res, _norm(lhs - rhs))
    worst["(ii) product then evolve"] = res

    res = 0.0
    for _ in range(1000):
        dim, t = dim_t()
        a, b = random_effect(dim, rng), random_effect(dim, rng)
        gap = float(np.min(np.linalg.eigvalsh(a.matrix - time_seq_product(a, b, t).matrix)))
        res = max(res, max(0.0, -gap))
    worst["(iii) a[t]b ≤ a"] = res

    res = 0.0
    for _ in range(1000):
        dim, t = dim_t()
        a = validate_effect(random_effect(dim, rng).matrix / 2.0)
        b = validate_effect(random_effect(dim, rng).matrix / 2.0)
        c = random_effect(dim, rng)
        total = validate_effect(a.matrix + b.matrix)
        r1 = _norm(
            effect_evolution(total, c, t).matrix
            - effect_evolution(a, c, t).matrix
            - effect_evolution(b, c, t).matrix
        )
        r2 = _norm(
            time_seq_product(c, total, t).matrix
            - time_seq_product(c, a, t).matrix
            - time_seq_product(c, b, t).matrix
        )
        res = max(res, r1, r2)
    worst["(iv) additivity in both arguments"] = res

    res = 0.0
    for _ in range(1000):
        dim, t = dim_t()
        a, b = random_effect(dim, rng), random_effect(dim, rng)
        c = random_effect(dim, rng)
        lhs = sequential_product(
            effect_evolution(a, c, t), effect_evolution(b, c, t)
        ).matrix
        rhs = effect_evolution(sequential_product(a, b), c, t).matrix
        res = max(res, _norm(lhs - rhs))
    worst["(v) evolution is a ∘-homomorphism"] = res

    res = 0.0
    for _ in range(700):
        dim, t = dim_t()
        a, b, c = (random_effect(dim, rng) for _ in range(3))
        lhs = time_seq_product(a, time_seq_product(b, c, t), t).matrix
        inner = effect_evolution(effect_evolution(sequential_product(b, c), b, t), a, t)
        rhs = sequential_product(a, inner).matrix
        res = max(res, _norm(lhs - rhs))
    for _ in range(300):
        dim, t = dim_t()
        a, b = random_commuting_pair(dim, rng)
        a = validate_effect(a.matrix / 2.0)
        b = validate_effect(b.matrix / 2.0)
        c = random_effect(dim, rng)
        lhs = time_seq_product(a, time_seq_product(b, c, t), t).matrix
        rhs = effect_evolution(
            sequential_product(sequential_product(a, b), c),
            validate_effect(a.matrix + b.matrix),
            t,
        ).matrix
        res = max(res, _norm(lhs - rhs))
    worst["(vi) iterated product unfolds"] = res

    transported = 0
    for _ in range(200):
        dim, t = dim_t()
        a, b = random_commuting_pair(dim, rng)
        w = commuting_witness(a, b)
        c = random_effect(dim, rng)
        evolved = CoexistenceWitness(
            effect_evolution(w.a1, c, t),
            effect_evolution(w.b1, c, t),
            effect_evolution(w.c, c, t),
        )
        ok1 = verify_coexistence_witness(
            effect_evolution(a, c, t), effect_evolution(b, c, t), evolved
        )
        producted = CoexistenceWitness(
            time_seq_product(c, w.a1, t),
            time_seq_product(c, w.b1, t),
            time_seq_product(c, w.c, t),
        )
        ok2 = verify_coexistence_witness(
            time_seq_product(c, a, t), time_seq_product(c, b, t), producted
        )
        transported += 1 if (ok1 and ok2) else 0

    peak = max(worst.values())
    _report(
        5,
        peak <= tol and transported == 200,
        "evolution identities (i)–(vi) on 1000 instances each; witness transport on 200 commuting pairs",
        f"worst residual {peak:.2e} ≤ 1e-9, transports {transported}/200",
    )


def test_criterion_6_derivative_finite_difference_order():
    rng = np.random.default_rng(6)
    h = 1e-4
    ratios = []
    for _ in range(100):
        # The h² truncation term scales with the third derivative; keep it
        # well above the ~1e-11 rounding floor of (f(t+h)-f(t-h))/2h so the
        # halving ratio actually measures order, not noise.
        while True:
            dim = int(rng.integers(2, 6))
            a, b = random_effect(dim, rng), random_effect(dim, rng)
            t = float(rng.uniform(-10.0, 10.0))
            if _norm(evolution_derivative(b, a, t, n=3)) >= 0.2:
                break
        deriv = evolution_derivative(b, a, t)

        def fd(step):
            plus = effect_evolution(b, a, t + step).matrix
            minus = effect_evolution(b, a, t - step).matrix
            return (plus - minus) / (2.0 * step)

        err_h = _norm(fd(h) - deriv)
        err_half = _norm(fd(h / 2.0) - deriv)
        ratios.append(err_h / err_half)
    lo, hi = min(ratios), max(ratios)
    _report(
        6,
        3.0 <= lo and hi <= 5.0,
        "central differences of the evolution derivative converge at second order (h=1e-4)",
        f"error ratios in [{lo:.3f}, {hi:.3f}] ⊂ [3, 5] over 100 triples",
    )


def test_criterion_7_observable_calculus():
    rng = np.random.default_rng(7)
    sum_res = 0.0
    dist_res = 0.0
    marginal_res = 0.0
    convex_res = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 4))
        obs_a = random_observable(dim, 3, rng)
        obs_b = random_observable(dim, 2, rng)
        obs_b2 = random_observable(dim, 2, rng)
        g = random_effect(dim, rng)
        rho = random_state(dim, rng)
        t = float(rng.uniform(-10.0, 10.0))
        constructed = [
            obs_seq_product(obs_a, obs_b),
            conditioned_observable(obs_b, obs_a),
            obs_evolution(obs_b, g, t),
            obs_time_seq_product(obs_a, obs_b, t),
            time_conditional_observable(obs_b, obs_a, t),
            convex_combination([0.3, 0.7], [obs_b, obs_b2]),
        ]
        for obs in constructed:
            validate_observable(obs.effects, obs.outcomes)
            total = sum(e.matrix for e in obs.effects)
            sum_res = max(sum_res, _norm(total - np.eye(dim)))
            probs = distribution(obs, rho)
            dist_res = max(dist_res, abs(sum(probs.probabilities) - 1.0))

        product = obs_time_seq_product(obs_a, obs_b, t)
        conditional = time_conditional_observable(obs_b, obs_a, t)
        for k, label in enumerate(conditional.outcomes):
            total = sum(
                e.matrix
                for lab, e in zip(product.outcomes, product.effects)
                if lab.endswith("⊗" + label)
            )
            marginal_res = max(marginal_res, _norm(total - conditional.effects[k].matrix))

        mixed = obs_time_seq_product(
            obs_a, convex_combination([0.3, 0.7], [obs_b, obs_b2]), t
        )
        first = obs_time_seq_product(obs_a, obs_b, t)
        second = obs_time_seq_product(obs_a, obs_b2, t)
        for k in range(len(mixed.outcomes)):
            combo = 0.3 * first.effects[k].matrix + 0.7 * second.effects[k].matrix
            convex_res = max(convex_res, _norm(mixed.effects[k].matrix - combo))
    _report(
        7,
        sum_res <= 1e-9
        and dist_res <= 1e-10
        and marginal_res <= 1e-10
        and convex_res <= 1e-10,
        "observable calculus: validation, unit distributions, marginal identity, convex linearity",
        f"sum residual {sum_res:.2e} ≤ 1e-9, distribution {dist_res:.2e} ≤ 1e-10, "
        f"marginal {marginal_res:.2e} ≤ 1e-10, convex {convex_res:.2e} ≤ 1e-10",
    )


def test_criterion_8_spectrum_invariance():
    rng = np.random.default_rng(8)
    res = 0.0
    for _ in range(500):
        dim = int(rng.integers(2, 7))
        a, b = random_effect(dim, rng), random_effect(dim, rng)
        t = float(rng.uniform(-10.0, 10.0))
        evolved = effect_evolution(b, a, t)
        res = max(
            res,
            float(
                np.max(
                    np.abs(
                        np.linalg.eigvalsh(evolved.matrix) - np.linalg.eigvalsh(b.matrix)
                    )
                )
            ),
        )
    _report(
        8,
        res <= 1e-10,
        "eigenvalues of b(t|a) equal those of b on 500 random instances",
        f"max eigenvalue drift {res:.2e} ≤ 1e-10",
    )


def test_criterion_9_scan_determinism_and_optimizer(tmp_path):
    base = ["scan", "--dim", "2", "--trials", "40", "--seed", "123", "--out"]
    assert cli.main(base + [str(tmp_path / "one")]) == 0
    assert cli.main(base + [str(tmp_path / "two")]) == 0
    identical = all(
        (tmp_path / f"one{ext}").read_bytes() == (tmp_path / f"two{ext}").read_bytes()
        for ext in (".json", ".csv")
    )

    doc = json.loads((tmp_path / "one.json").read_text())
    floor = doc["config"]["commutator_floor"]
    sound = all(rec["commutator_norm"] >= floor for rec in doc["records"])
    accounted = doc["summary"]["recorded"] + doc["summary"]["skipped"] == 40

    rng = np.random.default_rng(9)
    cfg = ScanConfig(dim=2, t_window=(-math.pi, math.pi))
    dense_times = np.linspace(-math.pi, math.pi, 100_001)
    max_diff = 0.0
    profile_res = 0.0
    from effectdyn.explorer import random_effect as scan_effect

    for _ in range(20):
        while True:
            a, b = scan_effect(2, rng), scan_effect(2, rng)
            if commutator_norm(a, b) >= 2.0 * cfg.commutator_floor:
                break
        dense = symmetry_gap_profile(a, b, dense_times)
        for k in np.linspace(0, dense_times.size - 1, 7, dtype=int):
            profile_res = max(
                profile_res, abs(dense[k] - symmetry_gap(a, b, float(dense_times[k])))
            )
        _, min_gap = minimize_gap(a, b, cfg)
        max_diff = max(max_diff, abs(min_gap - float(np.min(dense))))
    _report(
        9,
        identical and sound and accounted and max_diff <= 1e-8 and profile_res <= 1e-12,
        "scan reruns are byte-identical; commutator floor is enforced; optimizer matches a dense 10⁵-point scan",
        f"byte-identical {identical}, floor sound {sound}, optimizer |Δmin| {max_diff:.2e} ≤ 1e-8 on 20 pairs",
    )
