"""Acceptance criteria, one test per criterion.

Each test records a one-line verdict; the lines are printed in the pytest
terminal summary (see conftest.py) and by running this file directly.
"""
import json
import math
from pathlib import Path

import numpy as np
import pytest

from hgft.classes import (
    MARGIN_TOL,
    analytic_condition_test,
    coeff_bound_check,
    grid_membership,
    growth_check,
    growth_envelope,
    unit_epsilons,
    weighted_derivative,
)
from hgft.cli import document_to_mapping, load_mapping, mapping_to_document, run_command, save_mapping
from hgft.extremal import caratheodory_extremal, extremal_bn, extremal_full
from hgft.harmonic import (
    ClassParams,
    convex_combination,
    convolve,
    f_epsilon,
    generate_member,
)
from hgft.hypergeo import (
    HGParams,
    build_mapping,
    corollary_condition,
    gauss_value,
    lemma61_sum,
)
from hgft.radii import (
    EMPIRICAL_CAP,
    empirical_convexity_radius,
    known_radius,
    radius_closed_form,
    radius_polynomial,
    smallest_root,
)
from hgft.series import PowerSeries, derivative, evaluate, hadamard_product

RESULTS = {}
GOLDEN = Path(__file__).parent / "golden"

ALPHAS = (0.0, 0.5, 1.0, 2.0)
BETAS = (0.0, 0.25, 0.5, 0.9)
COVERED = ((1, 3), (1, 5), (3, 4), (4, 3), (3, 6), (6, 3), (2, 3), (2, 5), (3, 2), (5, 2), (2, 2))


def record(number, ok, detail):
    RESULTS[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    assert ok, RESULTS[number]


def random_params(rng):
    return ClassParams(float(rng.choice(ALPHAS)), float(rng.choice(BETAS)))


def random_caratheodory(rng, order=24):
    """Truncation of a convex combination of (1 + x z)/(1 - x z), |x| = 1."""
    theta = rng.uniform(0, 2 * np.pi, 3)
    w = rng.dirichlet(np.ones(3))
    n = np.arange(1, order + 1)
    c = 2 * np.sum(w[:, None] * np.exp(1j * theta[:, None] * n), axis=0)
    return PowerSeries(np.concatenate([[1], c]))


def test_criterion_1_sharpness_of_bn_bound():
    worst_slack, worst_margin = 0.0, np.inf
    for n in range(2, 9):
        for a in ALPHAS:
            for b in BETAS:
                params = ClassParams(a, b)
                f = extremal_bn(n, params)
                slack = coeff_bound_check(f, params).slack_b[n - 2]
                worst_slack = max(worst_slack, abs(slack))
                worst_margin = min(worst_margin, grid_membership(f, params).margin)
    record(1, worst_slack <= 1e-15 and worst_margin > 0,
           f"max |slack| {worst_slack:.1e}, min grid margin {worst_margin:.3e}")


def test_criterion_2_epsilon_correspondence():
    rng = np.random.default_rng(2)
    eps = unit_epsilons(32)
    cases = []
    for k in range(200):
        params = random_params(rng)
        cases.append((generate_member(params, seed=k, order=16), params))
    seed = 10_000
    non_members = 0
    while non_members < 20:
        params = random_params(rng)
        f = generate_member(params, seed=seed, order=16, budget=float(rng.uniform(2, 6)))
        seed += 1
        if grid_membership(f, params).verdict == "non-member":
            cases.append((f, params))
            non_members += 1
    disagreements = compared = 0
    for f, params in cases:
        grid = grid_membership(f, params)
        fam = min(analytic_condition_test(f_epsilon(f, e), params, "w_class").margin for e in eps)
        if abs(grid.margin) <= MARGIN_TOL or abs(fam) <= MARGIN_TOL:
            continue
        compared += 1
        disagreements += (grid.margin > 0) != (fam > 0)
    record(2, disagreements == 0,
           f"{disagreements} disagreements over {compared} of {len(cases)} mappings "
           f"(200 members, {non_members} non-members)")


def test_criterion_3_growth_envelope():
    env = growth_envelope(ClassParams(0, 0), 0.5, variant="printed")
    reference = abs(env.lower - 0.689070) <= 1e-6 and abs(env.upper - 0.886294) <= 1e-6

    worst_gap = -np.inf
    for params in (ClassParams(0, 0), ClassParams(1, 0.5), ClassParams(2, 0.25)):
        N = 64
        f = extremal_full(params, N)
        for r in (0.1, 0.3, 0.5, 0.7, 0.9, 0.95, 0.99):
            up = growth_envelope(params, r).upper
            tail = 2 * (1 - params.beta) * r ** (N + 1) / ((N + 1) * (1 + params.alpha * N) * (1 - r))
            gap = up - abs(f(r))
            # the truncated extremal can only fall short of the envelope by its tail
            worst_gap = max(worst_gap, max(gap - tail, -gap) - 1e-6)
    attains = worst_gap <= 0

    rng = np.random.default_rng(3)
    violations = 0
    for k in range(200):
        params = random_params(rng)
        f = generate_member(params, seed=50_000 + k, order=16)
        violations += not growth_check(f, params).ok
    record(3, reference and attains and violations == 0,
           f"envelope(0.5) = ({env.lower:.6f}, {env.upper:.6f}), extremal excess {worst_gap:.1e}, "
           f"{violations} violations in 200 members")


def test_criterion_4_closure():
    rng = np.random.default_rng(4)
    phi = PowerSeries.geometric(32, start=1)
    weights = [rng.dirichlet(np.ones(2)) for _ in range(5)]
    worst = np.inf
    for k in range(50):
        params = random_params(rng)
        f1 = generate_member(params, seed=2 * k, order=32)
        f2 = generate_member(params, seed=2 * k + 1, order=32)
        outs = [convex_combination([f1, f2], list(w)) for w in weights]
        outs += [convolve(f1, f2), convolve(f1, phi, mode="hat")]
        worst = min(worst, min(grid_membership(g, params).margin for g in outs))

    identity_err = 0.0
    for k in range(50):
        params = random_params(rng)
        F1 = generate_member(params, caratheodory=random_caratheodory(rng)).h
        F2 = generate_member(params, caratheodory=random_caratheodory(rng)).h
        a, beta = params.alpha, PowerSeries.from_coeffs([params.beta])
        lhs = weighted_derivative(hadamard_product(F1, F2), a) - beta
        rhs = hadamard_product(weighted_derivative(F1, a) - beta, F2.shift(-1))
        n = min(lhs.order, rhs.order)
        identity_err = max(identity_err, float(np.max(np.abs(lhs.truncate(n).coeffs - rhs.truncate(n).coeffs))))
    record(4, worst > 0 and identity_err <= 1e-14,
           f"min closure margin {worst:.3e}, max convolution identity error {identity_err:.1e}")


def test_criterion_5_radii():
    r1 = smallest_root(radius_polynomial("r1", 0))
    poly = radius_polynomial("r1", 0)
    bracketed = poly(np.array(r1.bracket[0])) * poly(np.array(r1.bracket[1])) <= 0
    ok_r1 = abs(r1.value - 0.2102) <= 1e-3 and r1.residual <= 1e-10 and bracketed
    limit = smallest_root(radius_polynomial("r1", 1)).value
    ok_limit = abs(limit - (math.sqrt(2) - 1)) <= 1e-9

    rng = np.random.default_rng(5)
    worst = np.inf
    for k in range(20):
        params = random_params(rng)
        if k % 2:
            f = generate_member(params, caratheodory=random_caratheodory(rng))
        else:
            f = generate_member(params, seed=k, order=16)
        for p, q in COVERED:
            target = min(known_radius(p, q, params).value, EMPIRICAL_CAP)
            worst = min(worst, empirical_convexity_radius(f, p, q).value - target)
    s22 = radius_closed_form("s22", ClassParams(1, 0)).value
    record(5, ok_r1 and ok_limit and worst >= -1e-3 and s22 == 0.5,
           f"r1 root {r1.value:.10f} (residual {r1.residual:.1e}), beta=1 root {limit:.12f}, "
           f"min empirical - known {worst:.4f}, s22(1,0) = {s22}")


def test_criterion_6_hypergeometric_identities():
    g = [gauss_value(HGParams(1, 1, 3), m) for m in ("gamma", "series")]
    ok_gauss = all(abs(v - 2) <= 1e-12 for v in g)
    worst = 0.0
    points = 0
    for a in (0.25, 0.5, 1.5, 2.0):
        for b in (0.25, 0.5, 1.5, 2.0):
            for d in (1.5, 3.0, 5.0):
                p = HGParams(a, b, a + b + d)
                for which, need in (("i", 1), ("ii", 2), ("iii", 1)):
                    if d <= need:
                        continue
                    closed, series = lemma61_sum(p, which), lemma61_sum(p, which, "series")
                    worst = max(worst, abs(closed - series) / abs(series))
                    points += 1
    hg = HGParams(-2, -2, 1)
    expected = {"f1": [0, 0, 1, 4, 1], "f2": [0, 0, 4, 1, 0], "f3": [0, 0, 1, 2, 1 / 3]}
    exact = all(np.array_equal(build_mapping(s, hg, 4).g.coeffs, np.array(v, dtype=complex))
                for s, v in expected.items())
    record(6, ok_gauss and worst <= 1e-9 and exact,
           f"gauss(1,1,3) = {g}, lemma rel. error {worst:.1e} over {points} evaluations, "
           f"G1/G2/G3 exact: {exact}")


def test_criterion_7_corollary_vacuity():
    satisfied = 0
    for a in np.linspace(0, 4, 10):
        for b in np.linspace(0, 0.99, 10):
            for cid in ("C64i", "C64ii", "C64iii"):
                satisfied += corollary_condition(cid, ClassParams(a, b)).satisfied
    at_zero = [corollary_condition(c, ClassParams(0, 0)).lhs for c in ("C64i", "C64ii", "C64iii")]
    ok = satisfied == 0 and all(x >= y for x, y in zip(at_zero, (18, 13, 37)))
    record(7, ok, f"{satisfied} satisfied of 300, lhs at alpha=0: {at_zero}")


def test_criterion_8_caratheodory_derivative_bounds():
    worst1 = worst2 = np.inf
    where = None
    for theta in (0.0, np.pi / 3, np.pi):
        p = caratheodory_extremal(theta, 64)
        d1 = derivative(p)
        d2 = derivative(d1)
        for r in np.arange(1, 10) / 10:
            z = r * np.exp(2j * np.pi * np.arange(360) / 360)
            v1, v2 = evaluate(d1, z), evaluate(d2, z)
            s1 = float(np.min(np.abs(v1) - ((1 - r) / (1 + r) - 1e-6)))
            s2 = float(np.min(2 / (1 - r * r) + 1e-6 - np.abs(v2 / v1)))
            if min(s1, s2) < min(worst1, worst2):
                where = (round(theta, 4), round(float(r), 2))
            worst1, worst2 = min(worst1, s1), min(worst2, s2)
    record(8, worst1 >= 0 and worst2 >= 0,
           f"min slack |p'| {worst1:.2e}, |p''/p'| {worst2:.2e} (worst at theta, r = {where})")


def test_criterion_9_cli_contract(tmp_path, capsys):
    ok = True
    for argv, name in ((["radius", "--kind", "r1", "--beta", "0"], "radius_r1_beta0.json"),
                       (["hypergeo", "cond", "--id", "C64i"], "hypergeo_cond_C64i.json")):
        run_command(argv)
        ok &= capsys.readouterr().out == (GOLDEN / name).read_text()
    out = tmp_path / "plot.csv"
    run_command(["plot-data", "--radii", "0.25,0.5", "--samples", "16", "--out", str(out)])
    capsys.readouterr()
    ok &= out.read_text() == (GOLDEN / "plot_identity.csv").read_text()

    rng = np.random.default_rng(9)
    exact = 0
    for _ in range(100):
        def pairs(n):
            v = rng.standard_normal((n, 2)) * 10.0 ** rng.integers(-300, 300, size=(n, 2))
            return [[float(x), float(y)] for x, y in v]
        doc = {"alpha": float(rng.uniform(0, 5)), "beta": float(rng.uniform(0, 1)),
               "h": [[0.0, 0.0], [1.0, 0.0]] + pairs(int(rng.integers(0, 10))),
               "g": [[0.0, 0.0]] + pairs(int(rng.integers(0, 10)))}
        f, params = document_to_mapping(doc)
        path = tmp_path / "doc.json"
        save_mapping(f, params, str(path))
        f2, p2 = load_mapping(str(path))
        exact += json.loads(path.read_text()) == doc and mapping_to_document(f2, p2) == doc
    record(9, ok and exact == 100, f"golden files match: {ok}, bit-exact round trips {exact}/100")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
