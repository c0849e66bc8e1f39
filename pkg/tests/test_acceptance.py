"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Reference values are the published benchmark tables (closed-form row, finest
PDE rows, and the strike/correlation feedback ladder).  Criteria that this
faithful implementation of the printed scheme cannot meet are left to fail
with full detail in the assertion message; the accompanying notes document
the variant sweep showing the published cells are not outputs of the printed
algorithm.  Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import math
import time

import numpy as np
import pytest

from spreadpde import (
    ImpactParams,
    MarketParams,
    McConfig,
    OperatorConfig,
    SpreadPayoff,
    Surface,
    apply_adx,
    apply_adxdy,
    build_grid,
    interpolate_at,
    margrabe_price,
    mc_spread_price,
    payoff_surface,
    solve_full,
    solve_v0,
    solve_tridiagonal,
)
from spreadpde.adi import compute_g
from spreadpde.operators import TridiagonalSystem
from spreadpde.stability import amplification_grid_max, bound_constant, stability_bound

RHOS = (0.1, 0.5, 0.7, 0.9)
MATURITIES = (0.1, 0.3, 0.5, 0.7, 1.0)
LADDER = ((50, 100), (100, 100), (200, 200))
SPOT = (112.0, 104.0)
RATE = 0.05

# closed-form reference row of the convergence table
MARGRABE_REF = {
    0.1: (8.2323, 9.2462, 10.1723, 10.9892, 12.0666),
    0.5: (8.0692, 8.6235, 9.2294, 9.7949, 10.5648),
    0.7: (8.0186, 8.3128, 8.7115, 9.1110, 9.6775),
    0.9: (8.0005, 8.0588, 8.2015, 8.3799, 8.6675),
}

# finest published PDE rows (m = l = 200)
PDE_FINE_REF = {
    0.1: (8.2153, 9.2373, 10.1607, 10.9727, 12.0041),
    0.5: (8.0687, 8.6222, 9.2209, 9.7843, 10.5636),
    0.7: (7.9950, 8.3023, 8.7106, 9.1035, 9.6728),
    0.9: (7.9938, 8.0515, 8.2032, 8.3686, 8.6571),
}

# feedback ladder at equal spots (100, 100), T = 0.4, m = l = 100, r = 0.05
FEEDBACK_STRIKES = (-15.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0, 20.0)
FEEDBACK_SPOT = (100.0, 100.0)
FEEDBACK_REF = {
    0.1: (
        (15.0929, 7.1600, 5.3275, 4.2936, 3.4027, 2.3395, 1.1267, 0.1905),
        (0.0001, 0.0005, 0.0005, 0.0005, 0.0005, 0.0005, 0.0003, 0.00006),
    ),
    0.5: (
        (14.7992, 6.2972, 4.3645, 3.3368, 2.4486, 1.4909, 0.5435, 0.0426),
        (0.0001, 0.0007, 0.0009, 0.0009, 0.0009, 0.0007, 0.0003, 0.00003),
    ),
    0.7: (
        (14.7085, 5.7956, 3.7731, 2.7085, 1.8642, 0.9981, 0.2593, 0.0055),
        (0.00006, 0.0009, 0.0013, 0.0013, 0.0012, 0.0009, 0.0004, 0.00001),
    ),
    0.9: (
        (14.6833, 5.2299, 3.0523, 1.9601, 1.1531, 0.4387, 0.0088, 0.0029),
        (0.00003, 0.0013, 0.0020, 0.0020, 0.0018, 0.0012, 0.0003, 0.00000),
    ),
}


def _market(rho, r=RATE, sigma1=0.15, sigma2=0.10):
    return MarketParams(sigma1=sigma1, sigma2=sigma2, rho=rho, r=r)


def _report(criterion: int, label: str, failures: list[str]) -> None:
    status = "PASS" if not failures else "FAIL"
    print(f"CRITERION {criterion} ({label}): {status}")
    assert not failures, f"criterion {criterion} ({label}):\n" + "\n".join(failures)


# ---------------------------------------------------------------------------
# shared heavy computations
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def pde_ladder():
    """Base-price values at every (rho, T, rung) plus per-solve wall times."""
    values: dict[tuple, float] = {}
    solve_seconds: dict[tuple, float] = {}
    for rho in RHOS:
        market = _market(rho)
        for T in MATURITIES:
            for m, l in LADDER:
                grid = build_grid(200.0, m, l, T)
                started = time.perf_counter()
                levels = solve_v0(grid, market, SpreadPayoff(0.0))
                solve_seconds[(rho, T, m)] = time.perf_counter() - started
                values[(rho, T, m)] = interpolate_at(levels[0], grid, *SPOT)
    return values, solve_seconds


@pytest.fixture(scope="module")
def feedback_ladder():
    """Combined prices and excess prices over the strike/correlation ladder."""
    prices: dict[tuple, float] = {}
    excesses: dict[tuple, float] = {}
    worst_v1 = 0.0
    payoff_max = 0.0
    excess_surfaces: dict[tuple, np.ndarray] = {}
    grid = build_grid(200.0, 100, 100, 0.4)
    impact = ImpactParams()
    for rho in RHOS:
        market = _market(rho)
        for k in FEEDBACK_STRIKES:
            result = solve_full(grid, market, impact, SpreadPayoff(k))
            prices[(rho, k)] = interpolate_at(result.combined_t0, grid, *FEEDBACK_SPOT)
            excesses[(rho, k)] = impact.epsilon * interpolate_at(
                result.v1_levels[0], grid, *FEEDBACK_SPOT
            )
            worst_v1 = min(
                worst_v1, min(float(s.values.min()) for s in result.v1_levels)
            )
            payoff_max = max(
                payoff_max, float(np.abs(result.v0_levels[grid.L].values).max())
            )
            if rho == 0.7 and k in (0.0, 5.0):
                excess_surfaces[(rho, k)] = (
                    impact.epsilon * result.v1_levels[0].values.copy()
                )
    return {
        "grid": grid,
        "prices": prices,
        "excesses": excesses,
        "worst_v1": worst_v1,
        "payoff_max": payoff_max,
        "excess_surfaces": excess_surfaces,
    }


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def test_criterion_1_margrabe_closed_form():
    failures = []
    started = time.perf_counter()
    computed = {
        (rho, T): margrabe_price(*SPOT, _market(rho), T)
        for rho in RHOS
        for T in MATURITIES
    }
    elapsed = time.perf_counter() - started
    for (rho, T), value in computed.items():
        ref = MARGRABE_REF[rho][MATURITIES.index(T)]
        if abs(value - ref) > 5e-4:
            failures.append(f"  rho={rho} T={T}: {value:.5f} vs {ref} (> 5e-4)")
    if elapsed >= 1e-3:
        failures.append(f"  runtime {elapsed * 1e3:.3f} ms >= 1 ms")
    _report(1, "closed form reproduces all 20 reference cells", failures)


def test_criterion_2_finest_grid_reproduction(pde_ladder):
    values, seconds = pde_ladder
    failures = []
    n_ok = 0
    for rho in RHOS:
        for j, T in enumerate(MATURITIES):
            ref = PDE_FINE_REF[rho][j]
            value = values[(rho, T, 200)]
            if abs(value - ref) <= 5e-3:
                n_ok += 1
            else:
                failures.append(
                    f"  rho={rho} T={T}: computed {value:.4f} vs published {ref} "
                    f"(|diff| = {abs(value - ref):.4f} > 5e-3)"
                )
            if seconds[(rho, T, 200)] >= 30.0:
                failures.append(f"  rho={rho} T={T}: solve took {seconds[(rho, T, 200)]:.1f}s")
    if failures:
        failures.insert(
            0,
            f"  {n_ok}/20 finest-grid cells reproduced within 5e-3 (stated count: 12); "
            "see notes: the published rows are not outputs of the printed scheme",
        )
    _report(2, "finest-grid cells match published values", failures)


def test_criterion_3_convergence_ladder(pde_ladder):
    values, _ = pde_ladder
    failures = []
    for rho in RHOS:
        market = _market(rho)
        for T in MATURITIES:
            closed = margrabe_price(*SPOT, market, T)
            errs = [abs(values[(rho, T, m)] - closed) for m, _ in LADDER]
            if not (errs[0] > errs[1] > errs[2]):
                failures.append(
                    f"  rho={rho} T={T}: |error| ladder {errs[0]:.4g}, {errs[1]:.4g}, "
                    f"{errs[2]:.4g} is not strictly decreasing"
                )
            if errs[2] > 0.0 and errs[1] > 0.0:
                order = math.log2(errs[1] / errs[2])
                if order < 0.8:
                    failures.append(
                        f"  rho={rho} T={T}: observed order {order:.2f} < 0.8"
                    )
    _report(3, "errors shrink monotonically with order >= 0.8", failures)


def test_criterion_4_feedback_ladder(feedback_ladder):
    prices = feedback_ladder["prices"]
    excesses = feedback_ladder["excesses"]
    failures = []
    n_price_ok = n_excess_ok = 0
    for rho in RHOS:
        price_ref, excess_ref = FEEDBACK_REF[rho]
        for j, k in enumerate(FEEDBACK_STRIKES):
            price = prices[(rho, k)]
            excess = excesses[(rho, k)]
            if abs(price - price_ref[j]) <= 5e-3:
                n_price_ok += 1
            else:
                failures.append(
                    f"  price rho={rho} k={k:g}: {price:.4f} vs {price_ref[j]} "
                    f"(|diff| = {abs(price - price_ref[j]):.4f} > 5e-3)"
                )
            if abs(excess - excess_ref[j]) <= 5e-4:
                n_excess_ok += 1
            else:
                failures.append(
                    f"  excess rho={rho} k={k:g}: {excess:.5f} vs {excess_ref[j]} "
                    f"(|diff| = {abs(excess - excess_ref[j]):.5f} > 5e-4)"
                )
            if excess < 0.0:
                failures.append(
                    f"  excess rho={rho} k={k:g}: {excess:.2e} is negative"
                )
    if failures:
        failures.insert(
            0,
            f"  prices: {n_price_ok}/32 within 5e-3, excesses: {n_excess_ok}/32 "
            "within 5e-4; see notes on the published ladder's correlation trend",
        )
    _report(4, "feedback prices and excess prices match published ladder", failures)


def test_criterion_5_property_suite(feedback_ladder):
    failures = []
    cfg = OperatorConfig()
    grid = build_grid(200.0, 24, 12, 0.4)
    market = _market(0.7)
    payoff = SpreadPayoff(0.0)

    # (a) vanishing impact shape degenerates to the base price bit for bit
    degen = solve_full(grid, market, ImpactParams(beta=0.0), payoff, cfg)
    if not np.array_equal(degen.combined_t0.values, degen.v0_levels[0].values):
        failures.append("  (a) combined != v0 bitwise with a vanishing impact shape")

    # (b) source nonpositive on randomized curvature surfaces
    rng = np.random.default_rng(101)
    x = grid.x_nodes[:, None]
    y = grid.y_nodes[None, :]
    for _ in range(25):
        rho = float(rng.uniform(-1.0, 1.0))
        bumps = sum(
            rng.normal()
            * np.exp(
                -((x - rng.uniform(0, 200)) ** 2 + (y - rng.uniform(0, 200)) ** 2)
                / rng.uniform(200, 2000)
            )
            for _ in range(4)
        )
        g = compute_g(
            Surface(values=bumps * 50.0, time_index=grid.L),
            grid,
            _market(rho),
            ImpactParams(),
            0.0,
        ).values.values
        if g.max() > 0.0:
            failures.append(f"  (b) positive source encountered: max G = {g.max():.2e}")
            break

    # (c) correction bounded below by -1e-8 * max payoff
    worst_v1 = feedback_ladder["worst_v1"]
    floor = -1e-8 * feedback_ladder["payoff_max"]
    if worst_v1 < floor:
        failures.append(
            f"  (c) min V1 = {worst_v1:.3e} < {floor:.3e}; the correction rings to "
            "about -9e-4 at the impact-band edges (structural for the printed "
            "scheme with a discontinuous band; see notes)"
        )

    # (d) terminal conditions exact
    result = solve_full(grid, market, ImpactParams(), payoff, cfg)
    if not np.array_equal(
        result.v0_levels[grid.L].values, payoff_surface(grid, payoff).values
    ):
        failures.append("  (d) terminal v0 level differs from the payoff")
    if result.v1_levels[grid.L].values.any():
        failures.append("  (d) terminal v1 level is not identically zero")

    # (e) operator linearity and polynomial exactness
    lin_rng = np.random.default_rng(7)
    for _ in range(10):
        u = Surface(values=lin_rng.normal(size=(25, 25)), time_index=0)
        v = Surface(values=lin_rng.normal(size=(25, 25)), time_index=0)
        a, b = lin_rng.normal(size=2)
        combo = Surface(values=a * u.values + b * v.values, time_index=0)
        lhs = apply_adx(combo, grid, market, cfg).values
        rhs = a * apply_adx(u, grid, market, cfg).values + b * apply_adx(
            v, grid, market, cfg
        ).values
        if not np.allclose(lhs, rhs, rtol=0, atol=1e-12 * (np.abs(rhs).max() + 1)):
            failures.append("  (e) x-operator is not linear")
            break
    quad = Surface(values=(x * x) * np.ones_like(y), time_index=0)
    qm = MarketParams(sigma1=0.2, sigma2=0.1, rho=0.0, r=0.0)
    got = apply_adx(quad, grid, qm, cfg).values[1:-1]
    want = (0.04 * x * x)[1:-1] * np.ones((1, grid.N + 1))
    if not np.allclose(got, want, rtol=1e-12):
        failures.append("  (e) x-stencil is not exact on quadratics")
    bil = Surface(values=x * y, time_index=0)
    got = apply_adxdy(bil, grid, _market(0.7, r=0.0)).values
    if not np.allclose(got, 0.0105 * x * y, rtol=1e-12, atol=1e-12):
        failures.append("  (e) cross stencil is not exact on bilinear data")

    # (f) tridiagonal solves vs a dense oracle on 1000 random systems
    tri_rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(tri_rng.integers(3, 50))
        lower = tri_rng.normal(size=n)
        upper = tri_rng.normal(size=n)
        lower[0] = 0.0
        upper[-1] = 0.0
        diag = np.abs(lower) + np.abs(upper) + tri_rng.uniform(1.0, 2.0, size=n)
        rhs = tri_rng.normal(size=n)
        got = solve_tridiagonal(TridiagonalSystem(lower, diag, upper, rhs))
        dense = np.diag(diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1)
        residual = np.abs(dense @ got - rhs).max()
        if residual > 1e-10 * max(np.abs(rhs).max(), 1e-30):
            failures.append(f"  (f) residual {residual:.2e} exceeds 1e-10 relative")
            break
        if not np.allclose(got, np.linalg.solve(dense, rhs), rtol=0, atol=1e-10):
            failures.append("  (f) disagreement with the dense oracle")
            break

    _report(5, "property suite", failures)


def test_criterion_6_stability_diagnostics():
    failures = []
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(100):
        s1 = float(rng.uniform(0.05, 0.6))
        s2 = float(rng.uniform(0.05, 0.6))
        rho = float(rng.uniform(-1.0, 1.0))
        c_hat = abs(rho) * s2 / (2.0 * s1)
        a1 = float(rng.uniform(0.0, 1.0)) * bound_constant(c_hat)
        a2 = (s2 / s1) ** 2 * a1
        c2 = rho * s2 / (2.0 * s1) * a1
        worst = max(worst, amplification_grid_max(a1, a2, c2=c2))
    if worst > 1.0 + 1e-12:
        failures.append(f"  grid max |g|^2 = {worst} exceeds 1 + 1e-12")
    params = _market(0.7)
    for m in (25, 50, 100):
        coarse = stability_bound(build_grid(200.0, m, 100, 0.4), params)
        fine = stability_bound(build_grid(200.0, 2 * m, 100, 0.4), params)
        if coarse.dt_max != 4.0 * fine.dt_max:
            failures.append(f"  dt_max does not scale exactly by 4 at m={m}")
    _report(6, "amplification scan and exact dx^2 scaling", failures)


def test_criterion_7_mc_cross_validation():
    failures = []
    market = _market(0.7)
    payoff = SpreadPayoff(5.0)
    grid = build_grid(200.0, 200, 200, 0.4)
    levels = solve_v0(grid, market, payoff)
    pde = interpolate_at(levels[0], grid, *SPOT)
    started = time.perf_counter()
    mc, stderr = mc_spread_price(
        SPOT[0], SPOT[1], payoff, market, 0.4, McConfig(n_paths=1_000_000, seed=12345)
    )
    elapsed = time.perf_counter() - started
    if abs(pde - mc) > 3.0 * stderr:
        failures.append(
            f"  |pde - mc| = {abs(pde - mc):.5f} > 3*stderr = {3 * stderr:.5f}"
        )
    if elapsed >= 10.0:
        failures.append(f"  MC runtime {elapsed:.1f}s >= 10s")
    print(
        f"  strike-5 cross-check: pde = {pde:.5f}, mc = {mc:.5f} +- {stderr:.5f}, "
        f"z = {abs(pde - mc) / stderr:.2f}, {elapsed:.2f}s"
    )
    _report(7, "PDE vs Monte Carlo at nonzero strike", failures)


def test_criterion_8_excess_surface_shape(feedback_ladder):
    failures = []
    grid = feedback_ladder["grid"]
    excesses = feedback_ladder["excesses"]

    for key, surface in feedback_ladder["excess_surfaces"].items():
        if surface.min() < 0.0:
            failures.append(
                f"  excess surface rho={key[0]} k={key[1]:g}: min {surface.min():.2e} "
                "< 0 (band-edge ringing; see notes)"
            )
        m_peak, n_peak = np.unravel_index(np.argmax(surface), surface.shape)
        x_peak = grid.x_nodes[m_peak]
        if not (60.0 < x_peak < 140.0):
            failures.append(
                f"  excess surface rho={key[0]} k={key[1]:g}: peak at x = {x_peak} "
                "is not strictly inside the impact band (60, 140)"
            )

    for rho in RHOS:
        row = [excesses[(rho, k)] for k in FEEDBACK_STRIKES]
        i_peak = int(np.argmax(row))
        tol = 1e-12
        left_ok = all(row[i] <= row[i + 1] + tol for i in range(i_peak))
        right_ok = all(row[i] >= row[i + 1] - tol for i in range(i_peak, len(row) - 1))
        if not (left_ok and right_ok):
            failures.append(
                f"  rho={rho}: excess ladder {['%.5f' % v for v in row]} is not "
                "unimodal toward zero"
            )
    _report(8, "excess surface: sign, band peak, monotone strike decay", failures)
