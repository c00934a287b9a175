"""Acceptance criteria, each at its stated size and tolerance.

Every test records one PASS/FAIL line (shown in the terminal summary)
before asserting.
"""

import math

import numpy as np
import pytest

from osplab.exact import build_corner_chain, build_osp_chain, lst_equal, marginal_U_chain, marginal_V_chain
from osplab.lpp import lpp_batch
from osplab.osp import osp_batch
from osplab.shift import corollary_instance, random_instance, run_shift_test, validate_instance
from osplab.stats import (
    ks_two_sample,
    scaled_absorbing_stat,
    scaled_last_swap_stat,
    tw_reference,
)
from osplab.tasep import verify_coupling_many, verify_height_identity
from osplab.cli import ks_calibration


def test_criterion_01_exact_identity(record):
    details, ok = [], True
    for n in (2, 3, 4, 5, 6):
        cert = lst_equal(build_osp_chain(n), build_corner_chain(n))
        ok &= cert.passed
        details.append(f"N={n}:{cert.n_points}pts")
    record(1, ok, "LST of OSP and corner-growth chains agree exactly; " + " ".join(details))
    assert ok


def test_criterion_02_exact_marginals(record):
    failures = []
    checked = 0
    for n in range(2, 6):
        for k in range(1, n):
            checked += 1
            if not lst_equal(marginal_U_chain(n, k), marginal_V_chain(n, k)).passed:
                failures.append((n, k))
    record(2, not failures, f"{checked} (N, k) marginal certificates, failures {failures}")
    assert not failures


def test_criterion_03_pathwise_coupling(record):
    bad, events = [], 0
    for n in range(2, 9):
        reps = verify_coupling_many(["pushback", "min-identity"], n, 1000, 10.0, 3000 + n)
        for name, rep in reps.items():
            events += rep.events
            if not rep.passed:
                bad.append((n, name, rep.counterexample))
    record(3, not bad, f"N=2..8, 1000 streams each, horizon 10, {events} events; failures {bad}")
    assert not bad


def test_criterion_04_height_identity(record):
    rep = verify_height_identity(1000, 5.0, 4000)
    record(4, rep.passed, f"{rep.streams} trajectories, {rep.checks} event checks, counterexample {rep.counterexample}")
    assert rep.passed


def test_criterion_05_absorbing_time_identity(record):
    n, reps = 100, 100_000
    t_osp, _ = osp_batch(n, range(reps), 5001, keep_u=False)
    t_lpp, _ = lpp_batch(n, range(reps), 5002, keep_v=False)
    ks = ks_two_sample(t_osp, t_lpp)
    ok = ks.p_value > 0.001
    record(5, ok, f"N=100, 1e5 per side: KS D={ks.D:.5f}, p={ks.p_value:.4f} (need > 0.001)")
    assert ok


def test_criterion_06_shift_invariance(record):
    lhs, rhs = corollary_instance(5)
    main = run_shift_test(lhs, rhs, t=2.0, replicas=100_000, seed=6001, alpha=0.001)
    rng = np.random.default_rng(6002)
    generic = []
    for j in range(20):
        inst = random_instance(rng, max_n=4, max_t=3.0)
        assert validate_instance(inst) is None
        generic.append(run_shift_test(inst, replicas=100_000, seed=6100 + j, alpha=0.001))
    rejected = [r.label for r in generic if r.rejected]
    ok = not main.rejected and not rejected
    record(6, ok, f"corollary N=5 t=2 min p={main.min_p:.3g} (threshold {main.threshold:.3g}); "
                  f"20 generic instances, rejected {rejected}")
    assert ok


@pytest.fixture(scope="module")
def lpp_2000():
    return lpp_batch(2000, range(2000), 7001)


def test_criterion_07_tw1_lpp(record, lpp_2000):
    T, _ = lpp_2000
    x = scaled_absorbing_stat(T, 2000)
    ref = tw_reference(1)
    mean, sd = float(x.mean()), float(x.std(ddof=1))
    ok = abs(mean - ref.mean) <= 0.15 and abs(sd - 1.268) <= 0.12
    record(7, ok, f"LPP N=2000, 2000 replicas: mean {mean:.4f} (target {ref.mean:.4f} +/- 0.15), "
                  f"sd {sd:.4f} (target 1.268 +/- 0.12)")
    assert ok


def test_criterion_08_tw2_last_swap(record, lpp_2000):
    n, k = 300, 150
    _, U = osp_batch(n, range(5000), 8001)
    u = scaled_last_swap_stat(U[:, k - 1], n, k)
    _, V = lpp_2000
    v = scaled_last_swap_stat(V[:, 999], 2000, 1000)
    ref = tw_reference(2)
    ok_u = abs(u.mean() - ref.mean) <= 0.2
    ok_v = abs(v.mean() - ref.mean) <= 0.15
    record(8, ok_u and ok_v, f"OSP N=300 k=150: mean {u.mean():.4f} (target {ref.mean:.4f} +/- 0.2); "
                             f"LPP V N=2000 k=1000: mean {v.mean():.4f} (+/- 0.15)")
    assert ok_u and ok_v


def test_criterion_09_small_n_means(record):
    reps = 100_000
    results = {}
    for n, target, tol in ((2, 1.0, 0.02), (3, 2.5, 0.03)):
        results[("osp", n)] = (osp_batch(n, range(reps), 9000 + n, keep_u=False)[0].mean(), target, tol)
        results[("lpp", n)] = (lpp_batch(n, range(reps), 9100 + n, keep_v=False)[0].mean(), target, tol)
    ok = all(abs(m - t) <= tol for m, t, tol in results.values())
    text = ", ".join(f"{e} N={n}: {m:.4f}" for (e, n), (m, _, _) in results.items())
    record(9, ok, text + " (targets 1 +/- 0.02, 2.5 +/- 0.03)")
    assert ok


def test_criterion_10_ks_calibration(record):
    res = ks_calibration("lpp", 3, tests=1000, replicas=1000, alpha=0.01, seed=10_000)
    lo, hi = res["band"]
    record(10, res["passed"], f"{res['rejections']}/1000 null rejections at alpha=0.01, "
                              f"3-sigma band [{lo * 1000:.1f}, {hi * 1000:.1f}]")
    assert res["passed"]
    assert math.isclose(lo + hi, 0.02)
