import math
from math import comb, log2

import pytest

from rsdkit import estimator as est
from rsdkit import ressd
from rsdkit.errors import BadZPrime, InvalidParameters


def test_naive_cost_examples():
    e = est.naive_cost(127, 76, 7)
    assert abs(e.log2_time - (76 * log2(7) + 2 * log2(127))) < 1e-9
    assert abs(e.log2_time - 227.3) < 0.1
    assert est.naive_cost(127, 0, 7).log2_time == 2 * log2(127)
    assert est.naive_cost(127, 76, 1).log2_time == 2 * log2(127)


def test_prange_success_formula():
    assert abs(est.prange_success_log2(127, 76, 7) + 305.5) < 0.1
    assert est.prange_success_log2(10, 4, 2) == -4  # z=2 collapses to 2^-k
    with pytest.raises(InvalidParameters):
        est.prange_success_log2(10, 4, 1)
    c = est.prange_cost(127, 76, 7)
    assert abs(c.log2_time - 305.5) < 0.1
    assert est.prange_cost(127, 76, 7, iteration_cost_log2=20.0).log2_time == pytest.approx(
        c.log2_time + 20.0)


def test_enum_isd_cost_published_optima():
    for (n, k, w, ell, T, M) in [(127, 76, 99, 23, 197, 162),
                                 (187, 111, 144, 34, 285, 238),
                                 (251, 150, 196, 46, 380, 320)]:
        e = est.enum_isd_cost(n, k, 127, 7, w, ell)
        assert abs(e.log2_time - T) <= 3.0
        assert abs(e.log2_memory - M) <= 2.0
        assert e.log2_memory == pytest.approx(
            log2(comb((n + 1) // 2, (w + 1) // 2)) + (w + 1) // 2 * log2(5))


def test_enum_isd_cost_w_zero_boundary():
    e = est.enum_isd_cost(10, 4, 31, 3, 0, 2)
    assert e.breakdown["list1"] == 0.0 and e.breakdown["list2"] == 0.0
    assert e.log2_memory == 0.0
    # collapses to a pure-permutation style cost: T0 = n, P from the zero-list case
    assert e.log2_time < est.enum_isd_cost(10, 4, 31, 3, 2, 2).log2_memory + 100


def test_enum_isd_cost_validation():
    with pytest.raises(InvalidParameters):
        est.enum_isd_cost(10, 4, 31, 2, 2, 2)  # z = 2 has no third section
    with pytest.raises(InvalidParameters):
        est.enum_isd_cost(10, 4, 31, 3, 11, 2)
    with pytest.raises(InvalidParameters):
        est.enum_isd_cost(10, 4, 31, 3, 2, 7)  # ell > n - k


def test_optimizer_matches_exhaustive_tiny():
    best = est.optimize_enum_isd(10, 4, 31, 3)
    brute = None
    for w in range(0, 11):
        for ell in range(1, 7):
            try:
                e = est.enum_isd_cost(10, 4, 31, 3, w, ell)
            except InvalidParameters:
                continue
            if e.log2_time == math.inf:
                continue
            if brute is None or e.log2_time < brute.log2_time:
                brute = e
    assert best.log2_time == brute.log2_time
    assert (best.params["w_enum"], best.params["ell"]) == (
        brute.params["w_enum"], brute.params["ell"])
    # the optimum never exceeds the w=0 boundary cost
    w0 = min(est.enum_isd_cost(10, 4, 31, 3, 0, ell).log2_time for ell in range(1, 7))
    assert best.log2_time <= w0


def test_hybrid_batchcvp_published_row():
    e = est.hybrid_batchcvp_estimate(127, 76, 127, 7, 7)
    assert e.params["g"] == 19
    assert abs(e.breakdown["guesses"] - 53.3) < 0.1
    assert abs(e.breakdown["batch"] - 230.2) < 0.1
    assert abs(e.log2_memory - 157.2) < 0.1
    e6 = est.hybrid_batchcvp_estimate(127, 76, 127, 7, 6)
    assert abs(e6.log2_success + 28.2) < 0.1
    assert e6.params["g"] == 18
    assert abs(e6.breakdown["batch"] - 199.6) < 0.1
    with pytest.raises(BadZPrime):
        est.hybrid_batchcvp_estimate(127, 76, 127, 7, 8)


def test_hybrid_batchcvp_z1_degenerate():
    e = est.hybrid_batchcvp_estimate(127, 76, 127, 7, 1)
    assert e.params["g"] == 0 and e.breakdown["dim"] == 127.0
    assert abs(e.log2_success - 127 * log2(1 / 7)) < 1e-9


def test_listcvp_enum_cost_conventions():
    # bare pruned term: the published tables' enumeration column
    bare = est.listcvp_enum_cost(127, math.sqrt(127 * 14 / 9), volume=127 ** 51,
                                 include_sieve=False)
    assert abs(bare - 30.3) < 0.2
    # unpruned full formula: the downscaled-experiment estimate
    full = est.listcvp_enum_cost(35, 15.8607219255619, volume=127 ** 14, pruning=False)
    assert abs(full - 32.34) < 0.2
    # R -> 0+: only the sieving floor remains
    assert est.listcvp_enum_cost(35, 0.0, volume=127 ** 14) == pytest.approx(0.292 * 35)
    assert est.listcvp_enum_cost(35, 1e-12, volume=127 ** 14) == pytest.approx(
        0.292 * 35, abs=1e-6)


def test_hybrid_listcvp_published_rows(cross_e7):
    e = est.hybrid_listcvp_estimate(127, 76, 127, cross_e7, 3)
    assert abs(e.log2_time - 196.3) < 0.2
    assert abs(e.log2_memory - 26.4) < 0.2
    assert abs(e.breakdown["gh_count"] + 60.3) < 0.2
    assert abs(e.breakdown["sieve"] - 37.1) < 0.05
    e2 = est.hybrid_listcvp_estimate(35, 21, 127, cross_e7, 4)
    assert abs(e2.breakdown["gh_count"] - 20.2) < 0.2
    assert abs(e2.breakdown["enum"] - 28.0) < 0.2
    assert abs(e2.log2_time - 62.2) < 0.2
    e1 = est.hybrid_listcvp_estimate(127, 76, 127, cross_e7, 1)
    assert e1.breakdown["gh_count"] == float("-inf")
    assert e1.breakdown["enum"] == 0.0
    assert abs(e1.log2_time - 397.6) < 0.2


def test_estimates_monotone_in_n(cross_e7):
    k = 30
    for maker in (
        lambda n: est.naive_cost(n, k, 7).log2_time,
        lambda n: est.hybrid_batchcvp_estimate(n, k, 127, 7, 4).log2_time,
        lambda n: est.hybrid_listcvp_estimate(n, k, 127, cross_e7, 4).log2_time,
        lambda n: est.prange_cost(n, k, 7).log2_time,
    ):
        values = [maker(n) for n in (60, 80, 100, 127)]
        assert all(a < b for a, b in zip(values, values[1:])), values


def test_golden_tables_3_4_6_clean():
    for which in (3, 4, 6):
        diffs = est.golden_diff(which)
        assert diffs and all(d.ok for d in diffs), [d for d in diffs if not d.ok]


def test_table6_csv_structure():
    art = est.regenerate_table(6)
    assert len(art.rows) == 28  # four (n, k) blocks, z' = 7..1
    csv_text = art.to_csv()
    assert csv_text.splitlines()[0] == ",".join(art.header)
    # sieve column is 0.292 n exactly
    for row in art.rows:
        assert row["sieve_log2"] == pytest.approx(0.292 * row["n"])


def test_table4_exhaustive_row():
    art = est.regenerate_table(4)
    row3 = next(r for r in art.rows if r["z"] == 3)
    assert row3["max"] == 13 and row3["max_example"] == "{0,6,13}"
    assert row3["protocol"] == "exhaustive"
    assert float(row3["avg"]) == pytest.approx(8.03, abs=0.01)
    for r in art.rows:
        assert r["min"] == r["z"] - 1


def test_table4_sampled_protocol_smoke():
    art = est.regenerate_table(4, diameter_samples=200, sample_seed=7)
    row8 = next(r for r in art.rows if r["z"] == 8)
    assert row8["min"] == 7 and row8["protocol"] == "sampled(200)"
    assert 7 <= row8["max"] <= 126


def test_cost_config_override_flagged():
    cfg = est.CostModelConfig(sieve_time_coeff=0.3, correction_policy="table6")
    e = est.hybrid_listcvp_estimate(35, 21, 127, ressd.cross_restriction(127, 7), 4, cfg)
    assert any("overridden" in note for note in e.notes)
