import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from powerlab import exponents as E


@pytest.fixture(scope="module")
def table():
    return E.load_exponent_table()


def test_table_contains_cited_values(table):
    assert table.get(5, 4) == 4.4386563
    assert table.get(11, 11) == 13.7292224
    assert table.get(14, 5) == 5.2216967
    assert table.get(12, 13) == 16.6110110
    assert table.get(4, Fraction(7, 2)) == 3.849408
    assert len(table.entries) == 21


def test_table_invariant_s_le_lambda_le_2s(table):
    for (k, s), lam in table.entries.items():
        assert s <= lam <= 2 * s


def test_table_rejects_bad_entry():
    with pytest.raises(E.ExponentError):
        E.PermissibleExponentTable({(5, Fraction(4)): 9.0})  # above 2s = 8


def test_alpha_examples(table):
    assert E.alpha_ks(5, 4, table) == pytest.approx(0.7122687, abs=1e-7)
    assert E.alpha_ks(4, Fraction(7, 2), table) == pytest.approx(0.787648, abs=1e-7)


def test_alpha_diagonal_case_is_zero():
    tbl = E.PermissibleExponentTable({(6, Fraction(5)): 10.0})  # lambda = 2s
    assert E.alpha_ks(6, 5, tbl) == 0.0


def test_alpha_missing_entry(table):
    with pytest.raises(KeyError, match="unknown permissible exponent"):
        E.alpha_ks(6, 5, table)


def test_alpha_strictly_decreasing_in_lambda(table):
    base = E.alpha_ks(5, 4, table)
    bumped = E.PermissibleExponentTable(
        {k: v + (0.01 if k == (5, Fraction(4)) else 0.0)
         for k, v in table.entries.items()})
    assert E.alpha_ks(5, 4, bumped) < base


def test_holder_k1_weight():
    sys1 = E.k1_system()
    assert sys1.weight(7) == Fraction(3960, 619)
    assert float(sys1.weight(7)) == pytest.approx(6.3974151, abs=1e-7)
    assert sum(Fraction(1) / sys1.weight(k) for k in E.K1) == 1


def test_holder_k2_weight():
    sys2 = E.k2_system()
    assert 4 * float(sys2.weight(4)) == pytest.approx(7.0179948, abs=1e-6)
    assert sum(Fraction(1) / sys2.weight(k) for k in E.K2) == 1


def test_holder_two_element_trivial():
    sys = E.HolderSystem((3, 5), {3: Fraction(2)}, free_index=5)
    assert E.solve_holder(sys) == Fraction(2)


def test_holder_infeasible():
    sys = E.HolderSystem((3, 5), {3: Fraction(1)}, free_index=5)
    with pytest.raises(E.ExponentError, match="infeasible"):
        E.solve_holder(sys)


def test_unsolved_system_raises():
    sys = E.HolderSystem((3, 5), {3: Fraction(2)}, free_index=5)
    with pytest.raises(E.ExponentError, match="weights missing"):
        sys.weight(3)


@given(st.lists(st.integers(min_value=3, max_value=60), min_size=1, max_size=6,
                unique=True))
def test_holder_reciprocals_sum_to_one(weights):
    degrees = tuple(range(2, 2 + len(weights) + 1))
    fixed = {k: Fraction(w) for k, w in zip(degrees[:-1], weights)}
    sys = E.HolderSystem(degrees, dict(fixed), free_index=degrees[-1])
    if sum(Fraction(1) / w for w in fixed.values()) >= 1:
        with pytest.raises(E.ExponentError):
            E.solve_holder(sys)
        return
    E.solve_holder(sys)
    total = sum(1.0 / float(sys.weight(k)) for k in degrees)
    assert abs(total - 1.0) <= 1e-12


def test_alpha_k1_value_and_delta1(table):
    a, d1 = E.alpha_K1(table)
    assert a == pytest.approx(0.7508985, abs=2e-6)
    assert d1 == pytest.approx(0.0008985, abs=2e-6)
    assert d1 > 0


def test_alpha_k1_convex_combination_of_equal_inputs():
    # lambda = 2s - 3k/4 makes every alpha_{k,s} equal 3/4 exactly
    entries = {}
    for (k, s) in [(5, 4), (6, 6), (7, 6), (7, 7), (8, 8), (9, 9),
                   (10, 10), (11, 11)]:
        entries[(k, Fraction(s))] = 2 * s - 0.75 * k
    a, d1 = E.alpha_K1(E.PermissibleExponentTable(entries))
    assert abs(a - 0.75) < 1e-12
    assert abs(d1) < 1e-12


def test_alpha_k1_convexity_bounds(table):
    sys1 = E.k1_system()
    alphas = [E.alpha_ks(k, sys1.weight(k), table) for k in E.K1 if k != 7]
    alphas += [E.alpha_ks(7, 6, table), E.alpha_ks(7, 7, table)]
    a, _ = E.alpha_K1(table, sys1)
    assert min(alphas) <= a <= max(alphas)


def test_theta_sigma_values(table):
    cases = {
        (13, 4): (0.01721257, 0.58202682),
        (14, 4): (0.01384513, 0.5553779),
        (14, 5): (0.02117723, 0.6482762),
    }
    for (k, s), (t_target, s_target) in cases.items():
        th, sg = E.theta_sigma(k, s, table)
        assert th == pytest.approx(t_target, abs=5e-7)
        assert sg == pytest.approx(s_target, abs=5e-7)


def test_theta_root_identity(table):
    for (k, s) in [(13, 4), (14, 4), (14, 5)]:
        th, _ = E.theta_sigma(k, s, table)
        lam_s, lam_2s = table.get(k, s), table.get(k, 2 * s)
        lhs = 1 + th + (4 / k - th) * lam_s
        rhs = 1 - (k - 1) / 2 * th + 0.5 * (4 / k - th) * lam_2s
        assert abs(lhs - rhs) <= 1e-12


def test_theta_vanishes_when_moments_balance():
    entries = {(13, Fraction(4)): 4.2, (13, Fraction(8)): 8.4,
               (13, Fraction(3)): 3.1}
    th, sg = E.theta_sigma(13, 4, E.PermissibleExponentTable(entries))
    assert th == 0.0
    assert sg == pytest.approx(0.25 + 4.2 / 13, abs=1e-15)


def test_theta_sigma_unsupported_pair(table):
    with pytest.raises(E.ExponentError, match="undefined"):
        E.theta_sigma(12, 4, table)


def test_sigma_primes(table):
    sp = E.sigma_primes(table)
    assert sp[(13, 4)] == pytest.approx(0.5630657, abs=5e-7)
    assert sp[(14, 4)] == pytest.approx(0.5399863, abs=5e-7)
    assert sp[(14, 5)] == pytest.approx(0.6321008, abs=5e-7)
    for (k, s), val in sp.items():
        _, sg = E.theta_sigma(k, s, table)
        assert val < sg


def test_lambda_rho_chain(table):
    lr = E.solve_lambda_rho(table)
    assert lr.u1 == pytest.approx(0.4827948, abs=2e-6)
    assert lr.u2 == pytest.approx(0.5750298, abs=2e-6)
    assert lr.lam == pytest.approx(0.9155538, abs=2e-6)
    assert lr.rho == pytest.approx(0.004453, abs=2e-6)
    assert lr.rho_prime == pytest.approx(0.0109875, abs=2e-6)
    # the declared lemma constants dominate in the safe direction
    assert E.RHO_DECLARED >= lr.rho
    assert lr.rho > 0


def test_alpha_k2(table):
    a, margin = E.alpha_K2(table)
    assert a == pytest.approx(0.7834034, abs=2e-6)
    assert margin == pytest.approx(0.7834034 - 0.75, abs=2e-6)
    assert E.alpha_ks(12, 13, table) == pytest.approx(0.7824157, abs=2e-7)


def test_alpha_k2_coefficients_sum_to_one():
    sys2 = E.k2_system()
    coeff = sum(Fraction(1) / sys2.weight(k) for k in E.K2)
    assert coeff == 1


def test_delta2(table):
    _, _ = E.alpha_K1(table)
    aK2, _ = E.alpha_K2(table)
    lr = E.solve_lambda_rho(table)
    d2 = E.delta2(E.RHO_DECLARED, lr.lam, aK2)
    assert d2 == pytest.approx(0.001651382, abs=3e-6)
    assert E.delta2(0.0, 1.0, 1.0) == pytest.approx(2 / 9, abs=1e-15)
    lam, rho = 0.9, 0.003
    alpha_root = 1 + 5 * rho / lam - 2 / (9 * lam)
    assert abs(E.delta2(rho, lam, alpha_root)) <= 1e-15


def test_arc_exponents():
    q1, q2, ok = E.arc_exponents(E.RHO_DECLARED)
    assert ok
    assert q2 < 0.4533505
    assert q2 < q1
    # identity route: q1 - q2 = (17/36 + rho) - (16/36 + 2 rho) = 1/36 - rho
    assert q1 - q2 == pytest.approx(1 / 36 - E.RHO_DECLARED, abs=1e-15)
    _, q2z, _ = E.arc_exponents(0.0)
    assert q2z == pytest.approx(4 / 9, abs=1e-15)


def test_report_validates(table):
    rep = E.build_report(table)
    assert 2 / 3 < rep.lam < 1
    assert rep.delta1 > 0 and rep.delta2 > 0 and rep.rho_computed > 0
    assert rep.q2_exp < rep.q1_exp
    assert rep.kappa1 == pytest.approx(sum(2 / k for k in E.K1))
    assert rep.kappa2 == pytest.approx(sum(4 / k for k in E.K2))
    assert all(v > 0 for v in rep.shifted_deltas.values())
    # declared delta1 stays below the recomputed saving (safe direction)
    assert E.DELTA1_DECLARED <= rep.delta1


def test_verify_all_passes(table):
    rows = E.verify_all(table)
    assert len(rows) >= 25
    assert E.all_pass(rows)
    dicts = E.check_rows_as_dicts(rows)
    assert set(dicts[0]) == {"name", "computed", "paper_value", "tolerance",
                             "pass"}


def test_verify_all_detects_perturbation(table):
    bumped = E.PermissibleExponentTable(
        {k: v + (0.1 if k == (5, Fraction(4)) else 0.0)
         for k, v in table.entries.items()})
    rows = E.verify_all(bumped)
    failing = {r.name for r in rows if not r.passed}
    assert "alpha_K1" in failing
    assert "alpha_5,4" in failing


def test_verify_all_missing_entry_fails_without_crash(table):
    entries = dict(table.entries)
    del entries[(13, Fraction(3))]
    rows = E.verify_all(E.PermissibleExponentTable(entries))
    assert rows and not E.all_pass(rows)
    assert all(math.isnan(r.computed) for r in rows)
