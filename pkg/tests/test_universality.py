import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from periodorbits import (
    CoverageError,
    DomainError,
    NotRenormalizableError,
    PrecisionFloorError,
    ScanConfig,
    UnimodalFamily,
    alpha_ratios,
    block_rate,
    cascade,
    doubling_operator,
    feigenbaum_delta,
    find_superstable,
    lambda_inf_extrapolate,
    pattern_row,
    period_doubling_ladder,
    universal_function_approx,
    verify_pattern_against_scan,
)
from periodorbits.dynamics import iterate
from periodorbits.universality import critical_distance, pattern_walk, scan_odd_records

# rows 1..16 as (increments, spans, indices)
PATTERN_TABLE = {
    1: ([2], [16], [1]),
    2: ([4, -2], [8, 8], [1, 2]),
    3: ([4, 2, -4], [8, 4, 4], [1, 2, 3]),
    4: ([6, -2, 2, -4], [4, 4, 4, 4], [1, 4, 2, 3]),
    5: ([6, -2, 2, 2, -6], [4, 4, 4, 2, 2], [1, 4, 2, 3, 5]),
    6: ([6, -2, 4, -2, 2, -6], [4, 4, 2, 2, 2, 2], [1, 4, 2, 6, 3, 5]),
    7: ([6, 2, -4, 4, -2, 2, -6], [4, 2, 2, 2, 2, 2, 2], [1, 4, 7, 2, 6, 3, 5]),
    8: ([8, -2, 2, -4, 4, -2, 2, -6], [2] * 8, [1, 8, 4, 7, 2, 6, 3, 5]),
    9: ([8, -2, 2, -4, 4, -2, 2, 2, -8], [2] * 7 + [1] * 2, [1, 8, 4, 7, 2, 6, 3, 5, 9]),
    10: ([8, -2, 2, -4, 4, -2, 4, -2, 2, -8], [2] * 6 + [1] * 4, [1, 8, 4, 7, 2, 6, 3, 10, 5, 9]),
    11: ([8, -2, 2, -4, 4, 2, -4, 4, -2, 2, -8], [2] * 5 + [1] * 6, [1, 8, 4, 7, 2, 6, 11, 3, 10, 5, 9]),
    12: ([8, -2, 2, -4, 6, -2, 2, -4, 4, -2, 2, -8], [2] * 4 + [1] * 8,
         [1, 8, 4, 7, 2, 12, 6, 11, 3, 10, 5, 9]),
    13: ([8, -2, 2, 2, -6, 6, -2, 2, -4, 4, -2, 2, -8], [2] * 3 + [1] * 10,
         [1, 8, 4, 7, 13, 2, 12, 6, 11, 3, 10, 5, 9]),
    14: ([8, -2, 4, -2, 2, -6, 6, -2, 2, -4, 4, -2, 2, -8], [2] * 2 + [1] * 12,
         [1, 8, 4, 14, 7, 13, 2, 12, 6, 11, 3, 10, 5, 9]),
    15: ([8, 2, -4, 4, -2, 2, -6, 6, -2, 2, -4, 4, -2, 2, -8], [2] + [1] * 14,
         [1, 8, 15, 4, 14, 7, 13, 2, 12, 6, 11, 3, 10, 5, 9]),
    16: ([10, -2, 2, -4, 4, -2, 2, -6, 6, -2, 2, -4, 4, -2, 2, -8], [1] * 16,
         [1, 16, 8, 15, 4, 14, 7, 13, 2, 12, 6, 11, 3, 10, 5, 9]),
}


# --- cascade estimators ----------------------------------------------------------

def test_delta_of_geometric_ladder():
    r = 0.3
    ladder = [1.0 - r**s for s in range(6)]
    assert feigenbaum_delta(ladder) == pytest.approx([1 / r] * 4, rel=1e-12)


def test_delta_errors():
    with pytest.raises(DomainError):
        feigenbaum_delta([0.9, 0.8])
    with pytest.raises(DomainError):
        feigenbaum_delta([0.9, 0.8, 0.8])


def test_lambda_inf_geometric_ladder():
    # one step of the stated extrapolation is exact when the next gap is the last over delta
    r = 0.25
    ladder = [2.0 + r**s for s in range(5)]
    step = lambda_inf_extrapolate(ladder, 1 / r)
    assert step == pytest.approx(ladder[-1] + (ladder[-1] - ladder[-2]) * r)
    with pytest.raises(DomainError):
        lambda_inf_extrapolate(ladder, 1.0)
    with pytest.raises(DomainError):
        lambda_inf_extrapolate(ladder[:1], 4.0)


def test_alpha_ratios_alternate_in_sign():
    est = cascade("logistic", 3, 1, 4)
    assert all(a < 0 for a in est.alphas)
    assert [d > 0 for d in est.d_values] == [True, False, True, False, True]
    assert est.alphas[0] == pytest.approx(-2.454268432041252, abs=1e-6)
    assert est.alphas[-1] == pytest.approx(-2.502259346885118, rel=1e-4)


def test_pure_doubling_cascade_has_no_first_ratio():
    est = cascade("logistic", 1, 1, 4)
    assert est.alphas[0] is None and est.d_values[0] is None
    assert est.alphas[-1] == pytest.approx(-2.5029, abs=0.01)


def test_critical_distance_precision_floor():
    # the 2-orbit at the period-1 parameter collapses onto the critical point
    with pytest.raises(PrecisionFloorError):
        critical_distance("logistic", 0.5, 2)


def test_logistic_seven_two_first_ratio():
    ladder = period_doubling_ladder("logistic", 7, 2, 2)
    assert alpha_ratios("logistic", 7, 2, ladder)[0] == pytest.approx(-2.441360908576077, abs=1e-6)


def test_sine_seven_one_alpha():
    est = cascade("sine", 7, 1, 4)
    assert est.alphas[-1] == pytest.approx(-2.502632946021479, rel=1e-4)


def test_quartic_nine_three_delta():
    est = cascade("quartic", 9, 3, 4)
    assert est.deltas[-1] == pytest.approx(7.292133658, rel=5e-3)


def test_lambda_inf_seven_two():
    est = cascade("logistic", 7, 2, 4)
    assert est.lambda_inf == pytest.approx(0.89250934498693, abs=1e-6)


def test_estimates_invariant_under_affine_reparameterisation():
    doubled = UnimodalFamily("logistic-2x", 0.5, lambda lam, x: 2.0 * lam * x * (1.0 - x))
    base = period_doubling_ladder("logistic", 3, 1, 4)
    other = period_doubling_ladder(doubled, 3, 1, 4, ScanConfig(2 * 0.8925, 2 * 0.9580))
    assert other == pytest.approx([2 * v for v in base], abs=1e-12)
    assert feigenbaum_delta(other) == pytest.approx(feigenbaum_delta(base), rel=1e-6)
    assert alpha_ratios(doubled, 3, 1, other) == pytest.approx(alpha_ratios("logistic", 3, 1, base), rel=1e-8)


# --- block rates -----------------------------------------------------------------

def test_block_rate_from_tabulated_parameters():
    lams = [0.9199257014200635, 0.9197440854758494, 0.9196791956839688]
    expected = (lams[0] - lams[1]) / (lams[1] - lams[2])
    assert block_rate(lams) == [pytest.approx(expected, rel=1e-15)]
    assert expected == pytest.approx(2.799, abs=1e-3)


def test_block_rate_rejects_unordered_input():
    with pytest.raises(DomainError):
        block_rate([0.91, 0.92, 0.90])
    with pytest.raises(DomainError):
        block_rate([0.92, 0.91])


# --- pattern rows ----------------------------------------------------------------

@pytest.mark.parametrize("N", sorted(PATTERN_TABLE))
def test_pattern_rows_match_table(N):
    row = pattern_row(N)
    assert (row.increments, row.spans, row.indices) == PATTERN_TABLE[N]


@pytest.mark.parametrize("N", range(1, 65))
def test_pattern_row_invariants(N):
    row = pattern_row(N)
    assert sorted(row.indices) == list(range(1, N + 1))
    assert len(row.increments) == len(row.spans) == N
    if N > 1:
        previous = pattern_row(N - 1).indices
        assert [i for i in row.indices if i != N] == previous
    # one pass through the row advances the period by two
    assert sum(row.increments) == 2
    walk = pattern_walk(N, 3 + 2 * 6)
    assert all(q >= 3 for q, _ in walk)


def test_pattern_row_bounds():
    with pytest.raises(DomainError):
        pattern_row(0)
    with pytest.raises(DomainError):
        pattern_row(65)


@pytest.fixture(scope="module")
def odd_records():
    return scan_odd_records("logistic", 13)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_pattern_agrees_with_scan(odd_records, N):
    report = verify_pattern_against_scan("logistic", N, odd_records, 13)
    assert report.agree, report.as_json()


def test_pattern_row_nine_near_period_three(odd_records):
    # 11_9 sits just below 3_1, ahead of the walk's first cycle
    report = verify_pattern_against_scan("logistic", 9, odd_records, 13)
    assert not report.agree and report.first_mismatch == 1
    assert report.observed[1] == (11, 9)
    rest = [x for x in report.observed if x != (11, 9)]
    assert rest == report.expected[:len(rest)]


def test_pattern_coverage_error(odd_records):
    sparse = [r for r in odd_records if r.period != 9]
    with pytest.raises(CoverageError):
        verify_pattern_against_scan("logistic", 2, sparse, 13)


# --- renormalisation -------------------------------------------------------------

def test_doubling_operator_quadratic():
    F = doubling_operator(lambda x: 1 - 1.5 * x * x)
    assert F.scale == 0.5
    assert F(0.0) == 1.0
    assert F(1.0) == pytest.approx(-2 * (1 - 1.5 * 0.625**2), abs=1e-15)


@pytest.mark.parametrize("mu", np.linspace(1.33, 1.54, 20))
def test_doubling_operator_normalisation_sweep(mu):
    F = doubling_operator(lambda x: 1 - mu * x * x)
    assert abs(F(0.0) - 1.0) <= 1e-12


@given(st.floats(1.0, 2.0), st.floats(0.0, 0.3))
def test_doubling_operator_property(mu, nu):
    psi = lambda x: 1 - mu * x * x + nu * x**4  # noqa: E731
    try:
        F = doubling_operator(psi)
    except NotRenormalizableError as exc:
        assert "psi" in str(exc) or "a < b" in str(exc) or "b < 1" in str(exc)
        return
    assert abs(F(0.0) - 1.0) <= 1e-12


def test_doubling_operator_reports_failed_inequality():
    with pytest.raises(NotRenormalizableError, match="a < b"):
        doubling_operator(lambda x: 1 - 1.9 * x * x)
    with pytest.raises(NotRenormalizableError, match="psi\\(0\\)"):
        doubling_operator(lambda x: 0.9 - x * x)


def _normalised(lam, alpha, n):
    # rescaled 2^n iterate at lam, renormalised so that psi(0) = 1
    s = alpha**n

    def A(x):
        return s * (iterate("logistic", lam, 0.5 + np.asarray(x) / s, 2**n) - 0.5)

    mu = float(A(0.0))
    return lambda x: A(mu * np.asarray(x)) / mu


def test_fixed_point_residual_decreases_with_depth():
    ladder = period_doubling_ladder("logistic", 1, 1, 6)
    delta = feigenbaum_delta(ladder)[-1]
    # sum the geometric tail for the accumulation point
    lam = ladder[-1] + (ladder[-1] - ladder[-2]) / (delta - 1)
    alpha = alpha_ratios("logistic", 1, 1, ladder)[-1]
    xs = np.linspace(-0.4, 0.4, 201)
    res = []
    for n in range(1, 5):
        psi = _normalised(lam, alpha, n)
        F = doubling_operator(psi)
        res.append(float(np.max(np.abs(F(xs) - psi(xs)))))
    assert all(b < a for a, b in zip(res, res[1:])), res


# --- universal-function approximants ---------------------------------------------

GRID = np.linspace(-0.35, 0.35, 201)


def test_depth_zero_is_centred_iterate():
    ladder = period_doubling_ladder("logistic", 3, 1, 2)
    sample = universal_function_approx("logistic", 3, 1, 0, GRID, ladder)
    direct = iterate("logistic", ladder[1], 0.5 + GRID, 3) - 0.5
    assert np.array_equal(np.asarray(sample.values), direct)
    assert sample.grid == GRID.tolist()


@pytest.mark.parametrize("q,j", [(1, 1), (3, 1), (7, 1), (7, 2)])
def test_approximants_converge(q, j):
    ladder = period_doubling_ladder("logistic", q, j, 4)
    vals = [np.asarray(universal_function_approx("logistic", q, j, n, GRID, ladder).values) for n in range(4)]
    gap12 = np.max(np.abs(vals[2] - vals[1]))
    gap23 = np.max(np.abs(vals[3] - vals[2]))
    assert gap12 > gap23


def test_pure_cascade_value_at_zero_settles():
    ladder = period_doubling_ladder("logistic", 1, 1, 5)
    at0 = [universal_function_approx("logistic", 1, 1, n, [0.0], ladder).values[0] for n in range(5)]
    ratios = [a / b for a, b in zip(at0, at0[1:])]
    assert abs(ratios[-1] - 1) < abs(ratios[0] - 1)
    assert abs(ratios[-1] - 1) < 0.01


def test_rescaled_argument_must_stay_in_domain():
    ladder = period_doubling_ladder("logistic", 3, 1, 2)
    with pytest.raises(DomainError, match="x = 0.6"):
        universal_function_approx("logistic", 3, 1, 0, [0.0, 0.6], ladder)


def test_superstable_parameters_recovered_by_family_object():
    recs = find_superstable("logistic", 3, ScanConfig(0.9, 0.96))
    assert recs[0].parameter == pytest.approx(0.9579685138208287, abs=1e-12)
