import json
import math
from fractions import Fraction

import pytest
import sympy

from oracles import orthogonal_integral_at, symplectic_integral_at
from wordint.cli import REFERENCE_TABLE
from wordint.exactalg import Polynomial, RationalFunction, laurent_at_infinity, n_power
from wordint.freegroup import limit_counting, parse, parse_tuple
from wordint.integrals import (BudgetError, IntegralCapError, MethodDisagreementError, chi_max,
                               constant_coefficient, duality_check, evaluate_exact, exact_trace_o,
                               exact_trace_o_function, exact_trace_sp, exact_trace_sp_direct,
                               exact_trace_sp_duality, first_laurent_truncated, power_tuple,
                               shift_identity_check, shifted_coefficients, sql_cl_bounds, validity_threshold)
from wordint.surfaces import iter_kappa_one, iter_kappa_zero

SUITE = [list(texts) for texts, _, _ in REFERENCE_TABLE] + [["aa"], ["aabbb"], ["abAB"]]


@pytest.mark.parametrize("texts, expected, chi", REFERENCE_TABLE)
def test_table_values(texts, expected, chi):
    words = parse_tuple(texts)
    assert exact_trace_o_function(words) == expected
    assert chi_max(words) == chi


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_surface_words(s):
    words = parse_tuple(["".join(c * 2 for c in "abcd"[:s])])
    assert exact_trace_o_function(words) == n_power(1 - s)
    assert exact_trace_sp_duality(words) == RationalFunction((-1) ** s, Polynomial([0, 2]) ** (s - 1))
    assert exact_trace_sp_direct(words) == exact_trace_sp_duality(words)


@pytest.mark.parametrize("texts", SUITE)
def test_duality(texts):
    words = parse_tuple(texts)
    report = duality_check(words)
    assert report
    assert report.difference.is_zero()


@pytest.mark.parametrize("texts, n", [(["aabb"], 3), (["aa"], 2), (["abAB"], 3), (["aab", "aab"], 3),
                                      (["aBab"], 4), (["abbbAB"], 3)])
def test_orthogonal_index_sum_oracle(texts, n):
    words = parse_tuple(texts)
    assert exact_trace_o_function(words)(n) == orthogonal_integral_at(words, n)


@pytest.mark.parametrize("texts, n", [(["aabb"], 2), (["aa"], 1), (["aa"], 2), (["abAB"], 2),
                                      (["aab", "aab"], 2), (["aBab"], 2), (["abbbAB"], 2)])
def test_symplectic_index_sum_oracle(texts, n):
    words = parse_tuple(texts)
    assert exact_trace_sp_direct(words)(n) == symplectic_integral_at(words, n)


def test_parity_failure_is_zero():
    words = parse_tuple(["aabbb"])
    assert exact_trace_o_function(words).is_zero()
    assert exact_trace_sp_direct(words).is_zero()
    assert chi_max(words) == -math.inf
    assert first_laurent_truncated(words, -3).coefficients == (0, 0, 0, 0)


class TestChiMax:
    def test_order_bounded_by_chi_max(self):
        for texts in SUITE + [["aBab"], ["abab"], ["aabb", "ab", "AB"]]:
            words = parse_tuple(texts)
            f = exact_trace_o_function(words)
            assert f.order_at_infinity() >= -chi_max(words)

    def test_small_values(self):
        assert chi_max(parse_tuple(["aa"])) == 0
        assert chi_max(parse_tuple(["abAB"])) == -1
        assert chi_max(parse_tuple(["aa", "bb"])) == 0

    def test_sql_cl(self):
        comm = sql_cl_bounds(parse("abAB"))
        assert (comm.min_combined, comm.sql_bound, comm.cl_bound) == (2, 3, 1)
        square = sql_cl_bounds(parse("aa"))
        assert (square.min_combined, square.sql_bound, square.cl_bound) == (1, 1, math.inf)
        assert sql_cl_bounds(parse("aabb")).sql_bound == 2
        assert sql_cl_bounds(parse("aab")).min_combined == math.inf


def _sympy_coefficients(f, low):
    n, t = sympy.symbols("n t")
    num = sum(int(c) * n ** i for i, c in enumerate(f.numerator.coeffs))
    den = sum(int(c) * n ** i for i, c in enumerate(f.denominator.coeffs))
    expr = sympy.series((num / den).subs(n, 1 / t), t, 0, -low + 1).removeO()
    return {e: sympy.Rational(expr.coeff(t, -e)) for e in range(0, low - 1, -1)}


class TestTruncatedExpansion:
    @pytest.mark.parametrize("texts", SUITE)
    def test_matches_exact(self, texts):
        words = parse_tuple(texts)
        cm = chi_max(words)
        cutoff = cm - 2 if cm > -math.inf else -2
        truncated = first_laurent_truncated(words, cutoff)
        exact = laurent_at_infinity(exact_trace_o_function(words), 0, low_exponent=cutoff)
        for e in range(0, cutoff - 1, -1):
            assert truncated.coefficient(e) == exact.coefficient(e)

    def test_against_sympy(self):
        words = parse_tuple(["abaabaaabb"])
        ours = first_laurent_truncated(words, -5)
        theirs = _sympy_coefficients(exact_trace_o_function(words), -5)
        assert {e: ours.coefficient(e) for e in range(0, -6, -1)} == theirs
        assert [ours.coefficient(e) for e in (-2, -3, -4, -5)] == [3, -1, 7, -9]

    def test_budget(self):
        with pytest.raises(BudgetError):
            first_laurent_truncated(parse_tuple(["aabb"]), -8)


class TestShifted:
    def test_x2y2(self):
        s = shifted_coefficients(parse_tuple(["aabb"]), 6)
        assert s.top_exponent == -1
        assert list(s.coefficients) == [(-1) ** t for t in range(6)]

    def test_x2y2z2(self):
        s = shifted_coefficients(parse_tuple(["aabbcc"]), 6)
        assert s.top_exponent == -2
        assert list(s.coefficients) == [(-1) ** t * (t + 1) for t in range(6)]

    @pytest.mark.parametrize("texts", SUITE)
    def test_integer_coefficients(self, texts):
        result = exact_trace_o(parse_tuple(texts))
        assert result.checks["integer_coeffs"]
        assert all(c.denominator == 1 for c in result.laurent_shifted.coefficients)

    def test_non_integer_rejected(self, monkeypatch):
        import wordint.integrals as mod

        monkeypatch.setattr(mod, "exact_trace_o_function", lambda words, cap=4: RationalFunction(1, Polynomial([0, 2])))
        with pytest.raises(ArithmeticError):
            mod.shifted_coefficients(parse_tuple(["aa"]))


class TestShiftIdentity:
    @pytest.mark.parametrize("texts", [["aa"], ["aabb"], ["abAB"]])
    def test_kappa_zero_systems(self, texts):
        words = parse_tuple(texts)
        for system in iter_kappa_zero(words):
            assert shift_identity_check(words, system, 2)

    def test_kappa_one_systems(self):
        words = parse_tuple(["aabb"])
        for system in iter_kappa_one(words):
            if not system.has_consecutive_duplicates():
                assert shift_identity_check(words, system, 2)

    def test_rejects_repeated_levels(self):
        words = parse_tuple(["aa"])
        (system,) = list(iter_kappa_one(words))
        with pytest.raises(ValueError):
            shift_identity_check(words, system, 1)


class TestLimits:
    @pytest.mark.parametrize("texts", SUITE + [["aa", "aa"], ["abab", "abab"], ["ab", "BA"]])
    def test_constant_coefficient_is_counting_limit(self, texts):
        words = parse_tuple(texts)
        assert constant_coefficient(exact_trace_o_function(words)) == limit_counting(words)

    def test_square_pair(self):
        assert constant_coefficient(exact_trace_o_function(parse_tuple(["aa", "aa"]))) == 3

    @pytest.mark.parametrize("d, single, pair", [(1, 0, 1), (2, 1, 3), (3, 0, 3)])
    def test_powers_of_ab(self, d, single, pair):
        w = parse("ab")
        assert constant_coefficient(exact_trace_o_function(power_tuple(w, [d]))) == single
        assert constant_coefficient(exact_trace_o_function(power_tuple(w, [d, d]))) == pair


@pytest.mark.parametrize("texts, image", [(["aabb"], ["ababbb"]), (["aabb"], ["aababa"]),
                                          (["abAB"], ["aBAb"]), (["aab", "aab"], ["Aab", "Aab"])])
def test_automorphism_invariance(texts, image):
    a, b = parse_tuple(texts), parse_tuple(image)
    assert exact_trace_o_function(a) == exact_trace_o_function(b)
    assert exact_trace_sp_duality(a) == exact_trace_sp_duality(b)


class TestResults:
    def test_orthogonal_result(self):
        r = exact_trace_o(parse_tuple(["aabb"]))
        assert r.group == "O"
        assert r.validity_threshold == validity_threshold(parse_tuple(["aabb"])) == 1
        assert r.checks == {"integer_coeffs": True, "limit": True}
        doc = json.loads(json.dumps(r.to_json()))
        assert doc["exact"] == {"num": ["1"], "den": ["0", "1"]}
        assert doc["chi_max"] == -1
        assert doc["laurent"]["top_exponent"] == -1

    def test_symplectic_result(self):
        r = exact_trace_sp(parse_tuple(["aabb"]), method="both")
        assert r.checks["duality"]
        assert r.exact == RationalFunction(1, Polynomial([0, 2]))
        assert r.laurent_shifted.center_shift == Fraction(-1, 2)
        assert exact_trace_sp(parse_tuple(["aabb"]), method="duality").exact == r.exact

    def test_parity_failure_json(self):
        doc = exact_trace_o(parse_tuple(["aabbb"])).to_json()
        assert doc["chi_max"] == "-inf"
        json.dumps(doc)

    def test_bad_method(self):
        with pytest.raises(ValueError):
            exact_trace_sp(parse_tuple(["aa"]), method="guess")

    def test_disagreement_is_raised(self, monkeypatch):
        import wordint.integrals as mod

        monkeypatch.setattr(mod, "exact_trace_sp_direct", lambda words, cap=4: RationalFunction(7))
        with pytest.raises(MethodDisagreementError):
            mod.exact_trace_sp(parse_tuple(["aa"]))
        assert not mod.duality_check(parse_tuple(["aa"]))

    def test_evaluate(self):
        assert evaluate_exact(parse_tuple(["aabb"]), "O", 4) == Fraction(1, 4)
        assert evaluate_exact(parse_tuple(["aabb"]), "Sp", 4) == Fraction(1, 8)


def test_cap():
    with pytest.raises(IntegralCapError):
        exact_trace_o_function(parse_tuple(["aaaaaaaaaabb"]))
    with pytest.raises(IntegralCapError):
        chi_max(parse_tuple(["aaaaaaaaaabb"]))
