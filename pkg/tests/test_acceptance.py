"""Acceptance criteria, one function per criterion.

Each ``criterion_N`` returns ``(ok, detail)``.  Under pytest every criterion
is one test and also adds a ``criterion N: PASS|FAIL`` line to the terminal
summary; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

import itertools
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import gram_times_wg_is_identity, loops  # noqa: E402
from wordint.cli import REFERENCE_TABLE  # noqa: E402
from wordint.exactalg import Polynomial, RationalFunction, laurent_at_infinity, n_power  # noqa: E402
from wordint.freegroup import ds_predicted_moment, limit_counting, parse, parse_tuple  # noqa: E402
from wordint.integrals import (chi_max, constant_coefficient, duality_check, exact_trace_o_function,  # noqa: E402
                               exact_trace_sp_direct, exact_trace_sp_duality, first_laurent_truncated,
                               power_tuple, shifted_coefficients)
from wordint.matchings import coset_type, enumerate_matchings, rho  # noqa: E402
from wordint.montecarlo import SampleSpec, describe, estimate  # noqa: E402
from wordint.surfaces import iter_kappa_one, xi_check  # noqa: E402
from wordint.weingarten import wg_o  # noqa: E402

SUITE = [tuple(texts) for texts, _, _ in REFERENCE_TABLE] + [("aa",), ("aabbb",), ("abAB",)]
MC_SEED = 20240101
MC_SAMPLES = 100_000


def criterion_1():
    start = time.perf_counter()
    bad = [texts for texts, expected, _ in REFERENCE_TABLE if exact_trace_o_function(parse_tuple(texts)) != expected]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    detail = f"{len(REFERENCE_TABLE) - len(bad)}/{len(REFERENCE_TABLE)} rows exact, {elapsed:.1f}s"
    return ok, detail + (f", wrong: {bad}" if bad else "")


def criterion_2():
    got = [chi_max(parse_tuple(texts)) for texts, _, _ in REFERENCE_TABLE]
    want = [chi for _, _, chi in REFERENCE_TABLE]
    return got == want, f"chi_max column {got}"


def criterion_3():
    bad = []
    for s in range(1, 5):
        words = parse_tuple(["".join(c * 2 for c in "abcd"[:s])])
        if exact_trace_o_function(words) != n_power(1 - s):
            bad.append(("O", s))
        sp = RationalFunction((-1) ** s, Polynomial([0, 2]) ** (s - 1))
        if exact_trace_sp_direct(words) != sp or exact_trace_sp_duality(words) != sp:
            bad.append(("Sp", s))
    return not bad, "s = 1..4 for both groups" + (f", wrong: {bad}" if bad else "")


def criterion_4():
    bad = [texts for texts in SUITE if not duality_check(parse_tuple(texts))]
    return not bad, f"{len(SUITE) - len(bad)}/{len(SUITE)} tuples" + (f", failing: {bad}" if bad else "")


def criterion_5():
    counts = {}
    ok = True
    for texts in (["aabb"], ["aaaabbbb"], ["aab", "aab"]):
        words = parse_tuple(texts)
        results = [xi_check(words, s) for s in iter_kappa_one(words)]
        counts[",".join(texts)] = len(results)
        ok &= all(results)
    return ok, f"systems checked {counts}"


def criterion_6():
    bad = []
    for texts in SUITE:
        try:
            shifted_coefficients(parse_tuple(texts), 8)
        except ArithmeticError:
            bad.append(texts)
    s2 = shifted_coefficients(parse_tuple(["aabb"]), 6)
    s3 = shifted_coefficients(parse_tuple(["aabbcc"]), 6)
    x2 = s2.top_exponent == -1 and list(s2.coefficients) == [(-1) ** t for t in range(6)]
    x3 = s3.top_exponent == -2 and list(s3.coefficients) == [(-1) ** t * (t + 1) for t in range(6)]
    ok = not bad and x2 and x3
    return ok, f"integer to depth 8 on {len(SUITE) - len(bad)}/{len(SUITE)}, x2y2 {x2}, x2y2z2 {x3}"


def criterion_7():
    bad = []
    for texts in SUITE:
        words = parse_tuple(texts)
        cm = chi_max(words)
        cutoff = cm - 2 if cm > -math.inf else -2
        truncated = first_laurent_truncated(words, cutoff)
        exact = laurent_at_infinity(exact_trace_o_function(words), 0, low_exponent=cutoff)
        if any(truncated.coefficient(e) != exact.coefficient(e) for e in range(0, cutoff - 1, -1)):
            bad.append(texts)
    return not bad, f"{len(SUITE) - len(bad)}/{len(SUITE)} tuples" + (f", failing: {bad}" if bad else "")


def _class_function_consistent(k, n=9):
    # Invert the numeric Gram matrix at an integer point and compare every entry
    # with the table value for its coset type.
    table = wg_o(k)
    ms = enumerate_matchings(k)
    G = np.array([[float(n) ** loops(a.partner, b.partner) for b in ms] for a in ms])
    W = np.linalg.inv(G)
    for (i, a), (j, b) in itertools.product(enumerate(ms), repeat=2):
        want = float(table.by_type(coset_type(a, b))(n))
        if abs(W[i, j] - want) > 1e-9 * max(1.0, abs(want)):
            return False
    return True


def criterion_8():
    gram = {k: gram_times_wg_is_identity(k, wg_o(k)) for k in range(1, 5)}
    dedup = {k: _class_function_consistent(k) for k in range(1, 5)}
    decay = {}
    for k in range(1, 5):
        table = wg_o(k)
        ms = enumerate_matchings(k)
        decay[k] = all(table.value(a, b).order_at_infinity() >= k + rho(a, b)
                       for a, b in itertools.product(ms, repeat=2))
    ok = all(gram.values()) and all(dedup.values()) and all(decay.values())
    return ok, f"Gram {gram}, class function {dedup}, decay {decay}"


def criterion_9():
    bad = [texts for texts in SUITE
           if constant_coefficient(exact_trace_o_function(parse_tuple(texts))) != limit_counting(parse_tuple(texts))]
    w = parse("ab")
    singles = [int(constant_coefficient(exact_trace_o_function(power_tuple(w, [d])))) for d in range(1, 5)]
    # The pair at d = 4 has 105^4 matching systems; its limit comes from the counting formula.
    pairs = [int(constant_coefficient(exact_trace_o_function(power_tuple(w, [d, d])))) for d in range(1, 4)]
    pairs.append(limit_counting(power_tuple(w, [4, 4])))
    ok = not bad and singles == [0, 1, 0, 1] and pairs == [1, 3, 3, 5]
    return ok, f"suite {len(SUITE) - len(bad)}/{len(SUITE)}, lim Tr {singles}, lim Tr_ww {pairs}"


def power_tuples(total):
    out = []

    def rec(remaining, largest, prefix):
        if prefix:
            out.append(tuple(prefix))
        for j in range(min(remaining, largest), 0, -1):
            rec(remaining - j, j, prefix + [j])

    rec(total, total, [])
    return out


def criterion_10():
    w = parse("ab")
    differing = []
    for js in power_tuples(6):
        limit = constant_coefficient(exact_trace_o_function(power_tuple(w, js)))
        predicted = ds_predicted_moment(1, js)
        if limit != predicted:
            differing.append(f"{js}: limit {limit} vs predicted {predicted}")
    return not differing, f"{len(power_tuples(6))} tuples" + (f", differing {differing}" if differing else "")


def criterion_11():
    start = time.perf_counter()
    worst = None
    failures = []
    count = 0
    for group, ns in (("O", (5, 8)), ("Sp", (3, 5))):
        for n in ns:
            for texts in SUITE:
                words = parse_tuple(texts)
                report = estimate(words, SampleSpec(group, n, MC_SAMPLES, MC_SEED))
                count += 1
                if worst is None or abs(report.z) > abs(worst[0]):
                    worst = (report.z, group, n, texts)
                if not report.passes():
                    failures.append(describe(words, report))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    z, group, n, texts = worst
    detail = f"{count} estimates, max |z| = {abs(z):.2f} at {group}({n}) {list(texts)}, {elapsed:.0f}s"
    return ok, detail + (f", failing: {failures}" if failures else "")


def criterion_12():
    original = exact_trace_o_function(parse_tuple(["aabb"]))
    image = exact_trace_o_function(parse_tuple(["ababbb"]))
    return original == image, f"x^2y^2 -> {original}, (xy)^2y^2 -> {image}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 13)}


def run_criterion(i):
    try:
        ok, detail = CRITERIA[i]()
    except Exception as exc:  # reported as a failure line rather than aborting the run
        ok, detail = False, f"error {type(exc).__name__}: {exc}"
    return ok, f"criterion {i}: {'PASS' if ok else 'FAIL'} {detail}"


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    from conftest import ACCEPTANCE_LINES

    ok, line = run_criterion(i)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(i) for i in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
