"""Exact trace integrals over O(n) and Sp(n) and their expansions at infinity.

The orthogonal integral is a finite sum over matching systems with every
``kappa_x = 1``:

    Tr^O(n) = sum_m n^{#o(m)} prod_x Wg^O_{L_x}(m_{x,0}, m_{x,1}; n)

and the symplectic one replaces ``n^{#o}`` by ``(2n)^{#o} Δ(m)`` and uses the
symplectic Weingarten function.  Systems are streamed and grouped by
``(#o, coset types)`` before any rational-function arithmetic.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactalg import (ONE, ZERO, LaurentSeries, Polynomial, RationalFunction, binomial_series,
                       laurent_at_infinity)
from .freegroup import (IdentityWordError, Word, half_exponents, letter_name, limit_counting,
                        parity_holds, unsigned_exponents)
from .matchings import Matching, enumerate_matchings, loop_lengths, sigma_sign
from .surfaces import (MatchingSystem, TupleGeometry, build, iter_kappa_zero)
from .weingarten import DEFAULT_K_CAP, EXTENDED_K_CAP, chain_series, wg_o

DEFAULT_DEPTH = 8


class IntegralCapError(ValueError):
    def __init__(self, generator: int, L: int, cap: int):
        super().__init__(f"generator {letter_name(generator)} has L={L}, above the cap {cap}")
        self.generator = generator
        self.L = L
        self.cap = cap


class MethodDisagreementError(RuntimeError):
    pass


def _check_words(words: Sequence[Word]) -> tuple[Word, ...]:
    words = tuple(words)
    if not words:
        raise ValueError("a word tuple needs at least one word")
    for w in words:
        if not w:
            raise IdentityWordError("integral inputs must be nontrivial words")
    return words


def _half_exponents_capped(words: Sequence[Word], cap: int) -> dict[int, int]:
    L = half_exponents(words)
    for g, l in L.items():
        if l > cap:
            raise IntegralCapError(g, l, cap)
    return L


def validity_threshold(words: Sequence[Word]) -> int:
    """``N = max_x L_x``; the exact formulas hold for ``n >= N`` (O) and ``2n >= N`` (Sp)."""
    counts = unsigned_exponents(words)
    return max(((c + 1) // 2 for c in counts.values()), default=0)


# ---------------------------------------------------------------------------
# Enumeration


@dataclass(frozen=True)
class _PairChoice:
    block: tuple[int, ...]
    ctype: tuple[int, ...]
    sign: int  # sign(sigma_m0) sign(sigma_m1)
    index: tuple[int, int]


def _pair_choices(geo: TupleGeometry, g: int, same_only: bool = False) -> list[_PairChoice]:
    ms = enumerate_matchings(geo.L[g], cap=EXTENDED_K_CAP)
    out = []
    for i, a in enumerate(ms):
        for j, b in enumerate(ms):
            if same_only and i != j:
                continue
            out.append(_PairChoice(tuple(geo.arc_block(g, a, b)), loop_lengths(a.partner, b.partner),
                                   sigma_sign(a) * sigma_sign(b), (i, j)))
    return out


def group_systems(words: Sequence[Word], with_delta: bool = False,
                  cap: int = DEFAULT_K_CAP) -> Counter:
    """Count kappa = 1 systems by ``(#o, coset types per generator[, sign])``.

    With ``with_delta`` the key carries ``Δ(m) prod_x sign(σ_m0) sign(σ_m1)``.
    """
    _half_exponents_capped(words, cap)
    geo = TupleGeometry(words)
    per_gen = [_pair_choices(geo, g) for g in geo.gens]
    counts: Counter = Counter()
    for combo in itertools.product(*per_gen):
        arc: list[int] = []
        for c in combo:
            arc.extend(c.block)
        o = geo.count_cycles(arc)
        types = tuple(c.ctype for c in combo)
        if with_delta:
            sign = geo.delta(arc)
            for c in combo:
                sign *= c.sign
            counts[(o, types, sign)] += 1
        else:
            counts[(o, types)] += 1
    return counts


def _wg_product(geo_L: Sequence[int], types: Sequence[tuple[int, ...]], cap: int) -> RationalFunction:
    out = ONE
    for L, t in zip(geo_L, types):
        out = out * wg_o(L, allow_extended=cap > DEFAULT_K_CAP).by_type(t)
    return out


def exact_trace_o_function(words: Sequence[Word], cap: int = DEFAULT_K_CAP) -> RationalFunction:
    words = _check_words(words)
    if not parity_holds(words):
        return ZERO
    L = _half_exponents_capped(words, cap)
    counts = group_systems(words, cap=cap)
    by_types: dict[tuple, dict[int, int]] = {}
    for (o, types), c in counts.items():
        poly = by_types.setdefault(types, {})
        poly[o] = poly.get(o, 0) + c
    Ls = [L[g] for g in sorted(L)]
    total = ZERO
    for types in sorted(by_types):
        poly = by_types[types]
        coeffs = [0] * (max(poly) + 1)
        for o, c in poly.items():
            coeffs[o] = c
        total = total + RationalFunction(Polynomial(coeffs)) * _wg_product(Ls, types, cap)
    return total


def exact_trace_sp_direct(words: Sequence[Word], cap: int = DEFAULT_K_CAP) -> RationalFunction:
    """``sum_m (2n)^{#o} Δ(m) prod_x Wg^Sp(m_x0, m_x1; n)``."""
    words = _check_words(words)
    if not parity_holds(words):
        return ZERO
    L = _half_exponents_capped(words, cap)
    counts = group_systems(words, with_delta=True, cap=cap)
    gens = sorted(L)
    by_types: dict[tuple, dict[int, int]] = {}
    for (o, types, sign), c in counts.items():
        poly = by_types.setdefault(types, {})
        poly[o] = poly.get(o, 0) + sign * c
    total = ZERO
    for types in sorted(by_types):
        poly = by_types[types]
        coeffs = [0] * (max(poly) + 1)
        for o, c in poly.items():
            coeffs[o] = c * 2 ** o
        wg = ONE
        for g, t in zip(gens, types):
            base = wg_o(L[g], allow_extended=cap > DEFAULT_K_CAP).by_type(t)
            wg = wg * base.compose_linear(-2, 0) * (-1) ** L[g]
        total = total + RationalFunction(Polynomial(coeffs)) * wg
    return total


def exact_trace_sp_duality(words: Sequence[Word], cap: int = DEFAULT_K_CAP) -> RationalFunction:
    """``(-1)^l Tr^O(-2n)``."""
    words = _check_words(words)
    f = exact_trace_o_function(words, cap)
    return f.compose_linear(-2, 0) * (-1) ** len(words)


# ---------------------------------------------------------------------------
# Euler characteristic bounds


def chi_max(words: Sequence[Word], cap: int = DEFAULT_K_CAP) -> int | float:
    """Largest Euler characteristic over kappa = 0 systems, or ``-inf`` when the parity condition fails."""
    words = _check_words(words)
    if not parity_holds(words):
        return -math.inf
    L = _half_exponents_capped(words, cap)
    geo = TupleGeometry(words)
    per_gen = [_pair_choices(geo, g, same_only=True) for g in geo.gens]
    best = None
    total_L = sum(L.values())
    for combo in itertools.product(*per_gen):
        arc: list[int] = []
        for c in combo:
            arc.extend(c.block)
        chi = -total_L + geo.count_cycles(arc)
        if best is None or chi > best:
            best = chi
    return best


@dataclass(frozen=True)
class SqlClBounds:
    min_combined: int | float
    sql_bound: int | float
    cl_bound: int | float


def sql_cl_bounds(w: Word) -> SqlClBounds:
    """Bounds on the square length and commutator length of a single word.

    ``min_combined = 1 - chi_max``.  For the split we use the connected
    kappa = 0 surfaces: a non-orientable one of Euler characteristic ``chi``
    writes ``w`` as a product of ``1 - chi`` squares, and an orientable one
    as a product of ``(1 - chi) / 2`` commutators.  Connect-summing a
    projective plane onto an orientable surface gives a non-orientable one
    with Euler characteristic one lower, so that case is included in the
    square bound.
    """
    words = _check_words([w])
    inf = math.inf
    if not parity_holds(words):
        return SqlClBounds(inf, inf, inf)
    best_o = -inf
    best_n = -inf
    for system in iter_kappa_zero(words):
        d = build(words, system, with_delta=False)
        if len(d.components) != 1:
            continue
        chi = d.euler_characteristic
        if d.components[0].orientable:
            best_o = max(best_o, chi)
        else:
            best_n = max(best_n, chi)
    best_sq = max(best_n, best_o - 1)
    cm = chi_max(words)
    return SqlClBounds(1 - cm,
                       1 - best_sq if best_sq > -inf else inf,
                       int(1 - best_o) // 2 if best_o > -inf else inf)


# ---------------------------------------------------------------------------
# Diagrammatic expansions


class BudgetError(ValueError):
    pass


def first_laurent_truncated(words: Sequence[Word], chi_cutoff: int,
                            cap: int = DEFAULT_K_CAP) -> LaurentSeries:
    """Coefficients of ``n^chi`` for ``0 >= chi >= chi_cutoff`` from the
    signed sum over matching systems without consecutive repeats.

    The outer matchings of each generator fix the type-o count; the interior
    of each chain is summed by :func:`chain_series`, which needs no Weingarten
    values.
    """
    words = _check_words(words)
    length = -chi_cutoff + 1
    if not parity_holds(words):
        return LaurentSeries(Fraction(0), 0, (Fraction(0),) * length)
    cm = chi_max(words, cap)
    if chi_cutoff < cm - 6:
        raise BudgetError(f"cutoff {chi_cutoff} is more than 6 below chi_max = {cm}")
    L = _half_exponents_capped(words, cap)
    geo = TupleGeometry(words)
    total_L = sum(L.values())
    depth = max(total_L - chi_cutoff, 0)
    series = {}
    for g in geo.gens:
        size = len(enumerate_matchings(L[g], cap=EXTENDED_K_CAP))
        series[g] = [chain_series(L[g], i, depth) for i in range(size)]
    per_gen = [_pair_choices(geo, g) for g in geo.gens]
    coeffs = [0] * length  # index j <-> exponent -j
    for combo in itertools.product(*per_gen):
        arc: list[int] = []
        for c in combo:
            arc.extend(c.block)
        top = -total_L + geo.count_cycles(arc)
        budget = top - chi_cutoff
        if budget < 0:
            continue
        poly = [1]
        for g, c in zip(geo.gens, combo):
            i, j = c.index
            s = series[g][i]
            factor = [s[d][j] for d in range(budget + 1)]
            new = [0] * (budget + 1)
            for a, x in enumerate(poly):
                if x:
                    for b in range(budget + 1 - a):
                        if factor[b]:
                            new[a + b] += x * factor[b]
            poly = new
        for d, x in enumerate(poly):
            if x:
                e = top - d
                if e > 0:
                    raise RuntimeError("positive Euler characteristic in the expansion")
                coeffs[-e] += x
    return LaurentSeries(Fraction(0), 0, tuple(Fraction(c) for c in coeffs))


def shifted_coefficients(words: Sequence[Word], depth: int = DEFAULT_DEPTH,
                         cap: int = DEFAULT_K_CAP) -> LaurentSeries:
    """Expansion of ``Tr^O`` in powers of ``(n - 1)^-1``; its coefficients must be integers."""
    f = exact_trace_o_function(words, cap)
    series = laurent_at_infinity(f, 1, depth)
    bad = [c for c in series.coefficients if c.denominator != 1]
    if bad:
        raise ArithmeticError(f"non-integer coefficient {bad[0]} in the shifted expansion")
    return series


def _duplicate(system: MatchingSystem, dups: dict[tuple[int, int], int]) -> MatchingSystem:
    out = {}
    for g, ms in system.matchings.items():
        seq: list[Matching] = []
        for k, m in enumerate(ms):
            seq.extend([m] * (dups.get((g, k), 0) + 1))
        out[g] = tuple(seq)
    return MatchingSystem(out)


def shift_identity_terms(words: Sequence[Word], system: MatchingSystem, depth: int) -> dict[int, int]:
    """``sum (-1)^{|kappa'|} n^{chi'}`` over signed systems forgetting to ``system``,
    restricted to ``chi' >= chi(system) - depth``; returns exponent -> coefficient.
    """
    from .surfaces import SignedMatchingSystem, signed_build

    words = _check_words(words)
    if system.has_consecutive_duplicates():
        raise ValueError("the base system must not repeat a matching at consecutive levels")
    chi0 = build(words, system, with_delta=False).euler_characteristic
    slots = [(g, k) for g, ms in system.matchings.items() for k in range(len(ms))]
    out: dict[int, int] = {}
    for total in range(depth + 1):
        for combo in itertools.combinations_with_replacement(range(len(slots)), total):
            dups = Counter(slots[i] for i in combo)
            mprime = _duplicate(system, dups)
            diagram = build(words, mprime, with_delta=False)
            groups = []
            for g, ms in mprime.matchings.items():
                for k in range(len(ms) - 1):
                    if ms[k] == ms[k + 1]:
                        groups.append({i for i, f in enumerate(diagram.faces)
                                       if f.generator == g and f.level == k})
            budget = diagram.euler_characteristic - (chi0 - depth)
            for r in range(len(groups), budget + 1):
                for negative in itertools.combinations(range(diagram.face_count), r):
                    neg = set(negative)
                    if any(not (grp & neg) for grp in groups):
                        continue
                    signed = signed_build(words, SignedMatchingSystem(mprime, {i: -1 for i in neg}))
                    e = signed.euler_characteristic
                    out[e] = out.get(e, 0) + (-1) ** mprime.total_kappa
    return out


def shift_identity_check(words: Sequence[Word], system: MatchingSystem, depth: int) -> bool:
    """Check ``(-1)^{|kappa|} (n+1)^chi`` against the truncated signed sum."""
    chi0 = build(words, system, with_delta=False).euler_characteristic
    terms = shift_identity_terms(words, system, depth)
    expected = binomial_series(chi0, depth + 1)
    sign = (-1) ** system.total_kappa
    return all(terms.get(chi0 - j, 0) == sign * expected[j] for j in range(depth + 1)) \
        and all(chi0 - depth <= e <= chi0 for e in terms)


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class DualityReport:
    holds: bool
    difference: RationalFunction

    def __bool__(self) -> bool:
        return self.holds


def duality_check(words: Sequence[Word], cap: int = DEFAULT_K_CAP) -> DualityReport:
    """``Tr^Sp(n) - (-1)^l Tr^O(-2n)`` with the symplectic side computed directly."""
    diff = exact_trace_sp_direct(words, cap) - exact_trace_sp_duality(words, cap)
    return DualityReport(diff.is_zero(), diff)


@dataclass(frozen=True)
class IntegralResult:
    words: tuple[Word, ...]
    group: str
    exact: RationalFunction
    validity_threshold: int
    chi_max: int | float
    laurent_std: LaurentSeries
    laurent_shifted: LaurentSeries
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        from .freegroup import render

        return {
            "words": [render(w) for w in self.words],
            "group": self.group,
            "exact": self.exact.to_json(),
            "N": self.validity_threshold,
            "chi_max": self.chi_max if self.chi_max > -math.inf else "-inf",
            "laurent": {
                "center": str(self.laurent_shifted.center_shift),
                "top_exponent": self.laurent_shifted.top_exponent,
                "coeffs": [str(c) for c in self.laurent_shifted.coefficients],
            },
            "laurent_center0": self.laurent_std.to_json(),
            "checks": dict(self.checks),
        }


def exact_trace_o(words: Sequence[Word], depth: int = DEFAULT_DEPTH, cap: int = DEFAULT_K_CAP) -> IntegralResult:
    words = _check_words(words)
    f = exact_trace_o_function(words, cap)
    std = laurent_at_infinity(f, 0, depth)
    shifted = laurent_at_infinity(f, 1, depth)
    integer = all(c.denominator == 1 for c in shifted.coefficients)
    limit = limit_counting(words)
    checks = {"integer_coeffs": integer, "limit": constant_coefficient(f) == limit}
    return IntegralResult(words, "O", f, validity_threshold(words), chi_max(words, cap), std, shifted, checks)


def exact_trace_sp(words: Sequence[Word], method: str = "direct", depth: int = DEFAULT_DEPTH,
                   cap: int = DEFAULT_K_CAP) -> IntegralResult:
    words = _check_words(words)
    if method not in ("direct", "duality", "both"):
        raise ValueError(f"unknown method {method!r}")
    dual = exact_trace_sp_duality(words, cap)
    checks = {}
    if method in ("direct", "both"):
        f = exact_trace_sp_direct(words, cap)
        checks["duality"] = f == dual
        if f != dual:
            raise MethodDisagreementError(f"direct {f} and duality {dual} disagree")
    else:
        f = dual
    std = laurent_at_infinity(f, 0, depth)
    shifted = laurent_at_infinity(f, Fraction(-1, 2), depth)
    return IntegralResult(words, "Sp", f, validity_threshold(words), chi_max(words, cap), std, shifted, checks)


def evaluate_exact(words: Sequence[Word], group: str, n: int) -> Fraction:
    f = exact_trace_o_function(words) if group == "O" else exact_trace_sp_duality(words)
    return f(n)


def power_tuple(w: Word, powers: Iterable[int]) -> tuple[Word, ...]:
    return tuple(w ** j for j in powers)


def constant_coefficient(f: RationalFunction) -> Fraction:
    return laurent_at_infinity(f, 0, low_exponent=0).coefficient(0)
