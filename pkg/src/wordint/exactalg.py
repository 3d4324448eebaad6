"""Exact univariate polynomials and rational functions in ``n`` over the rationals.

Everything here is immutable.  A :class:`RationalFunction` is always stored in
lowest terms with a monic denominator, so two equal functions have identical
representations and compare and hash by value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd, lcm
from typing import Iterable, Sequence, Union

Number = Union[int, Fraction]


def _trim(coeffs: Iterable[Number]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class Polynomial:
    """Polynomial in ``n`` with rational coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        self.coeffs = _trim(coeffs)

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "Polynomial":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "Polynomial":
        out = cls.constant(1)
        for r in roots:
            out = out * cls((-Fraction(r), 1))
        return out

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other: Union["Polynomial", Number]) -> "Polynomial":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Polynomial([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __sub__(self, other: Union["Polynomial", Number]) -> "Polynomial":
        return self + (-_as_poly(other))

    def __rsub__(self, other: Number) -> "Polynomial":
        return _as_poly(other) - self

    def __mul__(self, other: Union["Polynomial", Number]) -> "Polynomial":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Polynomial.constant(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Polynomial(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        inv_lead = 1 / other.lead
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] * inv_lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self * (1 / self.lead)

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_linear(self, a: Number, b: Number) -> "Polynomial":
        """``p(a n + b)``."""
        out = Polynomial()
        lin = Polynomial((b, a))
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def shift(self, c: Number) -> "Polynomial":
        """``p(n + c)``."""
        return self.compose_linear(1, c)

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``p / c`` a primitive integer polynomial."""
        if self.is_zero():
            return Fraction(1)
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(gcd, (abs(c.numerator * (den // c.denominator)) for c in self.coeffs), 0)
        return Fraction(num, den)

    def integer_coeffs(self) -> list[int]:
        """Coefficients scaled by the lcm of their denominators (not by the content)."""
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        return [int(c * den) for c in self.coeffs]


def _as_poly(x: Union[Polynomial, Number]) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial.constant(x)


N = Polynomial((0, 1))


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


@dataclass(frozen=True)
class RationalFunction:
    """``numerator / denominator`` in lowest terms with a monic denominator."""

    numerator: Polynomial
    denominator: Polynomial

    def __init__(self, numerator: Union[Polynomial, Number] = 0,
                 denominator: Union[Polynomial, Number] = 1):
        num, den = _as_poly(numerator), _as_poly(denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(), Polynomial.constant(1)
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        lead = den.lead
        if lead != 1:
            num, den = num * (1 / lead), den * (1 / lead)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_int_coeffs(cls, num: Sequence[Number], den: Sequence[Number] = (1,)) -> "RationalFunction":
        return cls(Polynomial(num), Polynomial(den))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(other)
        return (isinstance(other, RationalFunction) and self.numerator == other.numerator
                and self.denominator == other.denominator)

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def __repr__(self) -> str:
        return f"RationalFunction({format_factored(self)!r})"

    def __str__(self) -> str:
        return format_factored(self)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(self.numerator * other.denominator + other.numerator * self.denominator,
                                self.denominator * other.denominator)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        return self + (-_as_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) / self

    def __pow__(self, e: int) -> "RationalFunction":
        if e >= 0:
            return RationalFunction(self.numerator ** e, self.denominator ** e)
        return RationalFunction(self.denominator ** (-e), self.numerator ** (-e))

    def __call__(self, x: Number) -> Fraction:
        return evaluate(self, x)

    def compose_linear(self, a: Number, b: Number) -> "RationalFunction":
        """``f(a n + b)``."""
        return RationalFunction(self.numerator.compose_linear(a, b), self.denominator.compose_linear(a, b))

    def order_at_infinity(self) -> float:
        """``deg(den) - deg(num)``; ``inf`` for the zero function."""
        if self.is_zero():
            return float("inf")
        return self.denominator.degree - self.numerator.degree

    def to_json(self) -> dict:
        """``{"num": [...], "den": [...]}``: ascending integer coefficient strings.

        Both polynomials are scaled by a common factor so that all coefficients
        are integers with no common divisor and the denominator's leading
        coefficient is positive.
        """
        num, den = self.numerator, self.denominator
        scale = reduce(lcm, (c.denominator for c in num.coeffs + den.coeffs), 1)
        ni = [int(c * scale) for c in num.coeffs]
        di = [int(c * scale) for c in den.coeffs]
        g = reduce(gcd, (abs(c) for c in ni + di), 0) or 1
        return {"num": [str(c // g) for c in ni], "den": [str(c // g) for c in di]}

    @classmethod
    def from_json(cls, doc: dict) -> "RationalFunction":
        num = [Fraction(c) for c in doc["num"]]
        den = [Fraction(c) for c in doc["den"]]
        return cls(Polynomial(num), Polynomial(den))


def _as_rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction(x)


ONE = RationalFunction(1)
ZERO = RationalFunction(0)
N_RF = RationalFunction(N)


class PoleError(ZeroDivisionError):
    def __init__(self, point):
        super().__init__(f"rational function has a pole at n = {point}")
        self.point = point


def evaluate(f: RationalFunction, point: Number) -> Fraction:
    den = f.denominator(point)
    if den == 0:
        raise PoleError(point)
    return f.numerator(point) / den


def n_power(e: int) -> RationalFunction:
    return RationalFunction(Polynomial.monomial(e)) if e >= 0 else RationalFunction(1, Polynomial.monomial(-e))


# ---------------------------------------------------------------------------
# Linear algebra over Q(n)


class SingularMatrixError(ArithmeticError):
    pass


def solve_linear(A: Sequence[Sequence[Polynomial]], b: Sequence[Polynomial]) -> list[RationalFunction]:
    """Solve ``A x = b`` over the field of rational functions.

    Uses single-step fraction-free (Bareiss) elimination on the augmented
    matrix, so every intermediate entry stays a polynomial and every division
    is exact.  Pivots are the nonzero candidates of least degree.
    """
    size = len(A)
    if any(len(row) != size for row in A) or len(b) != size:
        raise ValueError("solve_linear needs a square matrix and a matching vector")
    M = [[_as_poly(x) for x in row] + [_as_poly(b[i])] for i, row in enumerate(A)]
    prev = Polynomial.constant(1)
    for col in range(size):
        candidates = [r for r in range(col, size) if not M[r][col].is_zero()]
        if not candidates:
            raise SingularMatrixError("matrix is singular over Q(n)")
        pivot_row = min(candidates, key=lambda r: M[r][col].degree)
        M[col], M[pivot_row] = M[pivot_row], M[col]
        pivot = M[col][col]
        for r in range(col + 1, size):
            factor = M[r][col]
            row = M[r]
            prow = M[col]
            for c in range(col + 1, size + 1):
                row[c] = (pivot * row[c] - factor * prow[c]).exact_div(prev)
            row[col] = Polynomial()
        prev = pivot
    x: list[RationalFunction] = [ZERO] * size
    for i in range(size - 1, -1, -1):
        acc = RationalFunction(M[i][size])
        for j in range(i + 1, size):
            if not M[i][j].is_zero():
                acc = acc - RationalFunction(M[i][j]) * x[j]
        x[i] = acc / RationalFunction(M[i][i])
    return x


def matvec(A: Sequence[Sequence[Polynomial]], x: Sequence[RationalFunction]) -> list[RationalFunction]:
    out = []
    for row in A:
        acc = ZERO
        for a, xi in zip(row, x):
            if not a.is_zero() and not xi.is_zero():
                acc = acc + RationalFunction(a) * xi
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# Laurent expansions at infinity


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated expansion ``sum_e c_e (n - center_shift)^e`` for ``e`` from
    ``top_exponent`` down to ``truncation_exponent + 1``.

    ``coefficients[i]`` belongs to exponent ``top_exponent - i``.
    """

    center_shift: Fraction
    top_exponent: int
    coefficients: tuple[Fraction, ...]

    @property
    def truncation_exponent(self) -> int:
        """Largest exponent that is *not* stored."""
        return self.top_exponent - len(self.coefficients)

    def coefficient(self, exponent: int) -> Fraction:
        if exponent > self.top_exponent:
            return Fraction(0)
        if exponent <= self.truncation_exponent:
            raise IndexError(f"exponent {exponent} lies below the truncation window")
        return self.coefficients[self.top_exponent - exponent]

    def window(self, low: int, high: int | None = None) -> dict[int, Fraction]:
        """Coefficients for exponents ``high`` down to ``low`` inclusive."""
        high = self.top_exponent if high is None else high
        return {e: self.coefficient(e) for e in range(high, low - 1, -1)}

    def partial_sum(self, n: Number) -> Fraction:
        x = Fraction(n) - self.center_shift
        return sum((c * x ** (self.top_exponent - i) for i, c in enumerate(self.coefficients)), Fraction(0))

    def to_json(self) -> dict:
        return {
            "center": str(self.center_shift),
            "top_exponent": self.top_exponent,
            "coeffs": [str(c) for c in self.coefficients],
        }


def laurent_at_infinity(f: RationalFunction, center_shift: Number = 0, depth: int = 8,
                        low_exponent: int | None = None) -> LaurentSeries:
    """Expand ``f`` in powers of ``(n - c)^-1`` by long division.

    Returns ``depth`` coefficients starting at the top exponent, or, when
    ``low_exponent`` is given, every coefficient down to that exponent.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    c = Fraction(center_shift)
    if f.is_zero():
        top = 0 if low_exponent is None else max(0, low_exponent)
        count = depth if low_exponent is None else top - low_exponent + 1
        return LaurentSeries(c, top, (Fraction(0),) * max(count, 1))
    p = f.numerator.shift(c)
    q = f.denominator.shift(c)
    top = p.degree - q.degree
    count = depth if low_exponent is None else max(top - low_exponent + 1, 0)
    # In t = 1/(n - c): f = t^(-top) * P(t) / Q(t) with reversed coefficient lists.
    P = list(reversed(p.coeffs))
    Q = list(reversed(q.coeffs))
    out: list[Fraction] = []
    inv = 1 / Q[0]
    for i in range(count):
        acc = P[i] if i < len(P) else Fraction(0)
        for j in range(1, min(i, len(Q) - 1) + 1):
            acc -= Q[j] * out[i - j]
        out.append(acc * inv)
    return LaurentSeries(c, top, tuple(out))


def binomial_series(exponent: int, terms: int) -> list[Fraction]:
    """Coefficients of ``(1 + t)^exponent`` up to ``t^(terms-1)``, any integer exponent."""
    out = []
    for j in range(terms):
        if exponent >= 0:
            out.append(Fraction(comb(exponent, j)))
        else:
            out.append(Fraction((-1) ** j * comb(-exponent + j - 1, j)))
    return out


# ---------------------------------------------------------------------------
# Display


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial, var: str = "n") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree, -1, -1):
        c = p.coeffs[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if e == 1 else f"{var}^{e}"
            body = mono if mag == 1 else f"{_fmt_coeff(mag)}{mono}"
        parts.append((sign, body))
    text = "".join(f"{s}{b}" for s, b in parts)
    return text[1:] if text.startswith("+") else text


def integer_roots_factorization(p: Polynomial) -> tuple[list[int], Polynomial]:
    """Split off linear factors ``(n - r)`` with integer roots ``r`` (with multiplicity)."""
    roots: list[int] = []
    rest = p.monic()
    changed = True
    while changed and rest.degree > 0:
        changed = False
        ints = rest * (1 / rest.content())
        a0 = next((abs(int(c)) for c in ints.coeffs if c != 0), 0)
        if ints.coeffs[0] == 0:
            roots.append(0)
            rest = rest.exact_div(N)
            changed = True
            continue
        for d in range(1, min(a0, 10**6) + 1):
            if a0 % d:
                continue
            for r in (d, -d):
                if rest(r) == 0:
                    roots.append(r)
                    rest = rest.exact_div(Polynomial((-r, 1)))
                    changed = True
                    break
            if changed:
                break
    return roots, rest


def _linear_factor(r: int) -> str:
    if r == 0:
        return "n"
    return f"(n-{r})" if r > 0 else f"(n+{-r})"


def _root_order(r: int) -> tuple:
    # n first, then (n+c) for c = 1, 2, ..., then (n-c) for c = 1, 2, ...
    return (0, 0) if r == 0 else ((1, -r) if r < 0 else (2, r))


def format_factored(f: RationalFunction) -> str:
    """Best-effort display in the factored style, e.g. ``(n^3+n^2-2n-4)/(n(n+2)(n-1))``.

    The numerator is shown as an integer content times a primitive polynomial;
    the denominator is split into integer linear factors where possible.
    """
    if f.is_zero():
        return "0"
    num, den = f.numerator, f.denominator
    roots, rest = integer_roots_factorization(den)
    scale = num.content() / rest.content()
    prim = num * (1 / num.content())
    if prim.lead < 0:
        prim, scale = -prim, -scale
    rest_prim = rest * (1 / rest.content())
    if f.is_polynomial():
        return format_polynomial(num)
    top, bottom = scale.numerator, scale.denominator
    if prim.degree == 0:
        num_text = str(top)
    elif top == 1:
        num_text = format_polynomial(prim)
    elif top == -1:
        num_text = f"-({format_polynomial(prim)})"
    else:
        num_text = f"{top}({format_polynomial(prim)})"
    pieces = [str(bottom)] if bottom != 1 else []
    counts: dict[int, int] = {}
    for r in roots:
        counts[r] = counts.get(r, 0) + 1
    for r in sorted(counts, key=_root_order):
        base = _linear_factor(r)
        e = counts[r]
        if e > 1:
            base = f"{base}^{e}" if base != "n" else f"n^{e}"
        pieces.append(base)
    if rest_prim.degree > 0:
        pieces.append(f"({format_polynomial(rest_prim)})")
    return f"({num_text})/({''.join(pieces)})"
