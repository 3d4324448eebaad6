"""Orthogonal and symplectic Weingarten functions as exact rational functions of n.

The orthogonal function is the inverse of the Gram matrix
``G(m1, m2) = n^(k - rho(m1, m2))`` on matchings of [2k].  We solve for one
column, the one of the identity matching ``e``.  ``G`` commutes with the
relabelling action of the symmetric group, so the solution is fixed by the
stabiliser of ``e``; its orbits are the level sets of ``coset_type(., e)``.
The column therefore collapses to a ``p(k) x p(k)`` system, one unknown per
coset type, which is solved with :func:`wordint.exactalg.solve_linear`.  The
full Gram identity is checked separately in the test-suite.

The symplectic function is obtained from the orthogonal one by
``Wg^Sp(m1, m2; n) = (-1)^k sign(sigma_m1 sigma_m2^-1) Wg^O(m1, m2; -2n)``.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .exactalg import (LaurentSeries, Polynomial, RationalFunction, laurent_at_infinity,
                       solve_linear)
from .matchings import (Matching, MatchingCapError, coset_type, enumerate_matchings,
                        identity_matching, loop_lengths, partitions, sigma_sign)

log = logging.getLogger(__name__)

DEFAULT_K_CAP = 4
EXTENDED_K_CAP = 5
CACHE_VERSION = 1


class WeingartenCapError(MatchingCapError):
    pass


@lru_cache(maxsize=None)
def rho_table(k: int) -> tuple[tuple[int, ...], ...]:
    """``rho`` between all pairs of ``enumerate_matchings(k)``."""
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    return tuple(tuple(k - len(loop_lengths(a.partner, b.partner)) for b in ms) for a in ms)


@lru_cache(maxsize=None)
def type_table(k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Coset types between all pairs of ``enumerate_matchings(k)``."""
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    return tuple(tuple(loop_lengths(a.partner, b.partner) for b in ms) for a in ms)


def gram_entry(m1: Matching, m2: Matching) -> Polynomial:
    """``n^(k - rho(m1, m2))``: one factor of n per loop of the two matchings."""
    if m1.k != m2.k:
        raise ValueError("matchings of different sizes")
    return Polynomial.monomial(len(loop_lengths(m1.partner, m2.partner)))


def gram_matrix(k: int) -> list[list[Polynomial]]:
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    return [[gram_entry(a, b) for b in ms] for a in ms]


@dataclass(frozen=True)
class WeingartenTable:
    """Weingarten values of one group for one ``k``, keyed by coset type.

    For ``group == "Sp"`` the stored value is ``(-1)^k Wg^O(type; -2n)``; the
    sign ``sign(sigma_m1) sign(sigma_m2)`` is not a coset-type invariant and is
    applied by :meth:`value`.
    """

    group: str
    k: int
    entries: Mapping[tuple[int, ...], RationalFunction] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))
        if tuple(1 for _ in range(self.k)) not in self.entries:
            raise ValueError("table lacks the diagonal coset type")

    def by_type(self, ctype: tuple[int, ...]) -> RationalFunction:
        return self.entries[tuple(ctype)]

    def value(self, m1: Matching, m2: Matching) -> RationalFunction:
        out = self.entries[coset_type(m1, m2)]
        if self.group == "Sp" and sigma_sign(m1) * sigma_sign(m2) < 0:
            out = -out
        return out

    def to_json(self) -> dict:
        return {
            "version": CACHE_VERSION,
            "group": self.group,
            "k": self.k,
            "entries": [
                {"coset_type": list(t), **self.entries[t].to_json()}
                for t in partitions(self.k)
            ],
        }


def _check_k(k: int, allow_extended: bool) -> None:
    cap = EXTENDED_K_CAP if allow_extended else DEFAULT_K_CAP
    if k < 1:
        raise ValueError("k must be positive")
    if k > cap:
        raise WeingartenCapError(f"Weingarten order k={k} exceeds the cap {cap}")


@lru_cache(maxsize=None)
def _orbit_system(k: int) -> tuple[list[tuple[int, ...]], list[list[Polynomial]]]:
    """Rows: one representative per coset type relative to ``e``; columns: orbit sums."""
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    e = identity_matching(k)
    types = partitions(k)
    reps: dict[tuple[int, ...], Matching] = {}
    orbit: dict[tuple[int, ...], list[Matching]] = {t: [] for t in types}
    for m in ms:
        t = loop_lengths(m.partner, e.partner)
        orbit[t].append(m)
        reps.setdefault(t, m)
    matrix = []
    for lam in types:
        row = []
        for mu in types:
            counts: dict[int, int] = {}
            for m in orbit[mu]:
                loops = len(loop_lengths(reps[lam].partner, m.partner))
                counts[loops] = counts.get(loops, 0) + 1
            row.append(Polynomial([counts.get(d, 0) for d in range(k + 1)]))
        matrix.append(row)
    return types, matrix


def _reduced_rhs(types: list[tuple[int, ...]], k: int) -> list[Polynomial]:
    diag = tuple(1 for _ in range(k))
    return [Polynomial.constant(1 if t == diag else 0) for t in types]


def _verify_entries(k: int, entries: Mapping[tuple[int, ...], RationalFunction]) -> bool:
    types, matrix = _orbit_system(k)
    if set(entries) != set(types):
        return False
    rhs = _reduced_rhs(types, k)
    for row, b in zip(matrix, rhs):
        acc = RationalFunction(0)
        for a, t in zip(row, types):
            acc = acc + RationalFunction(a) * entries[t]
        if acc != RationalFunction(b):
            return False
    return True


def compute_wg_o(k: int) -> dict[tuple[int, ...], RationalFunction]:
    types, matrix = _orbit_system(k)
    solution = solve_linear(matrix, _reduced_rhs(types, k))
    return dict(zip(types, solution))


def wg_column(k: int, target: Matching) -> list[RationalFunction]:
    """Solve the full Gram system ``G x = e_target`` with no symmetry reduction."""
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    b = [Polynomial.constant(1 if m == target else 0) for m in ms]
    return solve_linear(gram_matrix(k), b)


# ---------------------------------------------------------------------------
# Persistent cache


def cache_dir() -> Path:
    env = os.environ.get("WORDINT_CACHE")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "wordint"


def _cache_file(k: int, directory: Path | None = None) -> Path:
    return (directory or cache_dir()) / f"wg_O_k{k}.json"


def _load_cached(k: int, directory: Path | None = None) -> dict[tuple[int, ...], RationalFunction] | None:
    path = _cache_file(k, directory)
    try:
        doc = json.loads(path.read_text())
        if doc.get("version") != CACHE_VERSION or doc.get("group") != "O" or doc.get("k") != k:
            raise ValueError("cache header mismatch")
        entries = {tuple(int(p) for p in e["coset_type"]): RationalFunction.from_json(e)
                   for e in doc["entries"]}
    except FileNotFoundError:
        return None
    except (ValueError, KeyError, TypeError, ZeroDivisionError) as exc:
        log.warning("discarding unreadable Weingarten cache %s: %s", path, exc)
        return None
    if not _verify_entries(k, entries):
        log.warning("discarding Weingarten cache %s: it fails the Gram identity", path)
        return None
    return entries


def _store(table: WeingartenTable, directory: Path | None = None) -> None:
    path = _cache_file(table.k, directory)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(table.to_json(), fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError as exc:
        log.warning("could not write Weingarten cache %s: %s", path, exc)


def cache_info(directory: Path | None = None) -> dict:
    d = directory or cache_dir()
    files = sorted(p.name for p in d.glob("wg_*.json")) if d.exists() else []
    return {"cache_dir": str(d), "files": files}


def clear_cache(directory: Path | None = None) -> int:
    d = directory or cache_dir()
    removed = 0
    if d.exists():
        for p in d.glob("wg_*.json"):
            p.unlink()
            removed += 1
    _TABLES.clear()
    return removed


_TABLES: dict[tuple[str, int], WeingartenTable] = {}


def wg_o(k: int, allow_extended: bool = False, use_cache: bool = True) -> WeingartenTable:
    """The orthogonal Weingarten table for matchings of [2k]."""
    _check_k(k, allow_extended)
    key = ("O", k)
    if key in _TABLES:
        return _TABLES[key]
    entries = _load_cached(k) if use_cache else None
    fresh = entries is None
    if fresh:
        if k >= EXTENDED_K_CAP:
            log.warning("building the k=%d Weingarten table; this enumerates %d matchings", k, 945)
        entries = compute_wg_o(k)
    table = WeingartenTable("O", k, entries)
    if fresh and use_cache:
        _store(table)
    _TABLES[key] = table
    return table


def wg_sp(k: int, allow_extended: bool = False, use_cache: bool = True) -> WeingartenTable:
    """The symplectic table, derived from the orthogonal one by ``n -> -2n``."""
    key = ("Sp", k)
    if key in _TABLES:
        return _TABLES[key]
    base = wg_o(k, allow_extended, use_cache)
    sign = -1 if k % 2 else 1
    entries = {t: f.compose_linear(-2, 0) * sign for t, f in base.entries.items()}
    table = WeingartenTable("Sp", k, entries)
    _TABLES[key] = table
    return table


# ---------------------------------------------------------------------------
# Path-sum expansion


def chain_series(k: int, start: int, depth: int) -> list[list[int]]:
    """Signed chain counts from matching number ``start`` of ``enumerate_matchings(k)``.

    ``out[d][j]`` is the sum of ``(-1)^l`` over chains ``start = m_0, ..., m_l = j``
    with consecutive entries distinct and ``sum rho(m_i, m_{i+1}) = d``.
    """
    rho = rho_table(k)
    size = len(rho)
    out = [[0] * size for _ in range(depth + 1)]
    out[0][start] = 1
    for d in range(1, depth + 1):
        row = out[d]
        for j in range(size):
            acc = 0
            rj = rho[j]
            for i in range(size):
                r = rj[i]
                if 0 < r <= d:
                    acc -= out[d - r][i]
            row[j] = acc
    return out


def wg_series(k: int, m1: Matching, m2: Matching, depth: int) -> LaurentSeries:
    """``n^-k sum_l sum_chains (-1)^l n^(-sum rho)`` truncated at total weight ``depth``."""
    ms = enumerate_matchings(k, cap=max(k, EXTENDED_K_CAP))
    i, j = ms.index(m1), ms.index(m2)
    series = chain_series(k, i, depth)
    return LaurentSeries(Fraction(0), -k, tuple(Fraction(series[d][j]) for d in range(depth + 1)))


def wg_series_check(k: int, m1: Matching, m2: Matching, depth: int) -> bool:
    if depth > 6:
        raise ValueError("series depth is limited to 6")
    series = wg_series(k, m1, m2, depth)
    exact = laurent_at_infinity(wg_o(k).value(m1, m2), 0, low_exponent=-k - depth)
    return all(exact.coefficient(e) == series.coefficient(e) for e in range(-k, -k - depth - 1, -1)) \
        and all(exact.coefficient(e) == 0 for e in range(exact.top_exponent, -k, -1))


def wg_value(group: str, m1: Matching, m2: Matching) -> RationalFunction:
    table = wg_o(m1.k) if group == "O" else wg_sp(m1.k)
    return table.value(m1, m2)


__all__ = [
    "WeingartenTable", "WeingartenCapError", "gram_entry", "gram_matrix", "wg_o", "wg_sp",
    "wg_column", "wg_series", "wg_series_check", "chain_series", "rho_table", "type_table",
    "cache_dir", "cache_info", "clear_cache", "compute_wg_o",
]
