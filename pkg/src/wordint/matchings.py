"""Perfect matchings of [2k], their permutation avatars, the distance rho and coset types."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

DEFAULT_CAP = 5


class MatchingCapError(ValueError):
    """Raised when a matching size exceeds the configured cap."""


@dataclass(frozen=True, order=True)
class Matching:
    """A perfect matching of {1, ..., 2k} stored as canonical ordered pairs.

    Canonical means each pair is increasing and the pairs are sorted by their
    first entries, so ``pairs`` read left to right is ``m_(1), m_(2), ..., m_(2k)``.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        flat = sorted(x for p in pairs for x in p)
        if flat != list(range(1, 2 * len(pairs) + 1)):
            raise ValueError(f"not a perfect matching of [2k]: {self.pairs}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_partner(cls, partner: Sequence[int]) -> "Matching":
        """Build from a 0-based involution list."""
        return cls(tuple((i + 1, j + 1) for i, j in enumerate(partner) if i < j))

    @property
    def k(self) -> int:
        return len(self.pairs)

    @cached_property
    def partner(self) -> tuple[int, ...]:
        """0-based fixed-point-free involution: ``partner[i]`` is matched with ``i``."""
        out = [0] * (2 * self.k)
        for a, b in self.pairs:
            out[a - 1] = b - 1
            out[b - 1] = a - 1
        return tuple(out)

    @cached_property
    def sequence(self) -> tuple[int, ...]:
        """``(m_(1), ..., m_(2k))``, i.e. the one-line form of sigma_m."""
        return tuple(x for p in self.pairs for x in p)

    def __str__(self) -> str:
        return "{" + ",".join(f"({a},{b})" for a, b in self.pairs) + "}"

    def to_list(self) -> list[list[int]]:
        return [list(p) for p in self.pairs]


def _check_cap(k: int, cap: int) -> None:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k > cap:
        raise MatchingCapError(f"k={k} exceeds the matching cap {cap}")


def _partners(points: tuple[int, ...]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, other in enumerate(rest):
        for tail in _partners(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + tail


@lru_cache(maxsize=None)
def _enumerate(k: int) -> tuple[Matching, ...]:
    return tuple(Matching(tuple(p)) for p in _partners(tuple(range(1, 2 * k + 1))))


def enumerate_matchings(k: int, cap: int = DEFAULT_CAP) -> tuple[Matching, ...]:
    """All (2k-1)!! matchings of [2k], in lexicographic order of their pair lists."""
    _check_cap(k, cap)
    return _enumerate(k)


def identity_matching(k: int) -> Matching:
    return Matching(tuple((2 * r + 1, 2 * r + 2) for r in range(k)))


def pi(m: Matching) -> tuple[int, ...]:
    """The involution pi_m in 1-based one-line notation."""
    return tuple(j + 1 for j in m.partner)


def sigma(m: Matching) -> tuple[int, ...]:
    """sigma_m : i -> m_(i), 1-based one-line notation."""
    return m.sequence


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given in one-line notation (0- or 1-based)."""
    base = min(perm) if perm else 0
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - base
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def sigma_sign(m: Matching) -> int:
    return permutation_sign(m.sequence)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """``(p q)(i) = p(q(i))`` for 1-based one-line permutations."""
    return tuple(p[q[i] - 1] for i in range(len(q)))


def cycle_type(perm: Sequence[int]) -> list[int]:
    """Cycle lengths of a 1-based permutation, descending."""
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        lengths.append(length)
    return sorted(lengths, reverse=True)


def _check_same_size(m1: Matching, m2: Matching) -> None:
    if m1.k != m2.k:
        raise ValueError(f"matchings of different sizes: {m1.k} and {m2.k}")


def perm_length(perm: Sequence[int]) -> int:
    """Minimal number of transpositions: size minus number of cycles."""
    return len(perm) - len(cycle_type(perm))


def rho(m1: Matching, m2: Matching) -> int:
    """Half the transposition length of pi_{m1} pi_{m2}."""
    _check_same_size(m1, m2)
    return perm_length(compose(pi(m1), pi(m2))) // 2


def coset_type(m1: Matching, m2: Matching) -> tuple[int, ...]:
    """Half of the cycle type of pi_{m1} pi_{m2}; its cycles come in equal-length pairs."""
    _check_same_size(m1, m2)
    lengths = cycle_type(compose(pi(m1), pi(m2)))
    if len(lengths) % 2 or any(lengths[i] != lengths[i + 1] for i in range(0, len(lengths), 2)):
        raise RuntimeError(f"cycles of pi_m1 pi_m2 do not pair up: {lengths}")
    return tuple(lengths[0::2])


def loop_lengths(p1: Sequence[int], p2: Sequence[int]) -> tuple[int, ...]:
    """Half-lengths of the alternating loops of two 0-based involutions, descending.

    This is the coset type computed from the loop picture instead of the
    permutation product; used on hot paths.
    """
    seen = [False] * len(p1)
    out = []
    for start in range(len(p1)):
        if seen[start]:
            continue
        i, size = start, 0
        while True:
            seen[i] = True
            j = p1[i]
            seen[j] = True
            size += 1
            i = p2[j]
            if i == start:
                break
        out.append(size)
    return tuple(sorted(out, reverse=True))


def partitions(k: int) -> list[tuple[int, ...]]:
    """Partitions of k as descending tuples, in reverse lexicographic order."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, largest: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(k, k, ())
    return out
