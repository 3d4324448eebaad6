"""Words in a free group on at most 26 named generators.

A letter is stored as a nonzero signed integer: ``+g`` is the generator with
1-based index ``g`` (displayed ``a``, ``b``, ...) and ``-g`` is its inverse
(displayed ``A``, ``B``, ...).  Words are always kept freely reduced.

Grammar accepted by :func:`parse`::

    word   := factor*
    factor := atom ('^' signed-integer)?
    atom   := letter | '1' | '(' word ')' | '[' word ',' word ']'

``[u,v]`` is the commutator ``u v u^-1 v^-1``.  Whitespace and ``*`` are
ignored everywhere.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_GENERATORS = 26


class WordParseError(ValueError):
    """Raised for malformed word text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class IdentityWordError(ValueError):
    """Raised when a word that must be nontrivial reduces to the identity."""


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def letter_name(x: int) -> str:
    ch = chr(ord("a") + abs(x) - 1)
    return ch if x > 0 else ch.upper()


@dataclass(frozen=True, order=True)
class Word:
    """A freely reduced word; ``letters`` holds signed generator indices."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for x in self.letters:
            if not isinstance(x, int) or x == 0 or abs(x) > MAX_GENERATORS:
                raise ValueError(f"invalid letter {x!r}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        return Word(base.letters * abs(k))

    def __invert__(self) -> "Word":
        return invert(self)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Word({render(self)!r})"

    def generators(self) -> set[int]:
        return {abs(x) for x in self.letters}

    def substitute(self, images: dict[int, "Word"]) -> "Word":
        """Apply the endomorphism sending generator ``g`` to ``images[g]`` (identity elsewhere)."""
        out: list[int] = []
        for x in self.letters:
            image = images.get(abs(x), Word((abs(x),)))
            out.extend(image.letters if x > 0 else invert(image).letters)
        return Word(tuple(out))


IDENTITY = Word(())


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self) -> None:
        while self.pos < len(self.text) and (self.text[self.pos].isspace() or self.text[self.pos] == "*"):
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> list[int]:
        letters = self._word()
        if self._peek():
            raise WordParseError(f"unexpected character {self.text[self.pos]!r}", self.pos)
        return letters

    def _word(self) -> list[int]:
        out: list[int] = []
        while True:
            ch = self._peek()
            if not ch or ch in ")],":
                return out
            out.extend(self._factor())

    def _factor(self) -> list[int]:
        atom = self._atom()
        if self._peek() == "^":
            self.pos += 1
            power = self._integer()
            if power < 0:
                atom = [-x for x in reversed(atom)]
            atom = atom * abs(power)
        return atom

    def _integer(self) -> int:
        self._skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise WordParseError("expected an integer exponent", start)
        return int(self.text[start:self.pos])

    def _expect(self, ch: str) -> None:
        if self._peek() != ch:
            raise WordParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def _atom(self) -> list[int]:
        ch = self._peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            inner = self._word()
            self._expect(")")
            return inner
        if ch == "[":
            self.pos += 1
            u = self._word()
            self._expect(",")
            v = self._word()
            self._expect("]")
            return u + v + [-x for x in reversed(u)] + [-x for x in reversed(v)]
        if ch == "1":
            self.pos += 1
            return []
        if ch.isascii() and ch.isalpha():
            self.pos += 1
            g = ord(ch.lower()) - ord("a") + 1
            return [g if ch.islower() else -g]
        if not ch:
            raise WordParseError("unexpected end of input", start)
        raise WordParseError(f"unexpected character {ch!r}", start)


def parse(text: str, allow_identity: bool = True) -> Word:
    """Parse ``text`` into a reduced word."""
    word = Word(tuple(_Parser(text).parse()))
    if not allow_identity and not word:
        raise IdentityWordError(f"{text!r} reduces to the identity")
    return word


def render(w: Word) -> str:
    """Inverse of :func:`parse`, compressing runs of a repeated letter as ``x^k``."""
    if not w.letters:
        return "1"
    parts: list[str] = []
    i = 0
    letters = w.letters
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        run = j - i
        parts.append(letter_name(letters[i]) + (f"^{run}" if run > 1 else ""))
        i = j
    return "".join(parts)


def invert(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)))


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(c, core)`` with ``w = c core c^-1`` and ``core`` cyclically reduced."""
    if not w:
        raise IdentityWordError("cannot cyclically reduce the identity")
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return Word(letters[:i]), Word(letters[i:j + 1])


def _smallest_period(seq: Sequence[int]) -> int:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and all(seq[t] == seq[t % p] for t in range(n)):
            return p
    return n


def primitive_root(w: Word) -> tuple[Word, int]:
    """Return ``(u, d)`` with ``w = u^d`` and ``u`` not a proper power.

    In a free group the maximal root of a cyclically reduced word is its
    shortest literal period, and conjugation carries roots along.
    """
    c, core = cyclic_reduce(w)
    p = _smallest_period(core.letters)
    root = c * Word(core.letters[:p]) * invert(c)
    return root, len(core) // p


def is_square(w: Word) -> bool:
    if not w:
        return True
    _, core = cyclic_reduce(w)
    half, rem = divmod(len(core), 2)
    return rem == 0 and core.letters[:half] == core.letters[half:]


def _letter_key(x: int) -> int:
    # a < A < b < B < ...
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def conjugacy_class_representative(w: Word) -> Word:
    """Least cyclic rotation of the cyclic core; equal for conjugate words."""
    if not w:
        return w
    _, core = cyclic_reduce(w)
    seq = core.letters
    rotations = (seq[i:] + seq[:i] for i in range(len(seq)))
    return Word(min(rotations, key=lambda r: [_letter_key(x) for x in r]))


def are_conjugate(u: Word, v: Word) -> bool:
    return conjugacy_class_representative(u) == conjugacy_class_representative(v)


def unsigned_exponents(words: Sequence[Word]) -> dict[int, int]:
    """Per generator, the number of occurrences of it or its inverse (this is ``2 L_x``)."""
    counts: Counter[int] = Counter()
    for w in words:
        counts.update(abs(x) for x in w.letters)
    return dict(sorted(counts.items()))


def parity_holds(words: Sequence[Word]) -> bool:
    return all(c % 2 == 0 for c in unsigned_exponents(words).values())


def half_exponents(words: Sequence[Word]) -> dict[int, int]:
    """``L_x`` for every generator that occurs; requires the parity condition."""
    counts = unsigned_exponents(words)
    if any(c % 2 for c in counts.values()):
        raise ValueError("some generator has odd unsigned exponent")
    return {g: c // 2 for g, c in counts.items()}


def parse_tuple(texts: Sequence[str]) -> tuple[Word, ...]:
    """Parse integral inputs; every word must be nontrivial."""
    if not texts:
        raise ValueError("a word tuple needs at least one word")
    return tuple(parse(t, allow_identity=False) for t in texts)


def _pairings_weight(items: list, single, pair) -> int:
    # Sum over partial pairings of ``items`` of prod(single) * prod(pair).
    if not items:
        return 1
    first, rest = items[0], items[1:]
    total = 0
    s = single(first)
    if s:
        total += s * _pairings_weight(rest, single, pair)
    for i, other in enumerate(rest):
        p = pair(first, other)
        if p:
            total += p * _pairings_weight(rest[:i] + rest[i + 1:], single, pair)
    return total


def limit_counting(words: Sequence[Word]) -> int:
    """Weighted count of partitions of the tuple into square singletons and
    conjugate (or inverse-conjugate) pairs, each pair weighted by its root exponent.
    """
    for w in words:
        if not w:
            raise IdentityWordError("limit counting needs nontrivial words")
    reps = [
        (conjugacy_class_representative(w), conjugacy_class_representative(invert(w)), primitive_root(w)[1])
        for w in words
    ]

    def single(i: int) -> int:
        return 1 if is_square(words[i]) else 0

    def pair(i: int, j: int) -> int:
        rep_i, inv_rep_i, d = reps[i]
        rep_j = reps[j][0]
        return d if rep_j in (rep_i, inv_rep_i) else 0

    return _pairings_weight(list(range(len(words))), single, pair)


def ds_predicted_moment(d: int, powers: Sequence[int]) -> int:
    """Predicted limit of ``E[prod_i tr(w^{j_i})]`` for ``w = u^d`` with ``u`` primitive.

    For ``d = 1`` this is the joint moment of independent normal variables
    ``Z_j``: for odd ``j`` mean 0 and variance ``j``; for even ``j`` mean 1
    and variance ``j + 1``.  Moments are expanded Isserlis-style over partial
    pairings of equal ``|j|``.  For ``d > 1`` the tuple ``(u^{d j_i})`` is
    counted directly: ``u^{dj}`` is a square iff ``dj`` is even, and two powers
    pair up iff ``|j| = |j'|`` with weight ``d|j|``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    js = [abs(j) for j in powers]
    if any(j == 0 for j in js):
        raise ValueError("powers must be nonzero")
    if d == 1:
        def single(j: int) -> int:
            return 1 if j % 2 == 0 else 0

        def pair(j: int, k: int) -> int:
            if j != k:
                return 0
            return j + 1 if j % 2 == 0 else j
    else:
        def single(j: int) -> int:
            return 1 if (d * j) % 2 == 0 else 0

        def pair(j: int, k: int) -> int:
            return d * j if j == k else 0
    return _pairings_weight(js, single, pair)
