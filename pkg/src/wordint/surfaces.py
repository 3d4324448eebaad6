"""The surface of a matching system.

For a word tuple, every letter is an interval on the boundary circle of its
word.  The interval of a letter in ``x`` carries marked points
``p(0), ..., p(kappa_x)`` in the order in which the circle meets the
transversion points ``(x, 0), ..., (x, kappa_x)`` of the target circle: forward
for ``x`` and backward for ``x^-1``.  The matching ``m_{x,k}`` joins the level
``k`` points of its paired intervals by an arc.  Two kinds of 2-cells are
glued in:

* type ``(x, k)`` faces, bounded by interval segments between levels ``k``
  and ``k + 1`` and arcs of ``m_{x,k}`` and ``m_{x,k+1}``;
* type ``o`` faces, bounded by the boundary stubs between consecutive letters
  and by outer arcs (level ``0`` and level ``kappa_x``).

Each arc has two sides: the side that maps just before its transversion point
and the side that maps just after it.  A level ``0`` arc has the ``o`` region
on its "before" side and a level ``kappa_x`` arc on its "after" side.  When
``kappa_x = 0`` both sides of the single arc face the ``o`` region, so a type
``o`` face that arrives at a marked point along a stub on one side leaves the
arc's far end on the same side.  This is what keeps the face from crossing the
transversion point.  We model each interval by two half-points, ``B`` (before
side, at level 0) and ``A`` (after side, at level ``kappa_x``), which makes
every gluing degree two and every face a plain cycle.

Orientability is decided by trying to orient every face so that each arc is
traversed once in each direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .freegroup import Word, half_exponents, letter_name
from .matchings import Matching, enumerate_matchings, rho


class MalformedSystemError(ValueError):
    pass


class GluingError(RuntimeError):
    """The face census is inconsistent; indicates a bug, never bad input."""


@dataclass(frozen=True)
class Slot:
    """One letter occurrence: word index, position in the word, and sign."""

    word: int
    pos: int
    sign: int


def interval_table(words: Sequence[Word]) -> dict[int, tuple[Slot, ...]]:
    """Per generator, its letters in scan order (``w_1`` left to right, then ``w_2``, ...).

    Slot ``i`` of generator ``x`` is the interval labelled ``i + 1`` in ``[2 L_x]``.
    """
    table: dict[int, list[Slot]] = {}
    for wi, w in enumerate(words):
        for pos, x in enumerate(w.letters):
            table.setdefault(abs(x), []).append(Slot(wi, pos, 1 if x > 0 else -1))
    return {g: tuple(v) for g, v in sorted(table.items())}


@dataclass(frozen=True)
class MatchingSystem:
    """``kappa_x + 1`` matchings of ``[2 L_x]`` for every generator ``x``."""

    matchings: Mapping[int, tuple[Matching, ...]]

    def __post_init__(self):
        object.__setattr__(self, "matchings", {g: tuple(v) for g, v in sorted(self.matchings.items())})
        for g, ms in self.matchings.items():
            if not ms:
                raise MalformedSystemError(f"generator {letter_name(g)} has no matchings")
            if len({m.k for m in ms}) != 1:
                raise MalformedSystemError(f"generator {letter_name(g)} mixes matching sizes")

    @property
    def kappa(self) -> dict[int, int]:
        return {g: len(ms) - 1 for g, ms in self.matchings.items()}

    @property
    def total_kappa(self) -> int:
        return sum(len(ms) - 1 for ms in self.matchings.values())

    def outer(self) -> tuple[dict[int, Matching], dict[int, Matching]]:
        return ({g: ms[0] for g, ms in self.matchings.items()},
                {g: ms[-1] for g, ms in self.matchings.items()})

    def has_consecutive_duplicates(self) -> bool:
        return any(a == b for ms in self.matchings.values() for a, b in zip(ms, ms[1:]))

    def validate(self, words: Sequence[Word]) -> None:
        L = half_exponents(words)
        if set(L) != set(self.matchings):
            raise MalformedSystemError("matching system and words use different generators")
        for g, ms in self.matchings.items():
            if ms[0].k != L[g]:
                raise MalformedSystemError(
                    f"generator {letter_name(g)} needs matchings of [{2 * L[g]}], got [{2 * ms[0].k}]")


def kappa_one(pairs: Mapping[int, tuple[Matching, Matching]]) -> MatchingSystem:
    return MatchingSystem({g: tuple(p) for g, p in pairs.items()})


def kappa_zero(ms: Mapping[int, Matching]) -> MatchingSystem:
    return MatchingSystem({g: (m,) for g, m in ms.items()})


def iter_kappa_one(words: Sequence[Word]) -> Iterator[MatchingSystem]:
    L = half_exponents(words)
    gens = sorted(L)
    choices = [[(a, b) for a in enumerate_matchings(L[g]) for b in enumerate_matchings(L[g])] for g in gens]

    def rec(i: int, acc: dict) -> Iterator[MatchingSystem]:
        if i == len(gens):
            yield kappa_one(acc)
            return
        for pair in choices[i]:
            acc[gens[i]] = pair
            yield from rec(i + 1, acc)

    yield from rec(0, {})


def iter_kappa_zero(words: Sequence[Word]) -> Iterator[MatchingSystem]:
    L = half_exponents(words)
    gens = sorted(L)

    def rec(i: int, acc: dict) -> Iterator[MatchingSystem]:
        if i == len(gens):
            yield kappa_zero(acc)
            return
        for m in enumerate_matchings(L[gens[i]]):
            acc[gens[i]] = m
            yield from rec(i + 1, acc)

    yield from rec(0, {})


# ---------------------------------------------------------------------------
# Diagram


@dataclass(frozen=True)
class Face:
    """A 2-cell.  ``level`` is ``None`` for type ``o`` faces.

    ``walk`` lists ``(edge id, direction)`` around the boundary, where the
    direction is +1 when the edge is traversed along its reference orientation.
    """

    generator: int | None
    level: int | None
    walk: tuple[tuple[int, int], ...]

    @property
    def kind(self) -> str:
        return "o" if self.generator is None else f"{letter_name(self.generator)}{self.level}"


@dataclass(frozen=True)
class Component:
    chi: int
    orientable: bool
    boundary_count: int
    words: tuple[int, ...]

    @property
    def topo_name(self) -> str:
        return topo_name(self.chi, self.orientable, self.boundary_count)


def topo_name(chi: int, orientable: bool, boundary_count: int) -> str:
    """``Σ_{g,b}`` (orientable, chi = 2 - 2g - b) or ``P_{g,b}`` (chi = 2 - g - b)."""
    if orientable:
        twice_genus = 2 - chi - boundary_count
        if twice_genus < 0 or twice_genus % 2:
            raise GluingError(f"impossible orientable surface chi={chi}, b={boundary_count}")
        return f"Σ_{{{twice_genus // 2},{boundary_count}}}"
    genus = 2 - chi - boundary_count
    if genus < 1:
        raise GluingError(f"impossible non-orientable surface chi={chi}, b={boundary_count}")
    return f"P_{{{genus},{boundary_count}}}"


@dataclass(frozen=True)
class SurfaceDiagram:
    faces: tuple[Face, ...]
    vertex_count: int
    edge_count: int
    type_o_count: int
    euler_characteristic: int
    components: tuple[Component, ...]
    delta_sign: int | None = None
    edge_labels: tuple[str, ...] = field(default=(), repr=False)
    face_component: tuple[int, ...] = field(default=(), repr=False)

    @property
    def face_count(self) -> int:
        return len(self.faces)

    def dump(self) -> str:
        """One line per face: its kind followed by its boundary walk."""
        lines = []
        for i, f in enumerate(self.faces):
            tokens = " ".join(f"{self.edge_labels[e]}{'+' if d > 0 else '-'}" for e, d in f.walk)
            lines.append(f"F{i} [{f.kind}] {tokens}")
        return "\n".join(lines)


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.parity = [0] * size

    def find(self, i: int) -> tuple[int, int]:
        par = 0
        root = i
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression with parity
        cur, cur_par = i, par
        while self.parent[cur] != cur:
            nxt, p = self.parent[cur], self.parity[cur]
            self.parent[cur], self.parity[cur] = root, cur_par
            cur_par ^= p
            cur = nxt
        return root, par

    def union(self, a: int, b: int, parity: int = 0) -> bool:
        """Merge with ``s_a xor s_b = parity``; False on contradiction."""
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == parity
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ parity
        return True


class _Skeleton:
    """Vertices, boundary edges and arcs of Σ_m, plus the face tracing."""

    def __init__(self, words: Sequence[Word], system: MatchingSystem):
        system.validate(words)
        self.words = words
        self.system = system
        self.table = interval_table(words)
        self.kappa = system.kappa
        self.vertex: dict[tuple[int, int, int], int] = {}
        self.vertex_word: list[int] = []
        for g, slots in self.table.items():
            for s, slot in enumerate(slots):
                for k in range(self.kappa[g] + 1):
                    self.vertex[(g, s, k)] = len(self.vertex_word)
                    self.vertex_word.append(slot.word)
        self.edge_ends: list[tuple[int, int]] = []
        self.edge_labels: list[str] = []
        self.edge_is_arc: list[bool] = []
        # Boundary edges along each circle.
        slot_of: dict[tuple[int, int], tuple[int, int]] = {}
        for g, slots in self.table.items():
            for s, slot in enumerate(slots):
                slot_of[(slot.word, slot.pos)] = (g, s)
        self.segment: dict[tuple[int, int, int], int] = {}  # (g, s, k): edge between levels k, k+1
        self.stub_after: dict[tuple[int, int], int] = {}  # (g, s): stub leaving the interval
        self.stub_before: dict[tuple[int, int], int] = {}  # (g, s): stub entering the interval
        self.stub_tail: dict[int, tuple[int, int, int]] = {}  # stub -> half-point it leaves
        self.stub_head: dict[int, tuple[int, int, int]] = {}  # stub -> half-point it enters
        for wi, w in enumerate(words):
            letters = [slot_of[(wi, pos)] for pos in range(len(w))]
            for pos, (g, s) in enumerate(letters):
                sign = self.table[g][s].sign
                levels = list(range(self.kappa[g] + 1))
                if sign < 0:
                    levels.reverse()
                for a, b in zip(levels, levels[1:]):
                    self.segment[(g, s, min(a, b))] = self._add_edge(
                        self.vertex[(g, s, a)], self.vertex[(g, s, b)], f"{letter_name(g)}{s + 1}:{a}{b}", False)
                g2, s2 = letters[(pos + 1) % len(letters)]
                entry_level = 0 if self.table[g2][s2].sign > 0 else self.kappa[g2]
                stub = self._add_edge(self.vertex[(g, s, levels[-1])], self.vertex[(g2, s2, entry_level)],
                                      f"w{wi + 1}:{pos + 1}", False)
                self.stub_after[(g, s)] = stub
                self.stub_before[(g2, s2)] = stub
                self.stub_tail[stub] = (g, s, 1 if sign > 0 else 0)
                self.stub_head[stub] = (g2, s2, 0 if self.table[g2][s2].sign > 0 else 1)
        self.arc: dict[tuple[int, int, int], int] = {}  # (g, k, slot) -> arc edge id
        for g, ms in system.matchings.items():
            for k, m in enumerate(ms):
                for a, b in m.pairs:
                    e = self._add_edge(self.vertex[(g, a - 1, k)], self.vertex[(g, b - 1, k)],
                                       f"{letter_name(g)}{k}:{a}-{b}", True)
                    self.arc[(g, k, a - 1)] = e
                    self.arc[(g, k, b - 1)] = e

    def _add_edge(self, u: int, v: int, label: str, is_arc: bool) -> int:
        self.edge_ends.append((u, v))
        self.edge_labels.append(label)
        self.edge_is_arc.append(is_arc)
        return len(self.edge_ends) - 1

    def _arc_step(self, g: int, k: int, s: int) -> tuple[int, tuple[int, int]]:
        m = self.system.matchings[g][k]
        t = m.partner[s]
        return t, (self.arc[(g, k, s)], 1 if s < t else -1)

    def type_x_faces(self) -> list[Face]:
        faces = []
        for g, ms in self.system.matchings.items():
            slots = self.table[g]
            for k in range(len(ms) - 1):
                seen = set()
                for start in range(len(slots)):
                    if start in seen:
                        continue
                    walk = []
                    s = start
                    while True:
                        seen.add(s)
                        # Segments follow the circle, which runs k -> k+1 on positive letters.
                        walk.append((self.segment[(g, s, k)], 1 if slots[s].sign > 0 else -1))
                        s, step = self._arc_step(g, k + 1, s)
                        seen.add(s)
                        walk.append(step)
                        walk.append((self.segment[(g, s, k)], -1 if slots[s].sign > 0 else 1))
                        s, step = self._arc_step(g, k, s)
                        walk.append(step)
                        if s == start:
                            break
                    faces.append(Face(g, k, tuple(walk)))
        return faces

    def type_o_faces(self) -> list[Face]:
        # Half-points (g, s, side): side 0 = before (level 0), side 1 = after (level kappa).
        faces = []
        seen = set()
        for g, slots in self.table.items():
            for s0 in range(len(slots)):
                for side0 in (0, 1):
                    if (g, s0, side0) in seen:
                        continue
                    walk = []
                    h = (g, s0, side0)
                    while True:
                        seen.add(h)
                        hg, hs, hside = h
                        sign = self.table[hg][hs].sign
                        is_exit = (hside == 1) == (sign > 0)
                        if is_exit:
                            stub = self.stub_after[(hg, hs)]
                            walk.append((stub, 1))
                            nxt = self.stub_head[stub]
                        else:
                            stub = self.stub_before[(hg, hs)]
                            walk.append((stub, -1))
                            nxt = self.stub_tail[stub]
                        seen.add(nxt)
                        ng, ns, nside = nxt
                        level = 0 if nside == 0 else self.kappa[ng]
                        t, step = self._arc_step(ng, level, ns)
                        walk.append(step)
                        h = (ng, t, nside)
                        if h == (g, s0, side0):
                            break
                    faces.append(Face(None, None, tuple(walk)))
        return faces


def build(words: Sequence[Word], system: MatchingSystem, with_delta: bool = True) -> SurfaceDiagram:
    """Full face census, Euler characteristic, components and orientability."""
    sk = _Skeleton(words, system)
    o_faces = sk.type_o_faces()
    faces = o_faces + sk.type_x_faces()
    V = len(sk.vertex_word)
    E = len(sk.edge_ends)
    F = len(faces)
    chi = V - E + F
    closed = euler_characteristic_closed_form(words, system, len(o_faces))
    if chi != closed:
        raise GluingError(f"face census gives chi={chi} but the closed form gives {closed}")
    # Edge incidences.
    uses: dict[int, list[tuple[int, int]]] = {}
    for fi, f in enumerate(faces):
        for e, d in f.walk:
            uses.setdefault(e, []).append((fi, d))
    for e in range(E):
        expected = 2 if sk.edge_is_arc[e] else 1
        if len(uses.get(e, ())) != expected:
            raise GluingError(f"edge {sk.edge_labels[e]} lies on {len(uses.get(e, ()))} face sides")
    # Components via the 1-skeleton.
    vuf = _UnionFind(V)
    for u, v in sk.edge_ends:
        vuf.union(u, v)
    comp_of_vertex = [vuf.find(v)[0] for v in range(V)]
    # Orientation constraints across arcs.
    fuf = _UnionFind(F)
    bad_faces = set()
    for e, occ in uses.items():
        if len(occ) == 2:
            (f1, d1), (f2, d2) = occ
            if not fuf.union(f1, f2, 1 if d1 == d2 else 0):
                bad_faces.add(f1)
    face_root = [comp_of_vertex[sk.edge_ends[f.walk[0][0]][0]] for f in faces]
    roots = sorted(set(comp_of_vertex), key=comp_of_vertex.index)
    index_of = {r: i for i, r in enumerate(roots)}
    face_comp = tuple(index_of[r] for r in face_root)
    components = []
    for ci, r in enumerate(roots):
        cv = sum(1 for c in comp_of_vertex if c == r)
        ce = sum(1 for u, _ in sk.edge_ends if comp_of_vertex[u] == r)
        cf = sum(1 for c in face_comp if c == ci)
        cwords = tuple(sorted({sk.vertex_word[v] for v in range(V) if comp_of_vertex[v] == r}))
        orientable = not any(face_comp[f] == ci for f in bad_faces)
        components.append(Component(cv - ce + cf, orientable, len(cwords), cwords))
    delta = None
    if with_delta and all(k == 1 for k in system.kappa.values()):
        delta = delta_sign(words, system)
    return SurfaceDiagram(tuple(faces), V, E, len(o_faces), chi, tuple(components), delta,
                          tuple(sk.edge_labels), face_comp)


def euler_characteristic_closed_form(words: Sequence[Word], system: MatchingSystem,
                                     type_o_count: int | None = None) -> int:
    """``-sum L_x + #type-o faces - sum_k rho(m_{x,k}, m_{x,k+1})``."""
    if type_o_count is None:
        type_o_count = TupleGeometry(words).type_o_count(*system.outer())
    total = -sum(half_exponents(words).values()) + type_o_count
    for ms in system.matchings.values():
        total -= sum(rho(a, b) for a, b in zip(ms, ms[1:]))
    return total


def orientability_and_components(diagram: SurfaceDiagram) -> tuple[Component, ...]:
    return diagram.components


@dataclass(frozen=True)
class SignedMatchingSystem:
    base: MatchingSystem
    epsilon: Mapping[int, int]  # face index -> +1 / -1 (missing means +1)


def signed_build(words: Sequence[Word], signed: SignedMatchingSystem) -> SurfaceDiagram:
    """Connect-sum a projective plane into every face carrying ``-1``."""
    d = build(words, signed.base, with_delta=False)
    eps = {i: signed.epsilon.get(i, 1) for i in range(d.face_count)}
    if any(v not in (1, -1) for v in eps.values()):
        raise MalformedSystemError("face signs must be +1 or -1")
    if set(signed.epsilon) - set(eps):
        raise MalformedSystemError("sign given for a face that does not exist")
    for g, ms in signed.base.matchings.items():
        for k in range(len(ms) - 1):
            if ms[k] == ms[k + 1]:
                faces = [i for i, f in enumerate(d.faces) if f.generator == g and f.level == k]
                if all(eps[i] == 1 for i in faces):
                    raise MalformedSystemError(
                        f"duplicated level ({letter_name(g)},{k}) needs a face signed -1")
    negative = [i for i, v in eps.items() if v < 0]
    components = []
    for ci, c in enumerate(d.components):
        count = sum(1 for i in negative if d.face_component[i] == ci)
        components.append(Component(c.chi - count, c.orientable and count == 0, c.boundary_count, c.words))
    return SurfaceDiagram(d.faces, d.vertex_count, d.edge_count, d.type_o_count,
                          d.euler_characteristic - len(negative), tuple(components), None,
                          d.edge_labels, d.face_component)


# ---------------------------------------------------------------------------
# Fast type-o counting and the symplectic sign


class TupleGeometry:
    """Precomputed boundary structure of a word tuple for fast type-o counts.

    Half-points are numbered per generator ``g`` with offset ``2 o_g``:
    ``2 o_g + s`` is the before side of slot ``s`` and ``2 o_g + 2 L_g + s``
    its after side.  ``stub[h]`` is the half-point joined to ``h`` by a
    boundary stub.
    """

    def __init__(self, words: Sequence[Word]):
        self.words = tuple(words)
        self.L = half_exponents(words)
        self.gens = sorted(self.L)
        self.table = interval_table(words)
        self.offset: dict[int, int] = {}
        total = 0
        for g in self.gens:
            self.offset[g] = total
            total += 2 * self.L[g]
        self.size = 2 * total
        self.negative = [False] * self.size
        self.slot_label = [0] * self.size
        for g in self.gens:
            for s, slot in enumerate(self.table[g]):
                for side in (0, 1):
                    h = self.half(g, s, side)
                    self.negative[h] = slot.sign < 0
                    self.slot_label[h] = s
        slot_of = {(slot.word, slot.pos): (g, s) for g in self.gens for s, slot in enumerate(self.table[g])}
        self.stub = [0] * self.size
        for wi, w in enumerate(words):
            for pos in range(len(w)):
                g, s = slot_of[(wi, pos)]
                g2, s2 = slot_of[(wi, (pos + 1) % len(w))]
                exit_half = self.half(g, s, 1 if self.table[g][s].sign > 0 else 0)
                entry_half = self.half(g2, s2, 0 if self.table[g2][s2].sign > 0 else 1)
                self.stub[exit_half] = entry_half
                self.stub[entry_half] = exit_half

    def half(self, g: int, s: int, side: int) -> int:
        return 2 * self.offset[g] + side * 2 * self.L[g] + s

    def arc_block(self, g: int, m0: Matching, mK: Matching) -> list[int]:
        base = 2 * self.offset[g]
        twoL = 2 * self.L[g]
        return [base + t for t in m0.partner] + [base + twoL + t for t in mK.partner]

    def arcs(self, outer0: Mapping[int, Matching], outerK: Mapping[int, Matching]) -> list[int]:
        out: list[int] = []
        for g in self.gens:
            out.extend(self.arc_block(g, outer0[g], outerK[g]))
        return out

    def count_cycles(self, arc: Sequence[int]) -> int:
        stub = self.stub
        seen = [False] * self.size
        cycles = 0
        for h in range(self.size):
            if seen[h]:
                continue
            cycles += 1
            while not seen[h]:
                seen[h] = True
                b = stub[h]
                seen[b] = True
                h = arc[b]
        return cycles

    def type_o_count(self, outer0: Mapping[int, Matching], outerK: Mapping[int, Matching]) -> int:
        return self.count_cycles(self.arcs(outer0, outerK))

    def disc_signs(self, arc: Sequence[int], seed: int = 0) -> list[int]:
        """Per type-o disc, the sign contribution for the compatible index
        assignment seeded with ``seed`` (0: index ``<= n``; 1: ``> n``).

        Across a stub the index is unchanged.  Across an arc the pairing
        ``<e_i, e_j>`` is nonzero only when ``j`` is the partner index of ``i``
        after the inverse-letter flips, so the index half flips exactly when
        both intervals have the same sign.  A disc contributes, per arc on it:
        the index sign at the origin if the origin interval is positive,
        ``-1`` if it is negative, and the index sign at the terminus if the
        terminus interval is negative.
        """
        stub, neg, label = self.stub, self.negative, self.slot_label
        seen = [False] * self.size
        out = []
        for h0 in range(self.size):
            if seen[h0]:
                continue
            bit = {h0: seed}
            sign = 1
            h = h0
            while True:
                seen[h] = True
                b = stub[h]
                seen[b] = True
                bit[b] = bit[h]
                a = arc[b]
                abit = bit[b] ^ (1 if neg[a] == neg[b] else 0)
                origin, terminus = (b, a) if label[b] < label[a] else (a, b)
                obit = bit[b] if origin == b else abit
                tbit = abit if terminus == a else bit[b]
                if neg[origin]:
                    sign = -sign
                elif obit:
                    sign = -sign
                if neg[terminus] and tbit:
                    sign = -sign
                if a == h0:
                    if abit != seed:
                        raise GluingError("odd number of index flips around a type-o disc")
                    break
                bit[a] = abit
                h = a
            out.append(sign)
        return out

    def delta(self, arc: Sequence[int]) -> int:
        sign = 1
        for s in self.disc_signs(arc):
            sign *= s
        return sign


def delta_sign(words: Sequence[Word], system: MatchingSystem) -> int:
    """The symplectic sign of a system with every ``kappa_x = 1``.

    Computed twice, once with every disc seeded below ``n`` and once with
    every disc seeded above; the per-disc contributions must agree.
    """
    if any(k != 1 for k in system.kappa.values()):
        raise MalformedSystemError("the symplectic sign is defined for kappa = 1 systems only")
    geo = TupleGeometry(words)
    arc = geo.arcs(*system.outer())
    low = geo.disc_signs(arc, 0)
    high = geo.disc_signs(arc, 1)
    if low != high:
        raise GluingError("disc sign depends on the seed")
    sign = 1
    for s in low:
        sign *= s
    return sign


def xi(words: Sequence[Word], system: MatchingSystem) -> int:
    """``(-1)^{#o} (-1)^L Δ(m) prod_x sign(σ_{m_x0}^-1 σ_{m_x1})``."""
    from .matchings import sigma_sign

    geo = TupleGeometry(words)
    arc = geo.arcs(*system.outer())
    count = geo.count_cycles(arc)
    sign = (-1) ** count * (-1) ** sum(geo.L.values()) * geo.delta(arc)
    for ms in system.matchings.values():
        sign *= sigma_sign(ms[0]) * sigma_sign(ms[1])
    return sign


def xi_check(words: Sequence[Word], system: MatchingSystem) -> bool:
    return xi(words, system) == (-1) ** len(words)


def iter_face_sign_choices(face_count: int, max_negative: int) -> Iterator[frozenset[int]]:
    for r in range(max_negative + 1):
        for subset in combinations(range(face_count), r):
            yield frozenset(subset)
