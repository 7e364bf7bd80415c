"""Permutation group algorithms: orbits, Schreier-Sims, block systems, block actions.

All algorithms are deterministic.  Base points are taken in increasing natural
order unless a base prefix is requested.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DegreeMismatch, NotABlockSystem, NotTransitive, PointOutOfRange
from .perm import Perm


@dataclass(frozen=True, eq=False)
class PermGroup:
    """Group generated by a list of permutations of one degree.

    Identity generators are dropped, so ``generators`` may be empty (trivial group).
    """

    degree: int
    generators: tuple[Perm, ...]

    def __init__(self, degree: int, generators: Iterable[Perm] = ()):
        gens = []
        seen = set()
        for g in generators:
            if g.degree != degree:
                raise DegreeMismatch(f"generator of degree {g.degree} in group of degree {degree}")
            if not g.is_identity() and g not in seen:
                seen.add(g)
                gens.append(g)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def of(cls, *gens: Perm) -> PermGroup:
        if not gens:
            raise ValueError("need at least one generator to infer the degree")
        return cls(gens[0].degree, gens)

    @cached_property
    def bsgs(self) -> BSGS:
        return build_bsgs(self)

    def order(self) -> int:
        return self.bsgs.order()

    def __contains__(self, g: Perm) -> bool:
        return self.bsgs.contains(g)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"PermGroup({self.degree}, [{gens}])"


# -- orbits ---------------------------------------------------------------


def orbit_transversal(G: PermGroup, point: int) -> dict[int, Perm]:
    """Map each orbit point w to a group element u with ``u(point) == w``.

    Breadth-first over the generators, so keys come out in discovery order.
    """
    if not 1 <= point <= G.degree:
        raise PointOutOfRange(f"point {point} outside 1..{G.degree}")
    trans = {point: Perm.identity(G.degree)}
    queue = [point]
    for w in queue:
        u = trans[w]
        for g in G.generators:
            v = g(w)
            if v not in trans:
                trans[v] = u * g
                queue.append(v)
    return trans


def orbit(G: PermGroup, point: int) -> frozenset[int]:
    return frozenset(orbit_transversal(G, point))


def orbits(G: PermGroup) -> list[frozenset[int]]:
    remaining = set(range(1, G.degree + 1))
    out = []
    for pt in range(1, G.degree + 1):
        if pt in remaining:
            orb = orbit(G, pt)
            remaining -= orb
            out.append(orb)
    return out


def is_transitive(G: PermGroup) -> bool:
    return len(orbit(G, 1)) == G.degree


# -- Schreier-Sims ----------------------------------------------------------


def _mul(a: tuple, b: tuple) -> tuple:
    # apply a, then b
    return tuple([b[i] for i in a])


def _inv(a: tuple) -> tuple:
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


class BSGS:
    """Base and strong generating set with explicit transversals.

    Internally everything is 0-based tuples; the public accessors are 1-based.
    ``levels[l]`` holds the generators of the stabilizer of the first ``l``
    base points, and ``transversals[l]`` maps each point of the basic orbit to
    a coset representative taking ``base[l]`` there.
    """

    def __init__(self, degree: int, base: list[int], level_gens: list[list[tuple]],
                 transversals: list[dict[int, tuple]], inv_transversals: list[dict[int, tuple]]):
        self.degree = degree
        self._base = base
        self._level_gens = level_gens
        self._trans = transversals
        self._inv = inv_transversals

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(b + 1 for b in self._base)

    @property
    def strong_generators(self) -> list[Perm]:
        out, seen = [], set()
        for gens in self._level_gens:
            for g in gens:
                if g not in seen:
                    seen.add(g)
                    out.append(Perm._raw(g))
        return out

    def basic_orbit(self, level: int) -> frozenset[int]:
        return frozenset(b + 1 for b in self._trans[level])

    def basic_orbit_lengths(self) -> list[int]:
        return [len(t) for t in self._trans]

    def transversal_element(self, level: int, point: int) -> Perm:
        return Perm._raw(self._trans[level][point - 1])

    def stabilizer_generators(self, level: int) -> list[Perm]:
        """Generators of the pointwise stabilizer of ``base[:level]``."""
        if level >= len(self._base):
            return []
        return [Perm._raw(g) for g in self._level_gens[level]]

    def order(self, from_level: int = 0) -> int:
        return math.prod(len(t) for t in self._trans[from_level:])

    def sift(self, g: Perm) -> tuple[Perm, int]:
        if g.degree != self.degree:
            raise DegreeMismatch(f"degree {g.degree} does not match {self.degree}")
        h, lvl = _sift(g._img, 0, self._base, self._trans, self._inv)
        return Perm._raw(h), lvl

    def contains(self, g: Perm) -> bool:
        h, lvl = self.sift(g)
        return lvl == len(self._base) and h.is_identity()


def _sift(g, start, base, trans, inv):
    for lvl in range(start, len(base)):
        b = g[base[lvl]]
        u = inv[lvl].get(b)
        if u is None:
            return g, lvl
        g = _mul(g, u)
    return g, len(base)


def build_bsgs(G: PermGroup, base_prefix: Sequence[int] = ()) -> BSGS:
    """Deterministic incremental Schreier-Sims.

    ``base_prefix`` (1-based) forces the first base points; further points are
    appended in increasing order as needed.
    """
    n = G.degree
    ident = tuple(range(n))
    gens = [g._img for g in G.generators]
    base = [b - 1 for b in base_prefix]
    if len(set(base)) != len(base) or any(not 0 <= b < n for b in base):
        raise ValueError("base prefix must be distinct points in range")
    for g in gens:
        if all(g[b] == b for b in base):
            base.append(next(i for i in range(n) if g[i] != i))

    level_gens: list[list[tuple]] = [[] for _ in base]
    for g in gens:
        depth = next(lvl for lvl, b in enumerate(base) if g[b] != b)
        for lvl in range(depth + 1):
            level_gens[lvl].append(g)

    trans: list[dict[int, tuple]] = []
    inv: list[dict[int, tuple]] = []
    orbit_lists: list[list[int]] = []

    def extend_orbit(lvl):
        # grow the orbit with the level's current generators, keeping old coset reps
        tr, iv, lst = trans[lvl], inv[lvl], orbit_lists[lvl]
        gs = level_gens[lvl]
        k = 0
        # re-scan old points too: new generators may move them out of the orbit
        queue = list(lst)
        while k < len(queue):
            pt = queue[k]
            k += 1
            u = tr[pt]
            for s in gs:
                q = s[pt]
                if q not in tr:
                    v = _mul(u, s)
                    tr[q] = v
                    iv[q] = _inv(v)
                    lst.append(q)
                    queue.append(q)

    def add_level(b):
        trans.append({b: ident})
        inv.append({b: ident})
        orbit_lists.append([b])

    for b in base:
        add_level(b)
    for lvl in range(len(base)):
        extend_orbit(lvl)

    checked: list[set] = [set() for _ in base]
    i = len(base) - 1
    while i >= 0:
        jumped = False
        tr, iv, gs = trans[i], inv[i], level_gens[i]
        for beta in list(orbit_lists[i]):
            u = tr[beta]
            for si, s in enumerate(gs):
                key = (beta, si)
                if key in checked[i]:
                    continue
                checked[i].add(key)
                us = _mul(u, s)
                img = us[base[i]]
                if us == tr[img]:
                    continue
                h, j = _sift(_mul(us, iv[img]), i + 1, base, trans, inv)
                if j == len(base) and h == ident:
                    continue
                if j == len(base):
                    base.append(next(p for p in range(n) if h[p] != p))
                    level_gens.append([])
                    checked.append(set())
                    add_level(base[-1])
                for lvl in range(i + 1, j + 1):
                    level_gens[lvl].append(h)
                    extend_orbit(lvl)
                i = j
                jumped = True
                break
            if jumped:
                break
        if not jumped:
            i -= 1

    return BSGS(n, base, level_gens, trans, inv)


def group_order(b: BSGS | PermGroup) -> int:
    if isinstance(b, PermGroup):
        b = b.bsgs
    return b.order()


def contains(b: BSGS | PermGroup, g: Perm) -> bool:
    if isinstance(b, PermGroup):
        b = b.bsgs
    return b.contains(g)


# -- block systems -----------------------------------------------------------


@dataclass(frozen=True)
class BlockSystem:
    """Partition of {1..degree} into equal-size cells, ordered by minimum point.

    Cells are indexed 1..len(blocks) at the interface.
    """

    degree: int
    blocks: tuple[tuple[int, ...], ...]
    block_of: dict[int, int] = field(compare=False, repr=False)

    def __init__(self, degree: int, cells: Iterable[Iterable[int]]):
        cells = sorted(tuple(sorted(c)) for c in cells)
        block_of = {}
        for idx, cell in enumerate(cells, start=1):
            if not cell:
                raise NotABlockSystem("empty cell")
            for pt in cell:
                if not 1 <= pt <= degree:
                    raise PointOutOfRange(f"point {pt} outside 1..{degree}")
                if pt in block_of:
                    raise NotABlockSystem(f"point {pt} lies in two cells")
                block_of[pt] = idx
        if len(block_of) != degree:
            raise NotABlockSystem("cells do not cover every point")
        if len({len(c) for c in cells}) != 1:
            raise NotABlockSystem("cells have different sizes")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "blocks", tuple(cells))
        object.__setattr__(self, "block_of", block_of)

    @property
    def cell_size(self) -> int:
        return len(self.blocks[0])

    def __len__(self):
        return len(self.blocks)

    def is_trivial(self) -> bool:
        return len(self.blocks) == 1 or self.cell_size == 1

    def induced(self, g: Perm) -> Perm:
        """Permutation of cell indices induced by ``g``; raises if cells are not mapped to cells."""
        images = []
        for cell in self.blocks:
            targets = {self.block_of[g(pt)] for pt in cell}
            if len(targets) != 1:
                raise NotABlockSystem(f"{g} splits cell {cell}")
            images.append(targets.pop())
        try:
            return Perm(images)
        except ValueError:
            raise NotABlockSystem(f"{g} does not permute the cells") from None


def congruence_closure(G: PermGroup, merged: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    """Finest G-invariant partition in which each given set lies inside one class.

    Union-find refinement; works for intransitive groups too.
    """
    n = G.degree
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    queue = []

    def union(a, b):
        a, b = find(a), find(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        parent[b] = a
        queue.append((a, b))

    for s in merged:
        s = [pt - 1 for pt in s]
        for pt in s[1:]:
            union(s[0], pt)
    gens = [g._img for g in G.generators]
    k = 0
    while k < len(queue):
        a, b = queue[k]
        k += 1
        for g in gens:
            union(g[a], g[b])
    classes: dict[int, set[int]] = {}
    for pt in range(n):
        classes.setdefault(find(pt), set()).add(pt + 1)
    return sorted((frozenset(c) for c in classes.values()), key=min)


def is_block(G: PermGroup, cell: Iterable[int]) -> bool:
    """Whether ``cell`` is a block: every group element maps it onto itself or off it."""
    cell = frozenset(cell)
    for c in congruence_closure(G, [cell]):
        if min(cell) in c:
            return c == cell
    raise AssertionError("unreachable")


def minimal_block(G: PermGroup, a: int, b: int) -> BlockSystem:
    if a == b:
        raise ValueError("seed points must differ")
    if not is_transitive(G):
        raise NotTransitive("minimal_block needs a transitive group")
    return BlockSystem(G.degree, congruence_closure(G, [(a, b)]))


def is_primitive(G: PermGroup) -> bool:
    if not is_transitive(G):
        raise NotTransitive("primitivity is defined here for transitive groups")
    return all(len(minimal_block(G, 1, b)) == 1 for b in range(2, G.degree + 1))


def verify_blocks(G: PermGroup, S: BlockSystem) -> bool:
    """True iff every generator maps every cell onto a cell."""
    if S.degree != G.degree:
        raise DegreeMismatch("block system and group have different degrees")
    try:
        for g in G.generators:
            S.induced(g)
    except NotABlockSystem:
        return False
    return True


@dataclass(frozen=True)
class BlockActionData:
    """Action on a block system together with its kernel and cell stabilizers.

    ``block_stabilizer_schreier_gens[i]`` generates the setwise stabilizer of
    cell ``i + 1``.  Orders come from one stabilizer chain whose base starts
    with the cells, so ``group_order == quotient_order * kernel_order``.
    """

    blocks: BlockSystem
    quotient: PermGroup
    kernel: PermGroup
    block_stabilizer_schreier_gens: tuple[tuple[Perm, ...], ...]
    group_order: int
    quotient_order: int
    kernel_order: int


def block_action(G: PermGroup, S: BlockSystem) -> BlockActionData:
    if not verify_blocks(G, S):
        raise NotABlockSystem("not a block system for this group")
    n, k = G.degree, len(S)
    quotient = PermGroup(k, [S.induced(g) for g in G.generators])

    # act on points and cells simultaneously; a base starting with the cells
    # has the kernel as the stabilizer after the first k levels
    extended = PermGroup(n + k, [
        Perm._raw(g._img + tuple(n + v for v in S.induced(g)._img)) for g in G.generators
    ])
    chain = build_bsgs(extended, base_prefix=range(n + 1, n + k + 1))
    kernel = PermGroup(n, [Perm._raw(g._img[:n]) for g in chain.stabilizer_generators(k)])

    induced = [S.induced(g) for g in G.generators]
    stabs = tuple(tuple(_cell_stabilizer_gens(G, induced, cell)) for cell in range(1, k + 1))
    return BlockActionData(
        blocks=S,
        quotient=quotient,
        kernel=kernel,
        block_stabilizer_schreier_gens=stabs,
        group_order=chain.order(),
        quotient_order=math.prod(chain.basic_orbit_lengths()[:k]),
        kernel_order=chain.order(k),
    )


def _cell_stabilizer_gens(G: PermGroup, induced: list[Perm], cell: int) -> list[Perm]:
    # Schreier's lemma on the orbit of the cell under the induced action
    pairs = list(zip(G.generators, induced))
    trans = {cell: Perm.identity(G.degree)}
    queue = [cell]
    for c in queue:
        for g, qg in pairs:
            d = qg(c)
            if d not in trans:
                trans[d] = trans[c] * g
                queue.append(d)
    out, seen = [], set()
    for c in queue:
        for g, qg in pairs:
            h = trans[c] * g * trans[qg(c)].inverse()
            if not h.is_identity() and h not in seen:
                seen.add(h)
                out.append(h)
    return out


# -- recognition -------------------------------------------------------------


def is_alternating(G: PermGroup) -> bool:
    n = G.degree
    if n < 3:
        return False
    if not all(g.is_even() for g in G.generators):
        return False
    return G.order() == math.factorial(n) // 2


def is_symmetric(G: PermGroup) -> bool:
    return G.order() == math.factorial(G.degree)


def is_elementary_abelian(G: PermGroup, p: int) -> bool:
    gens = G.generators
    for i, g in enumerate(gens):
        if g.order() != p:
            return False
        for h in gens[i + 1:]:
            if g * h != h * g:
                return False
    order = G.order()
    while order % p == 0:
        order //= p
    return order == 1
