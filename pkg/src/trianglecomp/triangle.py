"""Permutation representations of triangle groups <x, y | x^p = y^q = (xy)^r = 1>.

A representation is a pair of permutations (the images of x and y) whose
orders divide p and q, with the order of their product dividing r.  Its
domain is ``{offset+1, ..., degree}``; translated copies keep the lower
points fixed so they can be multiplied into a larger permutation directly.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeMismatch,
    DegreeTooLarge,
    DomainMismatch,
    NotFound,
    NotTransitive,
    PointOutOfRange,
)
from .group import PermGroup, is_alternating
from .perm import Perm

SEARCH_DEGREE_CAP = 9


@dataclass(frozen=True)
class TrianglePresentation:
    p: int
    q: int
    r: int

    def __post_init__(self):
        if min(self.p, self.q, self.r) < 2:
            raise ValueError(f"exponents must be at least 2, got {tuple(self)}")

    def __iter__(self):
        return iter((self.p, self.q, self.r))

    def __str__(self):
        return f"Δ({self.p},{self.q},{self.r})"


@dataclass(frozen=True)
class Handle:
    """Ordered pair of x-fixed points with (xy)^k taking a to b."""

    a: int
    b: int
    k: int

    def points(self) -> frozenset[int]:
        return frozenset((self.a, self.b))

    def disjoint_from(self, other: Handle) -> bool:
        return not self.points() & other.points()

    def shifted(self, offset: int) -> Handle:
        return Handle(self.a + offset, self.b + offset, self.k)


@dataclass(frozen=True)
class Representation:
    presentation: TrianglePresentation
    x: Perm
    y: Perm
    offset: int = 0

    def __post_init__(self):
        if self.x.degree != self.y.degree:
            raise DegreeMismatch("x and y images have different degrees")
        if not 0 <= self.offset < self.x.degree:
            raise ValueError("offset must leave a nonempty domain")
        if self.offset and not all(
            self.x(i) == i and self.y(i) == i for i in range(1, self.offset + 1)
        ):
            raise ValueError("points below the offset must be fixed")

    @property
    def degree(self) -> int:
        """Size of the domain (not the ambient permutation degree)."""
        return self.x.degree - self.offset

    @property
    def points(self) -> range:
        return range(self.offset + 1, self.x.degree + 1)

    @property
    def xy(self) -> Perm:
        return self.x * self.y

    def image_group(self) -> PermGroup:
        """The image group on {1..degree}, relabelled if translated."""
        pts = list(self.points)
        return PermGroup(self.degree, [self.x.restrict(pts), self.y.restrict(pts)])

    def is_transitive(self) -> bool:
        start = self.offset + 1
        seen = {start}
        stack = [start]
        while stack:
            w = stack.pop()
            for g in (self.x, self.y):
                v = g(w)
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.degree

    def local(self) -> Representation:
        """Same representation relabelled onto {1..degree}."""
        if not self.offset:
            return self
        pts = list(self.points)
        return Representation(self.presentation, self.x.restrict(pts), self.y.restrict(pts))


@dataclass(frozen=True)
class RelationReport:
    ok: bool
    exact_orders: tuple[int, int, int]
    strict_ok: bool

    def __bool__(self):
        return self.ok


def check_relations(rep: Representation) -> RelationReport:
    """Divisibility check of the three relations; ``strict_ok`` demands exact orders."""
    p, q, r = rep.presentation
    orders = (rep.x.order(), rep.y.order(), rep.xy.order())
    ok = p % orders[0] == 0 and q % orders[1] == 0 and r % orders[2] == 0
    return RelationReport(ok, orders, orders == (p, q, r))


def find_handles(rep: Representation, k: int) -> list[Handle]:
    if k < 1:
        raise ValueError("k must be positive")
    fixed = sorted(rep.x.fixed_points() & set(rep.points))
    zk = rep.xy ** k
    fixed_set = set(fixed)
    out = []
    for a in fixed:
        b = zk(a)
        if b != a and b in fixed_set:
            out.append(Handle(a, b, k))
    return out


def is_handle(rep: Representation, h: Handle) -> bool:
    if h.a == h.b or h.k < 1:
        return False
    if h.a not in rep.points or h.b not in rep.points:
        return False
    return rep.x(h.a) == h.a and rep.x(h.b) == h.b and (rep.xy ** h.k)(h.a) == h.b


def handle_arc(rep: Representation, h: Handle) -> tuple[int, ...]:
    """Points visited by xy going from a to b, both ends included (shortest span)."""
    cyc = rep.xy.cycle_of(h.a)
    span = h.k % len(cyc)
    return cyc[: span + 1]


def arcs_cross(rep: Representation, h1: Handle, h2: Handle) -> bool:
    """Whether the xy-arcs of two handles share a point."""
    return bool(set(handle_arc(rep, h1)) & set(handle_arc(rep, h2)))


def select_disjoint_handles(rep: Representation, k: int, count: int) -> list[Handle] | None:
    """First ``count`` k-handles (in scan order) with pairwise disjoint xy-arcs."""
    handles = find_handles(rep, k)
    for combo in itertools.combinations(handles, count):
        if all(not arcs_cross(rep, h1, h2) for h1, h2 in itertools.combinations(combo, 2)):
            return list(combo)
    return None


def translate(rep: Representation, offset: int, total_degree: int | None = None) -> Representation:
    """Relabel point i as i + offset.  ``total_degree`` pads with fixed points above."""
    if offset < 0:
        raise ValueError("offset must be nonnegative")
    local = rep.local()
    n = local.degree + offset
    if total_degree is not None:
        n = max(n, total_degree)
    return Representation(
        rep.presentation, local.x.shift(offset, n), local.y.shift(offset, n), offset=offset
    )


def is_equivalence(rep1: Representation, rep2: Representation, f: Mapping[int, int]) -> bool:
    """Check f(w^x) = f(w)^x and f(w^y) = f(w)^y at every point."""
    if set(f) != set(rep1.points) or set(f.values()) != set(rep2.points):
        raise DomainMismatch("f is not a bijection between the two domains")
    if len(set(f.values())) != len(f):
        raise DomainMismatch("f is not injective")
    for w in rep1.points:
        if f[rep1.x(w)] != rep2.x(f[w]) or f[rep1.y(w)] != rep2.y(f[w]):
            return False
    return True


def centralizer_elements(rep: Representation) -> list[Perm]:
    """All permutations of the domain commuting with x and y (transitive case).

    A centralizing element is determined by the image of the first point, so
    each candidate image is propagated along a spanning tree and checked.
    """
    if not rep.is_transitive():
        raise NotTransitive("centralizer computation needs a transitive representation")
    start = rep.offset + 1
    gens = (rep.x, rep.y)
    tree = [(start, None, None)]
    seen = {start}
    for w, _, _ in tree:
        for gi, g in enumerate(gens):
            v = g(w)
            if v not in seen:
                seen.add(v)
                tree.append((v, w, gi))
    out = []
    n = rep.x.degree
    for target in rep.points:
        h = {start: target}
        for v, w, gi in tree[1:]:
            h[v] = gens[gi](h[w])
        if len(set(h.values())) != len(h):
            continue
        if all(h[g(w)] == g(h[w]) for w in rep.points for g in gens):
            images = list(range(1, n + 1))
            for w, v in h.items():
                images[w - 1] = v
            out.append(Perm(images))
    return sorted(out)


# -- exhaustive search -------------------------------------------------------


def _order_divides(n: int, e: int) -> list[tuple[int, ...]]:
    """All 0-based permutations of n points whose order divides e, lexicographic."""
    lengths = {d for d in range(1, n + 1) if e % d == 0}
    out = []
    img = [-1] * n

    def fill(i):
        while i < n and img[i] >= 0:
            i += 1
        if i == n:
            out.append(tuple(img))
            return
        free = [j for j in range(i + 1, n) if img[j] < 0]
        if 1 in lengths:
            img[i] = i
            fill(i + 1)
            img[i] = -1
        for ell in sorted(lengths - {1}):
            if ell - 1 > len(free):
                break
            for rest in itertools.permutations(free, ell - 1):
                cyc = (i, *rest)
                for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                    img[a] = b
                fill(i + 1)
                for a in cyc:
                    img[a] = -1

    fill(0)
    out.sort()
    return out


def search_backtrack(
    pres: TrianglePresentation,
    degree: int,
    require_transitive: bool = True,
    require_handle_k: int | None = None,
    max_solutions: int | None = None,
    strict_orders: bool = False,
    cap: int = SEARCH_DEGREE_CAP,
) -> list[Representation]:
    """Enumerate every (x, y) pair satisfying the relations, in lexicographic order.

    x runs over permutations whose order divides p; y is built point by point
    with pruning on closed or overlong cycles of y and of xy.
    """
    if degree > cap:
        raise DegreeTooLarge(f"degree {degree} exceeds search cap {cap}")
    if degree < 1:
        raise ValueError("degree must be positive")
    p, q, r = pres
    n = degree
    q_ok = {d for d in range(1, n + 1) if q % d == 0}
    r_ok = {d for d in range(1, n + 1) if r % d == 0}
    max_q, max_r = max(q_ok), max(r_ok)
    results = []

    for x in _order_divides(n, p):
        y = [-1] * n
        y_inv = [-1] * n
        # z = xy: z(i) = y(x(i)); z is defined at i once y(x(i)) is set
        x_inv = [0] * n
        for i, v in enumerate(x):
            x_inv[v] = i

        def chain_ok(perm_img, start, ok_lengths, max_len):
            # a closed cycle must have an allowed length; an open path must still fit
            length = 1
            j = perm_img(start)
            while j is not None and j != start:
                length += 1
                if length > max_len:
                    return False
                j = perm_img(j)
            return j is None or length in ok_lengths

        def y_at(i):
            v = y[i]
            return None if v < 0 else v

        def z_at(i):
            v = y[x[i]]
            return None if v < 0 else v

        def rec(i):
            if max_solutions is not None and len(results) >= max_solutions:
                return
            if i == n:
                xp = Perm._raw(tuple(x))
                yp = Perm._raw(tuple(y))
                rep = Representation(pres, xp, yp)
                if strict_orders and not check_relations(rep).strict_ok:
                    return
                if require_transitive and not rep.is_transitive():
                    return
                if require_handle_k is not None and not find_handles(rep, require_handle_k):
                    return
                results.append(rep)
                return
            for v in range(n):
                if y_inv[v] >= 0:
                    continue
                y[i] = v
                y_inv[v] = i
                if chain_ok(y_at, i, q_ok, max_q) and chain_ok(z_at, x_inv[i], r_ok, max_r):
                    rec(i + 1)
                y[i] = -1
                y_inv[v] = -1
                if max_solutions is not None and len(results) >= max_solutions:
                    return

        rec(0)
        if max_solutions is not None and len(results) >= max_solutions:
            break
    return results


# -- randomized search for alternating images ----------------------------------


def _cycle_types(n: int, e: int, min_fixed: int, require_even: bool) -> list[tuple[int, ...]]:
    """Partitions of n into parts dividing e (descending), non-identity."""
    parts = sorted((d for d in range(2, n + 1) if e % d == 0), reverse=True)
    out = []

    def rec(remaining, max_part, acc):
        if acc and remaining >= min_fixed:
            if not require_even or sum(d - 1 for d in acc) % 2 == 0:
                out.append(tuple(acc) + (1,) * remaining)
        for d in parts:
            if d <= min(remaining, max_part):
                rec(remaining - d, d, acc + [d])

    rec(n, n, [])
    return sorted(set(out))


def _min_cycles(n: int, e: int) -> int:
    """Fewest cycles a permutation of n points with order dividing e can have."""
    parts = [d for d in range(1, n + 1) if e % d == 0]
    best = [0] + [math.inf] * n
    for m in range(1, n + 1):
        best[m] = min(best[m - d] + 1 for d in parts if d <= m)
    return best[n]


def _random_of_type(rng: np.random.Generator, n: int, ctype: Sequence[int]) -> Perm:
    pts = [int(v) for v in rng.permutation(n)]
    img = list(range(n))
    pos = 0
    for ell in ctype:
        cyc = pts[pos: pos + ell]
        pos += ell
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a] = b
    return Perm._raw(tuple(img))


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream; identical draws for identical seeds on every platform."""
    return np.random.Generator(np.random.Philox(seed))


def search_alternating(
    pres: TrianglePresentation,
    degree: int,
    needed_handles: int,
    k: int,
    seed: int,
    max_attempts: int = 20000,
) -> Representation:
    """Random search for a representation onto A_degree with disjoint k-handles.

    x is drawn from even permutations of order dividing p with at least
    ``2 * needed_handles`` fixed points, y from even permutations of order
    dividing q.  Cycle-type pairs that cannot give a transitive action (by the
    Riemann-Hurwitz count) are skipped.  Raises NotFound when the budget runs
    out, which says nothing about existence.
    """
    if degree < 5:
        raise ValueError("degree must be at least 5")
    if needed_handles not in (1, 2):
        raise ValueError("needed_handles must be 1 or 2")
    p, q, r = pres
    n = degree
    x_types = _cycle_types(n, p, 2 * needed_handles, True)
    y_types = _cycle_types(n, q, 0, True)
    min_z_cycles = _min_cycles(n, r)
    pairs = [
        (tx, ty) for tx in x_types for ty in y_types
        if (n - len(tx)) + (n - len(ty)) + (n - min_z_cycles) >= 2 * (n - 1)
    ]
    if not pairs:
        raise NotFound(f"no admissible cycle types for {pres} in degree {n}", attempts=0)
    rng = make_rng(seed)
    for attempt in range(1, max_attempts + 1):
        tx, ty = pairs[int(rng.integers(len(pairs)))]
        x = _random_of_type(rng, n, tx)
        y = _random_of_type(rng, n, ty)
        if r % (x * y).order():
            continue
        rep = Representation(pres, x, y)
        if not rep.is_transitive():
            continue
        if select_disjoint_handles(rep, k, needed_handles) is None:
            continue
        if is_alternating(rep.image_group()):
            return rep
    raise NotFound(
        f"no representation of {pres} onto A_{n} with {needed_handles} "
        f"disjoint {k}-handle(s) within {max_attempts} attempts",
        attempts=max_attempts,
    )


def check_point(rep: Representation, point: int) -> None:
    if point not in rep.points:
        raise PointOutOfRange(f"point {point} not in the domain {rep.points}")
