"""Handle splicing: composing representations into larger ones.

All four constructions share one mechanism.  The images of y are left alone
and the image of x is multiplied by cycles ``(a_1, ..., a_p)(b_p, ..., b_1)``
running over handle points.  Those points are fixed by x, so the extra cycles
commute with it.

Copy ``i`` of a degree-``deg`` diagram occupies ``(i-1)*deg + 1 .. i*deg``.

Splicing preserves the relations only when the handles' xy-arcs (the
stretch of an xy-cycle from a to b) are pairwise disjoint and every handle
in one splice spans the same number of steps.  Interleaved arcs can give
xy-cycles whose length does not divide r.  Both conditions are checked up
front and reported as ``CrossingHandles``.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from .errors import (
    BadCycleType,
    BadIdentityFirst,
    BlocksNotPartition,
    CompositionError,
    CrossingHandles,
    DegreeMismatch,
    DiagramUncovered,
    HandleClash,
    HandlesNotDisjoint,
    MixedK,
    NotAHandle,
    NotCommuting,
    NotTransitiveAlphaBeta,
    NotTransitiveInput,
    PointsNotDistinct,
)
from .group import BlockSystem, PermGroup, is_block, is_transitive, verify_blocks
from .perm import Perm
from .triangle import (
    Handle,
    RelationReport,
    Representation,
    check_relations,
    is_handle,
    translate,
)


@dataclass(frozen=True)
class HandleAssignment:
    """``entries[i] = (j, handle)``: the i-th splice point is ``handle`` of diagram j (1-based)."""

    entries: tuple[tuple[int, Handle], ...]

    def __init__(self, entries: Sequence[tuple[int, Handle]]):
        object.__setattr__(self, "entries", tuple((int(j), h) for j, h in entries))

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class Splice:
    """One pair of spliced cycles, ``(a_1..a_p)(b_p..b_1)``, in global numbering."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def cycles(self) -> list[tuple[int, ...]]:
        return [self.a, tuple(reversed(self.b))]


@dataclass(frozen=True)
class LawReport:
    """Runtime re-check of what a valid composition guarantees."""

    relations: RelationReport
    transitive: bool
    transitivity_asserted: bool
    cycle_law_violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (
            self.relations.ok
            and (self.transitive or not self.transitivity_asserted)
            and not self.cycle_law_violations
        )


@dataclass(frozen=True)
class Composition:
    """A composed representation with its block system and construction record.

    ``construction`` is one of ``general``, ``clone``, ``centralizer``,
    ``alphabeta``.  ``base_xy`` is the product of the input xy images before
    splicing, in global numbering.
    """

    result: Representation
    blocks: BlockSystem | None
    construction: str
    provenance: dict[str, Any]
    splices: tuple[Splice, ...]
    base_xy: Perm
    law: LawReport = field(default=None)

    @property
    def phi_x(self) -> Perm:
        return self.result.x

    @property
    def phi_y(self) -> Perm:
        return self.result.y


# -- shared machinery ----------------------------------------------------------


def _disjoint_union(reps: Sequence[Representation]) -> tuple[Perm, Perm, list[int]]:
    locals_ = [rep.local() for rep in reps]
    total = sum(rep.degree for rep in locals_)
    offsets = list(itertools.accumulate([0] + [rep.degree for rep in locals_[:-1]]))
    x = Perm.identity(total)
    y = Perm.identity(total)
    for rep, off in zip(locals_, offsets):
        moved = translate(rep, off, total)
        x = x * moved.x
        y = y * moved.y
    return x, y, offsets


def _check_geometry(z: Perm, splices: Sequence[Splice], k: int) -> None:
    """Reject interleaved handle arcs and splices whose arcs have unequal spans."""
    arcs = []
    for sp in splices:
        spans = set()
        for a, b in zip(sp.a, sp.b):
            cyc = z.cycle_of(a)
            span = k % len(cyc)
            if span == 0 or cyc[span] != b:
                raise NotAHandle(f"({a},{b}) is not a {k}-handle of the unspliced diagram")
            spans.add(span)
            arcs.append(((a, b), frozenset(cyc[: span + 1])))
        if len(spans) > 1:
            raise CrossingHandles(f"handles in one splice span different step counts {sorted(spans)}")
    for (h1, arc1), (h2, arc2) in itertools.combinations(arcs, 2):
        if arc1 & arc2:
            raise CrossingHandles(f"xy-arcs of handles {h1} and {h2} overlap")


def _splice_x(x: Perm, splices: Sequence[Splice]) -> Perm:
    cycles = [c for sp in splices for c in sp.cycles()]
    return x * Perm.from_cycles(cycles, x.degree)


def cycle_law_violations(phi_xy: Perm, base_xy: Perm, splices: Sequence[Splice], r: int) -> list[str]:
    """Check the cycle-length law for spliced products.

    The phi(xy)-cycle through a spliced ``a_i`` must have the same length as the
    unspliced xy-cycle through ``a_i`` and must contain ``b_{i+1}``; cycles
    meeting no spliced point must be xy-cycles of the inputs.
    """
    problems = []
    spliced = set()
    for sp in splices:
        spliced.update(sp.a)
        spliced.update(sp.b)
    for sp in splices:
        p = len(sp.a)
        for i in range(p):
            a = sp.a[i]
            cyc = phi_xy.cycle_of(a)
            s = len(base_xy.cycle_of(a))
            if len(cyc) != s:
                problems.append(f"cycle through {a} has length {len(cyc)}, expected {s}")
            if sp.b[(i + 1) % p] not in cyc:
                problems.append(f"cycle through {a} misses {sp.b[(i + 1) % p]}")
            if r % len(cyc):
                problems.append(f"cycle through {a} has length {len(cyc)} not dividing r={r}")
    for cyc in phi_xy.cycles():
        if not spliced & set(cyc) and base_xy.cycle_of(cyc[0]) != cyc:
            problems.append(f"unspliced cycle {cyc} is not an input xy-cycle")
    return problems


def _law(result: Representation, base_xy: Perm, splices, transitivity_asserted: bool) -> LawReport:
    return LawReport(
        relations=check_relations(result),
        transitive=result.is_transitive(),
        transitivity_asserted=transitivity_asserted,
        cycle_law_violations=tuple(
            cycle_law_violations(result.xy, base_xy, splices, result.presentation.r)
        ),
    )


def _common_presentation(reps: Sequence[Representation]):
    pres = reps[0].presentation
    if any(rep.presentation != pres for rep in reps):
        raise CompositionError("all diagrams must share one presentation")
    return pres


def _copy_blocks(deg: int, copies: int) -> BlockSystem:
    return BlockSystem(deg * copies, [[i * deg + w for i in range(copies)] for w in range(1, deg + 1)])


# -- the four constructions ----------------------------------------------------------


def compose_general(reps: Sequence[Representation], assignment: HandleAssignment) -> Composition:
    """Splice p handles taken from t <= p transitive diagrams into one transitive diagram.

    Handles are given in each diagram's own point labels.  The resulting x image
    is the product of the input x images times ``(a_1,...,a_p)(b_p,...,b_1)``.
    """
    if not reps:
        raise CompositionError("need at least one diagram")
    pres = _common_presentation(reps)
    p, t = pres.p, len(reps)
    entries = assignment.entries
    if len(entries) != p:
        raise CompositionError(f"need exactly p={p} handles, got {len(entries)}")
    if t > p:
        raise CompositionError(f"at most p={p} diagrams can be composed, got {t}")
    used = {j for j, _ in entries}
    if not used <= set(range(1, t + 1)):
        raise CompositionError(f"diagram index out of range 1..{t}")
    if used != set(range(1, t + 1)):
        missing = sorted(set(range(1, t + 1)) - used)
        raise DiagramUncovered(f"diagrams {missing} receive no handle")
    ks = {h.k for _, h in entries}
    if len(ks) > 1:
        raise MixedK(f"handles use different k: {sorted(ks)}")
    k = ks.pop()
    for j, h in entries:
        if not is_handle(reps[j - 1], h):
            raise NotAHandle(f"{h} is not a handle of diagram {j}")
    for (j1, h1), (j2, h2) in itertools.combinations(entries, 2):
        if j1 == j2 and not h1.disjoint_from(h2):
            raise HandleClash(f"handles {h1} and {h2} of diagram {j1} share a point")
    for j, rep in enumerate(reps, start=1):
        if not rep.is_transitive():
            raise NotTransitiveInput(f"diagram {j} is not transitive")

    x, y, offsets = _disjoint_union(reps)
    local_off = [rep.offset for rep in reps]
    a_pts, b_pts = [], []
    for j, h in entries:
        shift = offsets[j - 1] - local_off[j - 1]
        a_pts.append(h.a + shift)
        b_pts.append(h.b + shift)
    splices = (Splice(tuple(a_pts), tuple(b_pts)),)
    base_xy = x * y
    _check_geometry(base_xy, splices, k)
    result = Representation(pres, _splice_x(x, splices), y)
    return Composition(
        result=result,
        blocks=None,
        construction="general",
        provenance={"reps": tuple(reps), "assignment": assignment, "offsets": tuple(offsets)},
        splices=splices,
        base_xy=base_xy,
        law=_law(result, base_xy, splices, transitivity_asserted=True),
    )


def compose_clone_p(rep: Representation, handle: Handle) -> Composition:
    """Splice p relabelled copies of one diagram along copies of a single handle.

    The sets ``B_w = {w, deg+w, ..., (p-1)deg+w}`` form a block system.
    """
    rep = rep.local() if rep.offset else rep
    p = rep.presentation.p
    general = compose_general(
        [rep] * p, HandleAssignment([(i, handle) for i in range(1, p + 1)])
    )
    blocks = _copy_blocks(rep.degree, p)
    if not verify_blocks(general.result.image_group(), blocks):
        raise AssertionError("copy blocks are not preserved; construction is broken")
    return Composition(
        result=general.result,
        blocks=blocks,
        construction="clone",
        provenance={"rep": rep, "handle": handle, "copies": p},
        splices=general.splices,
        base_xy=general.base_xy,
        law=general.law,
    )


def compose_centralizer(rep: Representation, handle: Handle, hs: Sequence[Perm]) -> Composition:
    """Splice the images ``h_i(a), h_i(b)`` of one handle under centralizing permutations.

    Works on the original point set.  The candidate blocks are
    ``B_w = {h_1(w), ..., h_p(w)}``, and they must partition the domain.  The
    provenance records whether they are blocks for the original image group and
    for the composed one.  These two flags always agree.
    """
    rep = rep.local() if rep.offset else rep
    pres = rep.presentation
    p, n = pres.p, rep.degree
    hs = list(hs)
    if len(hs) != p:
        raise CompositionError(f"need p={p} permutations, got {len(hs)}")
    if any(h.degree != n for h in hs):
        raise DegreeMismatch("centralizing permutations must act on the diagram's points")
    if not hs[0].is_identity():
        raise BadIdentityFirst("h_1 must be the identity")
    for i, h in enumerate(hs, start=1):
        if h * rep.x != rep.x * h or h * rep.y != rep.y * h:
            raise NotCommuting(f"h_{i} = {h} does not commute with the representation")
    if not is_handle(rep, handle):
        raise NotAHandle(f"{handle} is not a handle")
    a_pts = tuple(h(handle.a) for h in hs)
    b_pts = tuple(h(handle.b) for h in hs)
    if len(set(a_pts + b_pts)) != 2 * p:
        raise PointsNotDistinct(f"handle images {a_pts}, {b_pts} are not all distinct")
    cells = {frozenset(h(w) for h in hs) for w in range(1, n + 1)}
    if sum(len(c) for c in cells) != n or any(len(c) != p for c in cells):
        # overlapping B_w break the block equivalence the construction relies on
        raise BlocksNotPartition("the sets {h_i(w)} do not partition the points into p-sets")
    splices = (Splice(a_pts, b_pts),)
    base_xy = rep.xy
    _check_geometry(base_xy, splices, handle.k)
    result = Representation(pres, _splice_x(rep.x, splices), rep.y)

    pi_group = rep.image_group()
    phi_group = result.image_group()
    for_pi = all(is_block(pi_group, c) for c in cells)
    for_phi = all(is_block(phi_group, c) for c in cells)
    blocks = BlockSystem(n, cells) if for_phi else None
    return Composition(
        result=result,
        blocks=blocks,
        construction="centralizer",
        provenance={
            "rep": rep,
            "handle": handle,
            "hs": tuple(hs),
            "cells": tuple(sorted(tuple(sorted(c)) for c in cells)),
            "blocks_for_pi": for_pi,
            "blocks_for_phi": for_phi,
        },
        splices=splices,
        base_xy=base_xy,
        law=_law(result, base_xy, splices, transitivity_asserted=False),
    )


def compose_alpha_beta(
    rep: Representation, h1: Handle, h2: Handle, alpha: Perm, beta: Perm, m: int
) -> Composition:
    """Glue m copies along two handles, following the p-cycles of alpha and beta.

    Every p-cycle of alpha splices copies of the first handle in that cyclic
    order.  The p-cycles of beta do the same for the second handle.  The blocks
    are ``{w, deg+w, ..., (m-1)deg+w}``.
    """
    rep = rep.local() if rep.offset else rep
    pres = rep.presentation
    p, deg = pres.p, rep.degree
    if alpha.degree != m or beta.degree != m:
        raise DegreeMismatch(f"alpha and beta must act on {m} points")
    for name, h in (("first", h1), ("second", h2)):
        if not is_handle(rep, h):
            raise NotAHandle(f"{name} handle {h} is not a handle")
    if h1.k != h2.k:
        raise MixedK(f"handles use different k: {h1.k}, {h2.k}")
    if not h1.disjoint_from(h2):
        raise HandlesNotDisjoint(f"{h1} and {h2} share a point")
    for name, g in (("alpha", alpha), ("beta", beta)):
        bad = [c for c in g.cycles() if len(c) != p]
        if bad:
            raise BadCycleType(f"{name} has cycles {bad} of length other than p={p}")
    if not is_transitive(PermGroup(m, [alpha, beta])):
        raise NotTransitiveAlphaBeta("<alpha, beta> is not transitive")
    if not rep.is_transitive():
        raise NotTransitiveInput("the diagram is not transitive")

    x, y, _ = _disjoint_union([rep] * m)

    def copy(pt, i):
        return (i - 1) * deg + pt

    splices = []
    for handle, g in ((h1, alpha), (h2, beta)):
        for cyc in g.cycles():
            splices.append(Splice(
                tuple(copy(handle.a, i) for i in cyc),
                tuple(copy(handle.b, i) for i in cyc),
            ))
    splices = tuple(splices)
    base_xy = x * y
    _check_geometry(base_xy, splices, h1.k)
    result = Representation(pres, _splice_x(x, splices), y)
    blocks = _copy_blocks(deg, m)
    if not verify_blocks(result.image_group(), blocks):
        raise AssertionError("copy blocks are not preserved; construction is broken")
    return Composition(
        result=result,
        blocks=blocks,
        construction="alphabeta",
        provenance={"rep": rep, "h1": h1, "h2": h2, "alpha": alpha, "beta": beta, "copies": m},
        splices=splices,
        base_xy=base_xy,
        law=_law(result, base_xy, splices, transitivity_asserted=True),
    )
