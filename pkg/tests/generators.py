"""Random valid inputs for the four constructions.

Each generator returns None when its retry budget runs out, so callers can
keep drawing until they have enough instances.
"""

from __future__ import annotations

import math
import random

from oracles import random_cycle_lengths, random_perm_with_cycles, transitive

from trianglecomp.compose import (
    HandleAssignment,
    compose_alpha_beta,
    compose_centralizer,
    compose_clone_p,
    compose_general,
)
from trianglecomp.errors import CompositionError
from trianglecomp.group import PermGroup, is_transitive
from trianglecomp.perm import Perm
from trianglecomp.triangle import (
    Handle,
    Representation,
    TrianglePresentation,
    find_handles,
    select_disjoint_handles,
)


P = Perm.parse


def _perm(img) -> Perm:
    return Perm([v + 1 for v in img])


def random_pair(rng: random.Random, n: int, p: int, q: int, min_fixed: int):
    """Random transitive (x, y) with x-cycles dividing p and y-cycles dividing q."""
    for _ in range(200):
        x = random_perm_with_cycles(rng, n, random_cycle_lengths(rng, n, p, min_fixed))
        y = random_perm_with_cycles(rng, n, random_cycle_lengths(rng, n, q))
        if sum(x[i] == i for i in range(n)) >= min_fixed and transitive([x, y], n):
            return _perm(x), _perm(y)
    return None


def random_rep(rng: random.Random, n: int, p: int, q: int, k: int, handles: int = 1):
    """Transitive representation with at least ``handles`` disjoint non-crossing k-handles."""
    for _ in range(50):
        pair = random_pair(rng, n, p, q, 2 * handles)
        if pair is None:
            return None
        x, y = pair
        r = max(2, (x * y).order())
        rep = Representation(TrianglePresentation(p, q, r), x, y)
        if select_disjoint_handles(rep, k, handles):
            return rep
    return None


def gen_general(rng: random.Random):
    p = rng.randint(2, 7)
    q = rng.randint(2, 7)
    k = rng.choice([1, 1, 2])
    t = rng.randint(1, min(p, 3)) if rng.random() < 0.5 else p
    raw = []
    for _ in range(t):
        n = rng.randint(2, 12 if t < p else 6)
        pair = random_pair(rng, n, p, q, 2)
        if pair is None:
            return None
        raw.append(pair)
    r = max(2, math.lcm(*((x * y).order() for x, y in raw)))
    pres = TrianglePresentation(p, q, r)
    reps = [Representation(pres, x, y) for x, y in raw]
    # every diagram gets one handle; the rest are spread at random
    owners = list(range(1, t + 1)) + [rng.randint(1, t) for _ in range(p - t)]
    rng.shuffle(owners)
    entries = []
    taken: dict[int, set[int]] = {}
    for j in owners:
        options = [h for h in find_handles(reps[j - 1], k) if not h.points() & taken.get(j, set())]
        if not options:
            return None
        h = rng.choice(options)
        taken.setdefault(j, set()).update(h.points())
        entries.append((j, h))
    try:
        return compose_general(reps, HandleAssignment(entries))
    except CompositionError:
        return None


def gen_clone(rng: random.Random):
    p = rng.randint(2, 7)
    k = rng.choice([1, 1, 2])
    rep = random_rep(rng, rng.randint(2, 12), p, rng.randint(2, 7), k)
    if rep is None:
        return None
    return compose_clone_p(rep, rng.choice(find_handles(rep, k)))


def cyclic_cover(rng: random.Random, base: Representation, p: int):
    """p-fold cover with Z_p voltages; the fibre shift commutes with both generators.

    Point (w, j) is labelled j*d + w.  Voltages sum to zero around every cycle
    of length > 1, so the lifted orders still divide p and q.
    """
    d = base.degree

    def lift(g: Perm, free_fixed: bool) -> Perm:
        volt = {}
        for cyc in g.cycles():
            vs = [rng.randrange(p) for _ in cyc[:-1]]
            vs.append(-sum(vs) % p)
            volt.update(zip(cyc, vs))
        for w in g.fixed_points():
            volt[w] = rng.choice([0, 0, rng.randrange(p)]) if free_fixed else 0
        img = [0] * (d * p)
        for j in range(p):
            for w in range(1, d + 1):
                img[j * d + w - 1] = ((j + volt[w]) % p) * d + g(w)
        return Perm(img)

    x, y = lift(base.x, True), lift(base.y, False)
    shift = Perm([((i // d + 1) % p) * d + i % d + 1 for i in range(d * p)])
    return x, y, shift


def gen_centralizer(rng: random.Random):
    p = rng.choice([2, 3, 5])
    d = rng.randint(2, 12 // p)
    q = rng.randint(2, 7)
    pair = random_pair(rng, d, p, q, 0)
    if pair is None:
        return None
    base = Representation(TrianglePresentation(p, q, 2), *pair)
    x, y, shift = cyclic_cover(rng, base, p)
    if x.order() not in (1, p):
        return None
    rep = Representation(TrianglePresentation(p, q, max(2, (x * y).order())), x, y)
    hs = [shift ** i for i in range(p)]
    k = rng.choice([1, 2])
    handles = [h for h in find_handles(rep, k) if (h.a - 1) % d != (h.b - 1) % d]
    if not handles:
        return None
    try:
        return compose_centralizer(rep, rng.choice(handles), hs)
    except CompositionError:
        return None


def random_pcycle_product(rng: random.Random, m: int, p: int) -> Perm:
    count = rng.randint(1, m // p)
    return _perm(random_perm_with_cycles(rng, m, [p] * count))


def gen_alpha_beta(rng: random.Random, max_m: int = 6):
    p = rng.choice([2, 3, 5])
    m = rng.randint(p, max(p, max_m))
    for _ in range(100):
        alpha = random_pcycle_product(rng, m, p)
        beta = random_pcycle_product(rng, m, p)
        if is_transitive(PermGroup(m, [alpha, beta])):
            break
    else:
        return None
    k = rng.choice([1, 1, 2])
    rep = random_rep(rng, rng.randint(4, 12), p, rng.randint(2, 7), k, handles=2)
    if rep is None:
        return None
    h1, h2 = select_disjoint_handles(rep, k, 2)
    try:
        return compose_alpha_beta(rep, h1, h2, alpha, beta, m)
    except CompositionError:
        return None


EXAMPLE_256 = dict(
    rep=Representation(
        TrianglePresentation(2, 5, 6), Perm.parse("(5,6)", 6), Perm.parse("(1,2,3,4,5)", 6)
    ),
    h1=Handle(1, 2, 1),
    h2=Handle(3, 4, 1),
    alpha=Perm.parse("(1,2)", 3),
    beta=Perm.parse("(2,3)", 3),
    m=3,
)


def draw(gen, rng: random.Random, count: int, max_tries: int = 100000):
    out = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"{gen.__name__} produced only {len(out)} instances")
        comp = gen(rng)
        if comp is not None:
            out.append(comp)
    return out


# -- permutation group corpus ----------------------------------------------------


def random_group(rng: random.Random, n: int) -> PermGroup:
    gens = []
    for _ in range(rng.randint(1, 3)):
        img = list(range(1, n + 1))
        # sparse moves keep most closures small
        pts = rng.sample(range(n), rng.randint(2, n))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b + 1
        gens.append(Perm(img))
    return PermGroup(n, gens)


def transitive_corpus() -> list[PermGroup]:
    fixed = [
        PermGroup.of(P("(1,2,3,4)")),
        PermGroup.of(P("(1,3)(2,4)"), P("(1,2)(3,4)")),
        PermGroup.of(P("(1,2,3)", 4), P("(2,3,4)")),
        PermGroup.of(P("(1,2,3,4)"), P("(1,2)", 4)),
        PermGroup.of(P("(1,2,3,4)"), P("(1,3)", 4)),
        PermGroup.of(P("(1,2,3,4,5)"), P("(3,4,5)", 5)),
        PermGroup.of(P("(1,2,3,4,5)"), P("(2,3,5,4)")),
        PermGroup.of(P("(1,2,3,4,5,6)"), P("(1,6)(2,5)(3,4)")),
        PermGroup.of(P("(1,2,3,4,5,6)"), P("(1,2)", 6)),
        PermGroup.of(P("(1,2)(3,4)(5,6)"), P("(1,3,5)(2,4,6)"), P("(1,2)", 6)),
        PermGroup.of(P("(1,2,3)(4,5,6)"), P("(1,4)(2,5)(3,6)"), P("(1,2)", 6)),
        PermGroup.of(P("(1,2,3,4,5,6,7)"), P("(2,3,5)(4,7,6)")),
        PermGroup.of(P("(1,2,3,4,5,6,7,8)")),
        PermGroup.of(P("(1,2,3,4,5,6,7,8)"), P("(1,8)(2,7)(3,6)(4,5)")),
        PermGroup.of(P("(1,2)(3,4)(5,6)(7,8)"), P("(1,3)(2,4)(5,7)(6,8)"), P("(1,5)(2,6)(3,7)(4,8)")),
        PermGroup.of(P("(1,2,3,4)(5,6,7,8)"), P("(1,5)(2,6)(3,7)(4,8)")),
        PermGroup.of(P("(1,2)", 8), P("(1,3,5,7)(2,4,6,8)")),
        PermGroup.of(P("(1,2,3,4,5,6,7,8)"), P("(1,2)", 8)),
    ]
    rng = random.Random(5)
    extra = []
    while len(extra) < 12:
        G = random_group(rng, rng.randint(4, 8))
        if is_transitive(G):
            extra.append(G)
    return fixed + extra
