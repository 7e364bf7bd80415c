"""Structure of composed representations: block action, kernel, block groups, verdicts.

Isomorphism types are pinned down by orders and recognition flags (alternating,
cyclic, elementary abelian) rather than by isomorphism testing.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from .compose import Composition
from .errors import (
    BlocksMissing,
    HypothesisFailed,
    NotABlockSystem,
    NotAPowerOfReferenceCycle,
    WrongProvenance,
)
from .group import (
    BlockActionData,
    BlockSystem,
    PermGroup,
    block_action,
    is_alternating,
    is_symmetric,
    verify_blocks,
)
from .perm import Perm


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by row reduction."""
    rows = [[v % p for v in row] for row in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(v - f * w) % p for v, w in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class BlockGroupInfo:
    """The group induced on one cell by its setwise stabilizer."""

    cell: tuple[int, ...]
    group: PermGroup
    order: int
    is_alternating: bool
    is_symmetric: bool
    is_cyclic: bool


@dataclass(frozen=True)
class ImprimitivityReport:
    blocks: BlockSystem
    group_order: int
    quotient_order: int
    kernel_order: int
    prime: int
    kernel_elementary_abelian: bool
    fp_dimension: int | None
    q_block: BlockGroupInfo
    psi_is_alternating: bool
    equivalence_checked: bool | None
    action: BlockActionData = field(repr=False, compare=False)

    def summary(self) -> dict:
        return {
            "blocks": [list(c) for c in self.blocks.blocks],
            "group_order": self.group_order,
            "quotient_order": self.quotient_order,
            "kernel_order": self.kernel_order,
            "prime": self.prime,
            "kernel_elementary_abelian": self.kernel_elementary_abelian,
            "fp_dimension": self.fp_dimension,
            "q_block": {
                "cell": list(self.q_block.cell),
                "order": self.q_block.order,
                "is_alternating": self.q_block.is_alternating,
                "is_symmetric": self.q_block.is_symmetric,
                "is_cyclic": self.q_block.is_cyclic,
                "generators": [str(g) for g in self.q_block.group.generators],
            },
            "psi_is_alternating": self.psi_is_alternating,
            "equivalence_checked": self.equivalence_checked,
        }


def _is_cyclic(G: PermGroup, order: int) -> bool:
    gens = G.generators
    if any(g * h != h * g for g in gens for h in gens):
        return False
    return math.lcm(1, *(g.order() for g in gens)) == order


def block_group(data: BlockActionData, cell_index: int = 1) -> BlockGroupInfo:
    """Action of the setwise stabilizer of a cell on that cell, in sorted point order."""
    cell = data.blocks.blocks[cell_index - 1]
    gens = [g.restrict(cell) for g in data.block_stabilizer_schreier_gens[cell_index - 1]]
    Q = PermGroup(len(cell), gens)
    order = Q.order()
    return BlockGroupInfo(
        cell=cell,
        group=Q,
        order=order,
        is_alternating=is_alternating(Q),
        is_symmetric=is_symmetric(Q),
        is_cyclic=_is_cyclic(Q, order),
    )


def reference_orders(comp: Composition) -> dict[int, tuple[int, ...]] | None:
    """Cyclic order of each cell along which spliced x acts (copy order or h_i order)."""
    blocks = comp.blocks
    if blocks is None:
        return None
    if comp.construction == "centralizer":
        hs = comp.provenance["hs"]
        out = {}
        for idx, cell in enumerate(blocks.blocks, start=1):
            out[idx] = tuple(h(cell[0]) for h in hs)
        return out
    return {idx: cell for idx, cell in enumerate(blocks.blocks, start=1)}


def fp_module_dimension(
    N: PermGroup,
    blocks: BlockSystem,
    p: int,
    cell_orders: Mapping[int, Sequence[int]] | None = None,
) -> int:
    """Dimension over F_p of the kernel, viewed inside the permutation module.

    Each cell (size p) carries a reference p-cycle through its points in the
    given order (sorted by default).  A kernel generator restricted to a cell
    is a power tau^e of that cycle.  The exponents over all cells form its
    coordinate vector.
    """
    if blocks.cell_size != p:
        raise NotAPowerOfReferenceCycle(f"cells have size {blocks.cell_size}, not p={p}")
    orders = cell_orders or {i: c for i, c in enumerate(blocks.blocks, start=1)}
    rows = []
    for g in N.generators:
        row = []
        for idx in range(1, len(blocks) + 1):
            pts = tuple(orders[idx])
            pos = {pt: i for i, pt in enumerate(pts)}
            if g(pts[0]) not in pos:
                raise NotAPowerOfReferenceCycle(f"{g} moves cell {idx} off itself")
            e = pos[g(pts[0])]
            if any(g(pts[i]) != pts[(i + e) % p] for i in range(p)):
                raise NotAPowerOfReferenceCycle(f"{g} is not a power of the reference cycle on cell {idx}")
            row.append(e)
        rows.append(row)
    return rank_mod_p(rows, p)


def _block_equivalence(comp: Composition, action: BlockActionData) -> bool | None:
    # F(w) = cell containing w must intertwine the input action with the cell action
    blocks = comp.blocks
    gens = (comp.result.x, comp.result.y)
    if comp.construction in ("clone", "alphabeta"):
        rep = comp.provenance["rep"]
        for g_pi, g_phi in zip((rep.x, rep.y), gens):
            induced = blocks.induced(g_phi)
            for w in rep.points:
                if blocks.block_of[g_pi(w)] != induced(blocks.block_of[w]):
                    return False
        return True
    if comp.construction == "centralizer":
        rep = comp.provenance["rep"]
        return all(
            blocks.induced(g_pi) == blocks.induced(g_phi)
            for g_pi, g_phi in zip((rep.x, rep.y), gens)
        )
    return None


def analyze_imprimitivity(comp: Composition) -> ImprimitivityReport:
    if comp.blocks is None:
        raise BlocksMissing("composition carries no block system")
    H = comp.result.image_group()
    if not verify_blocks(H, comp.blocks):
        raise NotABlockSystem("recorded blocks are not preserved by the composed group")
    p = comp.result.presentation.p
    data = block_action(H, comp.blocks)

    kgens = data.kernel.generators
    abelian = all(g * h == h * g for g in kgens for h in kgens)
    exponent_p = all(g.order() == p for g in kgens)
    order = data.kernel_order
    while order % p == 0:
        order //= p
    elementary = abelian and exponent_p and order == 1

    dim = None
    if elementary:
        if not kgens:
            dim = 0
        else:
            try:
                dim = fp_module_dimension(data.kernel, comp.blocks, p, reference_orders(comp))
            except NotAPowerOfReferenceCycle:
                dim = None
    return ImprimitivityReport(
        blocks=comp.blocks,
        group_order=data.group_order,
        quotient_order=data.quotient_order,
        kernel_order=data.kernel_order,
        prime=p,
        kernel_elementary_abelian=elementary,
        fp_dimension=dim,
        q_block=block_group(data, 1),
        psi_is_alternating=is_alternating(data.quotient),
        equivalence_checked=_block_equivalence(comp, data),
        action=data,
    )


def block_stabilizer_action(comp: Composition, point: int, g: Perm | None = None) -> Perm:
    """How ``g`` (default the composed x) permutes the cell containing ``point``.

    The cell is labelled 1..len(cell) in sorted order.  For copy blocks this is
    the copy index.  ``g`` must fix the cell setwise.
    """
    if comp.blocks is None:
        raise BlocksMissing("composition carries no block system")
    g = comp.result.x if g is None else g
    cell = comp.blocks.blocks[comp.blocks.block_of[point] - 1]
    return g.restrict(cell)


# -- verdicts --------------------------------------------------------------------


@dataclass(frozen=True)
class Thm7Verdict:
    """Classification of a clone composition over an alternating image.

    ``case`` is one of ``Case1`` (C_p x A_deg), ``Case2`` (C_p^(deg-1) : A_deg),
    ``Inapplicable`` or ``Anomalous``.
    """

    case: str
    details: dict
    report: ImprimitivityReport | None = field(default=None, repr=False, compare=False)


def classify_thm7(comp: Composition, report: ImprimitivityReport | None = None) -> Thm7Verdict:
    if comp.construction != "clone":
        raise WrongProvenance(f"expected a clone composition, got {comp.construction!r}")
    p, q, r = comp.result.presentation
    rep = comp.provenance["rep"]
    deg = rep.degree
    details = {
        "p": p, "q": q, "r": r, "deg": deg,
        "p_prime": is_prime(p),
        "p_divides_qr": (q * r) % p == 0,
        "p_divides_deg": deg % p == 0,
        "deg_gt_6": deg > 6,
        "ordered": p <= q <= r,
    }
    psi_alt = is_alternating(rep.image_group())
    details["psi_alternating"] = psi_alt
    if not (details["p_prime"] and details["deg_gt_6"] and psi_alt):
        return Thm7Verdict("Inapplicable", details)
    report = report or analyze_imprimitivity(comp)
    half = math.factorial(deg) // 2
    details.update(
        group_order=report.group_order,
        kernel_order=report.kernel_order,
        quotient_order=report.quotient_order,
        fp_dimension=report.fp_dimension,
        generators={"x": str(comp.result.x), "y": str(comp.result.y)},
    )
    if (report.group_order == p * half and report.kernel_order == p
            and report.fp_dimension == 1):
        case = "Case1" if details["p_divides_qr"] and details["p_divides_deg"] else "Anomalous"
    elif (report.group_order == p ** (deg - 1) * half
            and report.kernel_order == p ** (deg - 1)
            and report.fp_dimension == deg - 1):
        case = "Case2"
    else:
        case = "Anomalous"
    return Thm7Verdict(case, details, report)


@dataclass(frozen=True)
class Thm8Verdict:
    verified: bool
    expected_order: int
    found_order: int
    q_block_is_Am: bool
    details: dict = field(default_factory=dict)
    report: ImprimitivityReport | None = field(default=None, repr=False, compare=False)


def verify_thm8(comp: Composition, m: int, report: ImprimitivityReport | None = None) -> Thm8Verdict:
    """Check that the alpha/beta composition over A_deg has order |A_m|^deg * |A_deg|."""
    if comp.construction != "alphabeta":
        raise WrongProvenance(f"expected an alpha/beta composition, got {comp.construction!r}")
    prov = comp.provenance
    rep = prov["rep"]
    deg = rep.degree
    p = comp.result.presentation.p
    if prov["copies"] != m:
        raise HypothesisFailed(f"m={m} differs from the number of copies {prov['copies']}")
    if not is_prime(p):
        raise HypothesisFailed(f"p={p} is not prime")
    if deg <= 6:
        raise HypothesisFailed(f"deg={deg} is not greater than 6")
    if m < 5:
        raise HypothesisFailed(f"m={m} is less than 5")
    if m == deg - 1:
        raise HypothesisFailed("m = deg-1")
    if not is_alternating(PermGroup(m, [prov["alpha"], prov["beta"]])):
        raise HypothesisFailed("<alpha, beta> not alternating")
    if not is_alternating(rep.image_group()):
        raise HypothesisFailed("image of the diagram is not alternating")
    report = report or analyze_imprimitivity(comp)
    expected = (math.factorial(m) // 2) ** deg * (math.factorial(deg) // 2)
    q_is_am = report.q_block.is_alternating and len(report.q_block.cell) == m
    return Thm8Verdict(
        verified=report.group_order == expected and q_is_am,
        expected_order=expected,
        found_order=report.group_order,
        q_block_is_Am=q_is_am,
        details={"p": p, "deg": deg, "m": m, "kernel_order": report.kernel_order,
                 "quotient_order": report.quotient_order},
        report=report,
    )


def wreath_embedding_check(comp: Composition, report: ImprimitivityReport | None = None) -> bool:
    """|H| divides |Q_1|^(number of cells) * |psi(H)|."""
    report = report or analyze_imprimitivity(comp)
    bound = report.q_block.order ** len(report.blocks) * report.quotient_order
    return bound % report.group_order == 0
