"""Command-line front end.

Representations travel as UTF-8 JSON::

    {"p": 2, "q": 2, "r": 2, "degree": 2, "x": [], "y": [[1, 2]],
     "handles": [[1, 2, 1]], "provenance": {...}}

Composed files carry their construction inputs in ``provenance`` and are
rebuilt and compared on load, so a file that no longer matches its recipe is
rejected.

Exit codes: 0 success, 1 malformed input, 2 validation failure, 3 search
budget exhausted, 4 anomalous verdict.
"""

from __future__ import annotations

import argparse
import itertools
import json
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any

import numpy as np

from .analyze import analyze_imprimitivity, classify_thm7, is_prime, verify_thm8
from .compose import (
    Composition,
    HandleAssignment,
    compose_alpha_beta,
    compose_centralizer,
    compose_clone_p,
    compose_general,
)
from .errors import HypothesisFailed, MalformedFile, NotFound, ValidationError
from .group import PermGroup, is_alternating
from .perm import Perm
from .triangle import (
    Handle,
    Representation,
    TrianglePresentation,
    centralizer_elements,
    check_relations,
    find_handles,
    is_handle,
    search_alternating,
    search_backtrack,
    select_disjoint_handles,
)

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_BUDGET, EXIT_ANOMALOUS = 0, 1, 2, 3, 4


# -- file format ---------------------------------------------------------------


def perm_to_json(g: Perm) -> list[list[int]]:
    return [list(c) for c in g.cycles()]


def perm_from_json(cycles: Any, degree: int) -> Perm:
    if not isinstance(cycles, list) or not all(isinstance(c, list) for c in cycles):
        raise MalformedFile("permutations must be lists of cycles")
    try:
        return Perm.from_cycles(cycles, degree)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise MalformedFile(f"bad cycle list {cycles!r}") from exc


def handle_to_json(h: Handle) -> list[int]:
    return [h.a, h.b, h.k]


def handle_from_json(data: Any) -> Handle:
    if not (isinstance(data, list) and len(data) == 3 and all(isinstance(v, int) for v in data)):
        raise MalformedFile(f"handle must be [a, b, k], got {data!r}")
    return Handle(*data)


def rep_to_json(rep: Representation, handles=(), provenance: dict | None = None) -> dict:
    rep = rep.local()
    p, q, r = rep.presentation
    out: dict[str, Any] = {
        "p": p, "q": q, "r": r, "degree": rep.degree,
        "x": perm_to_json(rep.x), "y": perm_to_json(rep.y),
    }
    if handles:
        out["handles"] = [handle_to_json(h) for h in handles]
    if provenance is not None:
        out["provenance"] = provenance
    return out


@dataclass
class RepFile:
    rep: Representation
    handles: list[Handle] = field(default_factory=list)
    provenance: dict | None = None
    composition: Composition | None = None


def _base_rep(data: dict) -> Representation:
    if not isinstance(data, dict):
        raise MalformedFile("representation must be a JSON object")
    missing = [k for k in ("p", "q", "r", "degree", "x", "y") if k not in data]
    if missing:
        raise MalformedFile(f"missing fields {missing}")
    if not all(isinstance(data[k], int) for k in ("p", "q", "r", "degree")):
        raise MalformedFile("p, q, r and degree must be integers")
    n = data["degree"]
    if n < 1:
        raise MalformedFile("degree must be positive")
    pres = TrianglePresentation(data["p"], data["q"], data["r"])
    rep = Representation(pres, perm_from_json(data["x"], n), perm_from_json(data["y"], n))
    rel = check_relations(rep)
    if not rel.ok:
        raise ValidationError(f"relations fail for {pres}: element orders {rel.exact_orders}")
    return rep


def rebuild_composition(prov: dict) -> Composition:
    """Re-run the construction recorded in a provenance block."""
    construction = prov.get("construction")
    inputs = prov.get("inputs")
    if not isinstance(inputs, dict):
        raise MalformedFile("provenance lacks construction inputs")
    try:
        if construction == "clone":
            return compose_clone_p(_base_rep(inputs["rep"]), handle_from_json(inputs["handle"]))
        if construction == "general":
            reps = [_base_rep(d) for d in inputs["reps"]]
            assignment = HandleAssignment([(j, Handle(a, b, k)) for j, a, b, k in inputs["assignment"]])
            return compose_general(reps, assignment)
        if construction == "centralizer":
            rep = _base_rep(inputs["rep"])
            hs = [perm_from_json(h, rep.degree) for h in inputs["hs"]]
            return compose_centralizer(rep, handle_from_json(inputs["handle"]), hs)
        if construction == "alphabeta":
            rep = _base_rep(inputs["rep"])
            m = inputs["m"]
            return compose_alpha_beta(
                rep,
                handle_from_json(inputs["h1"]),
                handle_from_json(inputs["h2"]),
                perm_from_json(inputs["alpha"], m),
                perm_from_json(inputs["beta"], m),
                m,
            )
    except (KeyError, TypeError) as exc:
        raise MalformedFile(f"incomplete {construction} inputs: {exc}") from exc
    raise MalformedFile(f"unknown construction {construction!r}")


def composition_provenance(comp: Composition) -> dict:
    prov = comp.provenance
    if comp.construction == "clone":
        inputs = {"rep": rep_to_json(prov["rep"]), "handle": handle_to_json(prov["handle"])}
    elif comp.construction == "general":
        inputs = {
            "reps": [rep_to_json(r) for r in prov["reps"]],
            "assignment": [[j, h.a, h.b, h.k] for j, h in prov["assignment"].entries],
        }
    elif comp.construction == "centralizer":
        inputs = {
            "rep": rep_to_json(prov["rep"]),
            "handle": handle_to_json(prov["handle"]),
            "hs": [perm_to_json(h) for h in prov["hs"]],
        }
    else:
        inputs = {
            "rep": rep_to_json(prov["rep"]),
            "h1": handle_to_json(prov["h1"]),
            "h2": handle_to_json(prov["h2"]),
            "alpha": perm_to_json(prov["alpha"]),
            "beta": perm_to_json(prov["beta"]),
            "m": prov["copies"],
        }
    out = {"construction": comp.construction, "inputs": inputs}
    if comp.blocks is not None:
        out["blocks"] = [list(c) for c in comp.blocks.blocks]
    return out


def load_repfile_data(data: Any) -> RepFile:
    rep = _base_rep(data)
    handles = [handle_from_json(h) for h in data.get("handles") or []]
    for h in handles:
        if not is_handle(rep, h):
            raise ValidationError(f"{h} is not a handle of the stored representation")
    prov = data.get("provenance")
    comp = None
    if isinstance(prov, dict) and prov.get("construction") in ("clone", "general", "centralizer", "alphabeta"):
        comp = rebuild_composition(prov)
        if comp.result.x != rep.x or comp.result.y != rep.y:
            raise ValidationError("stored x, y differ from the recorded construction")
        stored = prov.get("blocks")
        rebuilt = None if comp.blocks is None else [list(c) for c in comp.blocks.blocks]
        if stored is not None and stored != rebuilt:
            raise ValidationError("stored blocks differ from the recorded construction")
    return RepFile(rep, handles, prov, comp)


def read_repfile(path: str | Path) -> RepFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedFile(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFile(f"{path} is not valid JSON: {exc}") from exc
    return load_repfile_data(data)


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- run manifests -------------------------------------------------------------


@dataclass
class RunManifest:
    command: list[str]
    seed: int | None
    versions: dict[str, str]
    timing_seconds: float
    outcome: dict


def _versions() -> dict[str, str]:
    try:
        pkg = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        pkg = "unknown"
    return {"python": platform.python_version(), "numpy": np.__version__, "trianglecomp": pkg}


def write_manifest(args, argv: list[str], started: float, outcome: dict) -> None:
    manifest = RunManifest(
        command=["trianglecomp", *argv],
        seed=getattr(args, "seed", None),
        versions=_versions(),
        timing_seconds=round(time.perf_counter() - started, 4),
        outcome=outcome,
    )
    text = dumps(asdict(manifest))
    if args.manifest:
        Path(args.manifest).write_text(text, encoding="utf-8")
    elif args.out:
        Path(args.out + ".manifest.json").write_text(text, encoding="utf-8")
    else:
        sys.stderr.write(text)


# -- commands ------------------------------------------------------------------


def _presentation(args) -> TrianglePresentation:
    return TrianglePresentation(args.p, args.q, args.r)


def cmd_search(args, argv) -> int:
    started = time.perf_counter()
    pres = _presentation(args)
    if args.mode == "backtrack":
        sols = search_backtrack(
            pres, args.degree,
            require_handle_k=args.k if args.handles else None,
            max_solutions=args.max_solutions or None,
            strict_orders=args.strict_orders,
        )
        if not sols:
            emit(dumps([]), args.out)
            print(f"no representation of {pres} in degree {args.degree}", file=sys.stderr)
            return EXIT_BUDGET
        files = [
            rep_to_json(rep, find_handles(rep, args.k),
                        {"construction": "search", "mode": "backtrack"})
            for rep in sols
        ]
        emit(dumps(files if args.max_solutions != 1 else files[0]), args.out)
        return EXIT_OK
    try:
        rep = search_alternating(pres, args.degree, args.handles or 1, args.k,
                                 seed=args.seed, max_attempts=args.budget)
    except NotFound as exc:
        write_manifest(args, argv, started, {"status": "NotFound", "attempts": exc.attempts})
        print(f"no witness within budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    handles = select_disjoint_handles(rep, args.k, args.handles or 1)
    emit(dumps(rep_to_json(rep, handles, {
        "construction": "search", "mode": "alternating", "seed": args.seed, "budget": args.budget,
    })), args.out)
    write_manifest(args, argv, started, {"status": "Found"})
    return EXIT_OK


def cmd_handles(args, argv) -> int:
    rf = read_repfile(args.file)
    hs = find_handles(rf.rep, args.k)
    if args.json:
        emit(dumps([handle_to_json(h) for h in hs]), args.out)
    else:
        emit("".join(f"{h.a} {h.b} {h.k}\n" for h in hs), args.out)
    return EXIT_OK


def _parse_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise MalformedFile(f"expected a,b but got {text!r}") from None
    return a, b


def _pick_handle(rf: RepFile, text: str | None, k: int) -> Handle:
    if text:
        return Handle(*_parse_pair(text), k)
    if rf.handles:
        return rf.handles[0]
    found = find_handles(rf.rep, k)
    if not found:
        raise ValidationError(f"the representation has no {k}-handle")
    return found[0]


def _auto_centralizer(rep: Representation, handle: Handle) -> list[Perm]:
    # powers of a centralizing element of order p, when one exists
    p = rep.presentation.p
    for c in centralizer_elements(rep):
        if c.order() == p:
            hs = [c ** i for i in range(p)]
            if len({h(handle.a) for h in hs} | {h(handle.b) for h in hs}) == 2 * p:
                return hs
    raise ValidationError("no centralizing element of order p moves the handle into distinct points")


def cmd_compose(args, argv) -> int:
    files = [read_repfile(f) for f in args.files]
    mode = args.mode
    if mode != "general" and len(files) != 1:
        raise ValidationError(f"mode {mode} takes exactly one input file")
    rf = files[0]
    if mode == "general":
        if not args.assign:
            raise ValidationError("general mode needs --assign j:a,b for each handle")
        entries = []
        for item in args.assign:
            j, _, pair = item.partition(":")
            if not pair:
                raise MalformedFile(f"expected j:a,b but got {item!r}")
            entries.append((int(j), Handle(*_parse_pair(pair), args.k)))
        comp = compose_general([f.rep for f in files], HandleAssignment(entries))
    elif mode == "clone":
        comp = compose_clone_p(rf.rep, _pick_handle(rf, args.handle, args.k))
    elif mode == "centralizer":
        handle = _pick_handle(rf, args.handle, args.k)
        if args.hs:
            hs = [Perm.parse(t, rf.rep.degree) for t in args.hs]
        else:
            hs = _auto_centralizer(rf.rep, handle)
        comp = compose_centralizer(rf.rep, handle, hs)
    else:
        if args.handle2:
            h1 = Handle(*_parse_pair(args.handle), args.k)
            h2 = Handle(*_parse_pair(args.handle2), args.k)
        else:
            chosen = rf.handles[:2] if len(rf.handles) >= 2 else select_disjoint_handles(rf.rep, args.k, 2)
            if not chosen:
                raise ValidationError(f"no two disjoint {args.k}-handles available")
            h1, h2 = chosen
        if not (args.alpha and args.beta and args.m):
            raise ValidationError("alphabeta mode needs --alpha, --beta and --m")
        comp = compose_alpha_beta(
            rf.rep, h1, h2, Perm.parse(args.alpha, args.m), Perm.parse(args.beta, args.m), args.m
        )
    if not comp.law.ok:
        raise ValidationError(f"composition law violated: {comp.law}")
    emit(dumps(rep_to_json(comp.result, (), composition_provenance(comp))), args.out)
    return EXIT_OK


def analysis_json(comp: Composition) -> tuple[dict, bool]:
    """Report for a composition plus whether any verdict is anomalous."""
    out: dict[str, Any] = {
        "construction": comp.construction,
        "law": {
            "relations": comp.law.relations.ok,
            "transitive": comp.law.transitive,
            "transitivity_asserted": comp.law.transitivity_asserted,
            "cycle_law_violations": list(comp.law.cycle_law_violations),
        },
    }
    anomalous = not comp.law.ok
    if comp.construction == "centralizer":
        out["blocks_for_pi"] = comp.provenance["blocks_for_pi"]
        out["blocks_for_phi"] = comp.provenance["blocks_for_phi"]
    if comp.blocks is None:
        out["imprimitivity"] = None
        return out, anomalous
    report = analyze_imprimitivity(comp)
    out["imprimitivity"] = report.summary()
    if comp.construction == "clone":
        verdict = classify_thm7(comp, report)
        out["thm7"] = {"case": verdict.case, "details": verdict.details}
        anomalous |= verdict.case == "Anomalous"
    elif comp.construction == "alphabeta":
        try:
            v8 = verify_thm8(comp, comp.provenance["copies"], report)
        except HypothesisFailed as exc:
            out["thm8"] = {"applicable": False, "hypothesis": exc.hypothesis}
        else:
            out["thm8"] = {
                "applicable": True,
                "verified": v8.verified,
                "expected_order": v8.expected_order,
                "found_order": v8.found_order,
                "q_block_is_Am": v8.q_block_is_Am,
            }
            anomalous |= not v8.verified
    return out, anomalous


def cmd_analyze(args, argv) -> int:
    rf = read_repfile(args.file)
    if rf.composition is None:
        raise ValidationError("file carries no composition provenance to analyze")
    out, anomalous = analysis_json(rf.composition)
    emit(dumps(out), args.out)
    return EXIT_ANOMALOUS if anomalous else EXIT_OK


# -- sweep ---------------------------------------------------------------------


def cell_seed(seed: int, deg: int) -> int:
    return int(np.random.SeedSequence([seed, deg]).generate_state(1)[0])


def alternating_pcycles(p: int) -> tuple[Perm, Perm]:
    """Two p-cycles generating A_p (p >= 5), first in lexicographic order."""
    alpha = Perm.from_cycles([range(1, p + 1)], p)
    for tail in itertools.permutations(range(2, p + 1)):
        beta = Perm.from_cycles([(1, *tail)], p)
        if is_alternating(PermGroup(p, [alpha, beta])):
            return alpha, beta
    raise ValueError(f"no generating pair of {p}-cycles")


def sweep_cell(conjecture: int, pqr: tuple[int, int, int], deg: int, k: int, budget: int, seed: int) -> dict:
    pres = TrianglePresentation(*pqr)
    p = pres.p
    row: dict[str, Any] = {"deg": deg, "seed": cell_seed(seed, deg)}
    if conjecture == 2 and (p < 5 or not is_prime(p) or p == deg - 1):
        row.update(label="Skipped", note=f"m=p={p} does not meet the wreath hypotheses")
        return row
    try:
        rep = search_alternating(pres, deg, conjecture, k, seed=row["seed"], max_attempts=budget)
    except NotFound as exc:
        row.update(label="NotFound", note=f"no witness within budget: {exc}", attempts=exc.attempts)
        return row
    row["x"], row["y"] = str(rep.x), str(rep.y)
    handles = select_disjoint_handles(rep, k, conjecture)
    if conjecture == 1:
        comp = compose_clone_p(rep, handles[0])
        verdict = classify_thm7(comp)
        row["case"] = verdict.case
        row["group_order"] = verdict.details.get("group_order")
        row["fp_dimension"] = verdict.details.get("fp_dimension")
        if verdict.case in ("Case1", "Case2"):
            row["label"] = "Found"
            if verdict.case == "Case1":
                row["note"] = "Case1 sighting, flagged for manual study"
        else:
            row.update(label="Anomalous", details=verdict.details)
    else:
        alpha, beta = alternating_pcycles(p)
        comp = compose_alpha_beta(rep, handles[0], handles[1], alpha, beta, p)
        v8 = verify_thm8(comp, p)
        row["group_order"] = v8.found_order
        row["label"] = "Found" if v8.verified else "Anomalous"
        if not v8.verified:
            row["details"] = {"expected_order": v8.expected_order, **v8.details}
    if not comp.law.ok:
        row.update(label="Anomalous", law=str(comp.law))
    return row


def run_sweep(conjecture: int, pqr, degrees, k: int, budget: int, seed: int, jobs: int = 1) -> list[dict]:
    cells = [(conjecture, tuple(pqr), deg, k, budget, seed) for deg in degrees]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(sweep_cell, *zip(*cells)))
    else:
        rows = [sweep_cell(*c) for c in cells]
    return sorted(rows, key=lambda r: r["deg"])


def cmd_sweep(args, argv) -> int:
    started = time.perf_counter()
    degrees = range(args.deg_min, args.deg_max + 1)
    rows = run_sweep(args.conjecture, (args.p, args.q, args.r), degrees, args.k,
                     args.budget, args.seed, args.jobs)
    table = {
        "conjecture": args.conjecture,
        "presentation": [args.p, args.q, args.r],
        "seed": args.seed,
        "budget": args.budget,
        "rows": rows,
    }
    emit(dumps(table), args.out)
    counts = {label: sum(r["label"] == label for r in rows)
              for label in ("Found", "NotFound", "Skipped", "Anomalous")}
    write_manifest(args, argv, started, {"rows": len(rows), **counts})
    return EXIT_ANOMALOUS if counts["Anomalous"] else EXIT_OK


# -- DOT -----------------------------------------------------------------------


def to_dot(rep: Representation) -> str:
    """Coset diagram: x edges solid, y edges dashed, fixed points noted on the vertex."""
    rep = rep.local()
    lines = ["digraph coset {", "    node [shape=circle];"]
    edges = []
    for w in rep.points:
        notes = [name for name, g in (("x", rep.x), ("y", rep.y)) if g(w) == w]
        attrs = f' [xlabel="fixed: {",".join(notes)}"]' if notes else ""
        lines.append(f"    {w}{attrs};")
    for name, g, style in (("x", rep.x, "solid"), ("y", rep.y, "dashed")):
        color = "blue" if name == "x" else "red"
        for cyc in g.cycles():
            if len(cyc) == 2:
                edges.append(f'    {cyc[0]} -> {cyc[1]} [label="{name}", style={style}, color={color}, dir=both];')
                continue
            for i, w in enumerate(cyc):
                v = cyc[(i + 1) % len(cyc)]
                edges.append(f'    {w} -> {v} [label="{name}", style={style}, color={color}];')
    return "\n".join(lines + edges + ["}"]) + "\n"


def cmd_dot(args, argv) -> int:
    emit(to_dot(read_repfile(args.file).rep), args.out)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trianglecomp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, seed=False):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--k", type=int, default=1, help="handle step (default 1)")
        if seed:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--budget", type=int, default=20000, help="random search attempts")
            sp.add_argument("--manifest", help="run manifest path (default OUT.manifest.json or stderr)")

    sp = sub.add_parser("search", help="find a representation")
    for name in ("p", "q", "r", "degree"):
        sp.add_argument(name, type=int)
    sp.add_argument("--mode", choices=("alternating", "backtrack"), default="alternating")
    sp.add_argument("--handles", type=int, default=0, help="disjoint k-handles required")
    sp.add_argument("--max-solutions", type=int, default=1, help="0 means all")
    sp.add_argument("--strict-orders", action="store_true", help="require exact orders p, q, r")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("handles", help="list k-handles")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_handles)

    sp = sub.add_parser("compose", help="splice representations along handles")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--mode", choices=("general", "clone", "centralizer", "alphabeta"), default="clone")
    sp.add_argument("--assign", nargs="*", help="general mode: j:a,b per handle")
    sp.add_argument("--handle", help="a,b")
    sp.add_argument("--handle2", help="a,b (second handle in alphabeta mode)")
    sp.add_argument("--hs", nargs="*", help="centralizer mode: permutations, identity first")
    sp.add_argument("--alpha")
    sp.add_argument("--beta")
    sp.add_argument("--m", type=int)
    common(sp)
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("analyze", help="block structure and verdicts of a composed file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("sweep", help="search, compose and classify over a degree range")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("r", type=int)
    sp.add_argument("--conjecture", type=int, choices=(1, 2), default=1)
    sp.add_argument("--deg-min", type=int, default=7)
    sp.add_argument("--deg-max", type=int, default=12)
    sp.add_argument("--jobs", type=int, default=1)
    common(sp, seed=True)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("dot", help="coset diagram in DOT")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_dot)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.func(args, argv)
    except MalformedFile as exc:
        print(f"malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ValueError as exc:
        # ValidationError and plain constructor checks alike
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NotFound as exc:
        print(f"no witness within budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
