"""Command-line front end.

Every command prints a JSON report (``--json``) or a short text summary and
exits with 0 when all checks hold, 1 when one fails, 2 when a budget ran out
before a check could be decided, and 3 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import re
import sys
from pathlib import Path
from typing import Sequence

from .cones import (
    check_orthogonality,
    orthogonalize_pair,
    verify_two_cone_theorem,
    verify_vsc_conditions,
)
from .digraph import (
    CapacityError,
    Digraph,
    DigraphParseError,
    format_digraph,
    parse_digraph,
    product,
    to_dot,
)
from .gadget import build_gadget_graph, verify_gadget_equivalence
from .mountains import (
    MountainSeq,
    count_decreasing_mountains,
    gen_decreasing_mountains,
    omega_sequence,
    separator_report,
)
from .paths import PathWord, lattice_laws, random_sum
from .report import RunReport, Verdict, decide
from .search import (
    Budget,
    SearchBudgetExceeded,
    compute_core,
    find_homomorphism,
    is_core,
)

EXIT_INPUT_ERROR = 3


class InputError(Exception):
    pass


# ---------------------------------------------------------------- files


def parse_path_file(text: str) -> PathWord:
    """Read ``k = ...`` plus ``word = ...``, or ``mountain = 3,1@k=3``."""
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"line {lineno}: expected 'key = value'")
        fields[key.strip().lower()] = value.strip()
    if "mountain" in fields:
        return MountainSeq.parse(fields["mountain"]).word()
    if "k" not in fields:
        raise InputError("path file needs 'k = ...' or 'mountain = ...'")
    return PathWord.parse(fields.get("word", ""), int(fields["k"]))


def format_path_file(w: PathWord) -> str:
    word = " ".join("U" if s > 0 else "D" for s in w.steps)
    return f"k = {w.k}\nword = {word}\n"


def load_digraph(source: str) -> Digraph:
    """Load a digraph file, a ``.path`` file, or an inline mountain literal."""
    p = Path(source)
    if not p.exists():
        if re.search(r"@\s*k\s*=", source):
            try:
                return MountainSeq.parse(source).to_digraph()
            except ValueError as exc:
                raise InputError(str(exc)) from None
        raise InputError(f"{source}: no such file")
    text = p.read_text()
    try:
        if p.suffix == ".path" or re.search(r"^\s*(word|mountain|k)\s*=", text, re.M):
            return parse_path_file(text).to_digraph()
        return parse_digraph(text)
    except (DigraphParseError, ValueError) as exc:
        raise InputError(f"{source}: {exc}") from None


def digest(source: str) -> str:
    p = Path(source)
    data = p.read_bytes() if p.exists() else source.encode()
    return hashlib.sha256(data).hexdigest()[:16]


def write_out(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)


def stats(g: Digraph) -> dict:
    return {
        "vertices": g.n,
        "arcs": g.arc_count,
        "oriented": g.is_antisymmetric,
        "symmetric": g.is_symmetric,
        "components": len(g.components()),
    }


# ---------------------------------------------------------------- commands


def _budget(args) -> Budget:
    # one budget per command so the report can show the total node count
    if getattr(args, "budget", None) is None:
        args.budget = Budget(args.budget_nodes)
    return args.budget


def cmd_parse(args, rep: RunReport) -> None:
    g = load_digraph(args.file)
    rep.data.update(input=digest(args.file), **stats(g))
    rep.add("parse", Verdict.TRUE)


def cmd_product(args, rep: RunReport) -> None:
    if len(args.files) < 2:
        raise InputError("product needs at least 2 input files")
    gs = [load_digraph(f) for f in args.files]
    p = product(gs, args.max_vertices)
    write_out(args.output, format_digraph(p))
    rep.data.update(inputs=[digest(f) for f in args.files], **stats(p))
    rep.add("product", Verdict.TRUE)


def cmd_core(args, rep: RunReport) -> None:
    g = load_digraph(args.file)
    b = _budget(args)
    try:
        res = compute_core(g, b)
        verdict = Verdict.TRUE
    except SearchBudgetExceeded as exc:
        res = exc.partial
        verdict = Verdict.INCONCLUSIVE
    write_out(args.output, format_digraph(res.core))
    witness = {"vertices": list(res.vertices), "retraction": list(res.retraction.images)}
    if args.witness:
        Path(args.witness).write_text(json.dumps(witness, indent=2) + "\n")
    rep.data.update(input=digest(args.file), core_vertices=res.core.n, core_arcs=res.core.arc_count, **witness)
    rep.add("core_certified", verdict, nodes=b.nodes)


def cmd_is_core(args, rep: RunReport) -> None:
    g = load_digraph(args.file)
    b = _budget(args)
    v, _, why = decide(lambda: is_core(g, b))
    rep.data["input"] = digest(args.file)
    rep.add("is_core", v, nodes=b.nodes, reason=why)


def cmd_hom(args, rep: RunReport) -> None:
    g, h = load_digraph(args.source), load_digraph(args.target)
    b = _budget(args)
    v, m, why = decide(lambda: find_homomorphism(g, h, injective=args.injective, budget=b))
    rep.add("hom", v, witness=m, nodes=b.nodes, reason=why)


def cmd_orthogonal(args, rep: RunReport) -> None:
    g, h = load_digraph(args.g), load_digraph(args.h)
    b = _budget(args)
    v, res, why = decide(lambda: check_orthogonality(g, h, b))
    detail: dict = {"nodes": b.nodes, "reason": why}
    if res is not None:
        for side, r in (("to_g", res.to_g), ("to_h", res.to_h)):
            if not r:
                detail[f"{side}_non_surjective"] = r.witness
    rep.add("orthogonal", v, **detail)


def cmd_orthogonalize(args, rep: RunReport) -> None:
    g, h = load_digraph(args.g), load_digraph(args.h)
    b = _budget(args)
    try:
        pair = orthogonalize_pair(g, h, b)
    except SearchBudgetExceeded as exc:
        rep.add("orthogonalize", Verdict.INCONCLUSIVE, reason=str(exc), nodes=b.nodes)
        return
    if args.output:
        write_out(args.output + ".g.dg", format_digraph(pair.g))
        write_out(args.output + ".h.dg", format_digraph(pair.h))
    rep.data.update(g_vertices=list(pair.g_vertices), h_vertices=list(pair.h_vertices))
    rep.add("orthogonalize", Verdict.TRUE, nodes=b.nodes)


def cmd_mountains_gen(args, rep: RunReport) -> None:
    fam = gen_decreasing_mountains(args.h, args.l, anchored=not args.all_subsets)
    rep.data.update(
        members=[str(m) for m in fam],
        counts=count_decreasing_mountains(args.h, args.l),
    )
    rep.add("generate", Verdict.TRUE)


def cmd_mountains_omega(args, rep: RunReport) -> None:
    d = MountainSeq.parse(args.mountain)
    om = omega_sequence(d)
    rep.data.update(mountain=str(d), omega=str(om), degenerate=len(d.peaks) == 1)
    rep.add("omega", Verdict.TRUE)


def cmd_verify(args, rep: RunReport) -> None:
    b = _budget(args)
    kind = args.kind
    if kind == "two-cone":
        if not (args.g and args.h):
            raise InputError("verify two-cone needs --g and --h")
        r = verify_two_cone_theorem(load_digraph(args.g), load_digraph(args.h), b)
        rep.add("hypotheses", r.hypotheses, **r.to_json())
        rep.add("cone_product_is_core", r.conclusion, nodes=b.nodes)
    elif kind == "vsc":
        fam = _family(args)
        r = verify_vsc_conditions(fam, b, max_vertices=args.max_vertices)
        rep.data["family_report"] = r.to_json()
        for m in r.members:
            rep.add(f"member_{m.index}", m.verdict)
        if r.direct_core is not None:
            rep.add("direct_core", r.direct_core)
    elif kind == "gadget":
        if not (args.d1 and args.d2):
            raise InputError("verify gadget needs --d1 and --d2")
        r = verify_gadget_equivalence(load_digraph(args.d1), load_digraph(args.d2), b)
        rep.data["gadget_report"] = r.to_json()
        rep.add("hypothesis", r.hypothesis)
        rep.add("equivalence", r.equivalent)
        rep.add("restriction", r.restriction)
    elif kind == "mountain-family":
        if args.h is None or args.l is None:
            raise InputError("verify mountain-family needs --h and --l")
        fam = gen_decreasing_mountains(int(args.h), int(args.l))
        rep.data["counts"] = count_decreasing_mountains(int(args.h), int(args.l))
        for d in fam:
            try:
                r = separator_report(d, fam, budget=b)
            except (SearchBudgetExceeded, CapacityError) as exc:
                rep.add(f"separator_{d}", Verdict.INCONCLUSIVE, reason=str(exc))
                continue
            rep.add(
                f"separator_{d}",
                Verdict.of(r.separates and (len(fam) == 1 or r.independent)),
                omega=str(r.omega),
            )
    elif kind == "lattice":
        rng = random.Random(args.seed)
        failures = 0
        for _ in range(args.samples):
            k = rng.randint(1, args.k)
            a, b2, c = (random_sum(rng, k, args.elem_vertices) for _ in range(3))
            if not all(lattice_laws(a, b2, c).values()):
                failures += 1
        rep.add("lattice_laws", Verdict.of(failures == 0), samples=args.samples, failures=failures)
    else:  # pragma: no cover - argparse restricts choices
        raise InputError(f"unknown kind {kind}")


def _family(args) -> list[Digraph]:
    if args.files:
        return [load_digraph(f) for f in args.files]
    if args.family == "dm":
        if args.h is None or args.l is None:
            raise InputError("--family dm needs --h and --l")
        return [m.to_digraph() for m in gen_decreasing_mountains(int(args.h), int(args.l))]
    raise InputError("verify vsc needs --family dm or --files")


def cmd_gadget_build(args, rep: RunReport) -> None:
    gg = build_gadget_graph(load_digraph(args.file))
    write_out(args.output, format_digraph(gg.graph))
    if args.sidecar:
        Path(args.sidecar).write_text(json.dumps(gg.sidecar(), indent=2) + "\n")
    rep.data.update(stats(gg.graph))
    rep.add("gadget", Verdict.TRUE)


def cmd_export_dot(args, rep: RunReport) -> None:
    g = load_digraph(args.file)
    text = to_dot(g, Path(args.file).stem if Path(args.file).exists() else "G")
    if args.output:
        write_out(args.output, text)
    else:
        rep.data["dot"] = text
    rep.add("export", Verdict.TRUE)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=None,
                        help="search-node budget (default: $COREPROD_BUDGET_NODES or 1e8)")
    common.add_argument("--max-vertices", type=int, default=None,
                        help="refuse products larger than this")
    common.add_argument("--json", action="store_true", help="print the full JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    common.add_argument("--timing", action="store_true", help="include wall-clock seconds")

    ap = argparse.ArgumentParser(prog="coreprod", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, parents=[common], **kw)
        p.set_defaults(func=fn)
        return p

    p = add("parse", cmd_parse, help="parse a digraph or path file")
    p.add_argument("file")
    p = add("product", cmd_product, help="tensor product of digraph files")
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output")
    p = add("core", cmd_core, help="compute a core with a retraction")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--witness", help="write the retraction JSON here")
    p = add("is-core", cmd_is_core, help="decide coreness")
    p.add_argument("file")
    p = add("hom", cmd_hom, help="find a homomorphism")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--injective", action="store_true")
    for name, fn in (("orthogonal", cmd_orthogonal), ("orthogonalize", cmd_orthogonalize)):
        p = add(name, fn)
        p.add_argument("g")
        p.add_argument("h")
        if name == "orthogonalize":
            p.add_argument("-o", "--output", help="prefix for the two output files")

    mp = sub.add_parser("mountains", help="decreasing mountains")
    msub = mp.add_subparsers(dest="mcommand", required=True)
    p = msub.add_parser("gen", parents=[common])
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--all-subsets", action="store_true",
                   help="list every decreasing sequence, not only those starting at h-2")
    p.set_defaults(func=cmd_mountains_gen)
    p = msub.add_parser("omega", parents=[common])
    p.add_argument("mountain", help="literal such as 3,1@k=3")
    p.set_defaults(func=cmd_mountains_omega)

    p = add("verify", cmd_verify, help="run a theorem checker")
    p.add_argument("kind", choices=["two-cone", "vsc", "gadget", "mountain-family", "lattice"])
    p.add_argument("--g")
    p.add_argument("--h")
    p.add_argument("--l")
    p.add_argument("--d1")
    p.add_argument("--d2")
    p.add_argument("--family", choices=["dm"])
    p.add_argument("--files", nargs="+")
    p.add_argument("--k", type=int, default=4, help="lattice: largest height")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--elem-vertices", type=int, default=10)

    gp = sub.add_parser("gadget", help="gadget graphs")
    gsub = gp.add_subparsers(dest="gcommand", required=True)
    p = gsub.add_parser("build", parents=[common])
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--sidecar", help="write block bookkeeping JSON here")
    p.set_defaults(func=cmd_gadget_build)

    p = add("export-dot", cmd_export_dot, help="Graphviz export")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    return ap


def _summary(rep: RunReport) -> str:
    lines = [f"{rep.command}: {rep.verdict.value}"]
    for c in rep.checks:
        lines.append(f"  {c.name}: {c.verdict.value}")
    for k, v in rep.data.items():
        if k in ("dot", "family_report", "gadget_report", "retraction"):
            continue
        lines.append(f"  {k} = {json.dumps(v, sort_keys=True)}")
    if "dot" in rep.data:
        lines.append(rep.data["dot"].rstrip())
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    name = " ".join(
        x for x in (args.command, getattr(args, "mcommand", None), getattr(args, "gcommand", None),
                    getattr(args, "kind", None)) if x
    )
    rep = RunReport(name, timing=args.timing)
    try:
        args.func(args, rep)
    except (InputError, CapacityError, ValueError) as exc:
        print(f"coreprod: error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if getattr(args, "budget", None) is not None:
        rep.data["search_nodes"] = args.budget.nodes
    print(rep.dumps() if args.json else _summary(rep))
    return rep.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
