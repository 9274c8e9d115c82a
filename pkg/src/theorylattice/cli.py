"""Batch command-line front door.

Subcommands load signatures, pools, and models from files, build the
lattice of theories, and run queries or exports.  All outputs are
deterministic.  Exit codes: 0 success (and positive answers), 1 negative
``entail``/``leq``/``check`` answers, 2 input errors (with file and line
diagnostics where available), 3 size-cap refusals.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import fca, nav
from .errors import (
    InfomorphismError,
    ParseError,
    PoolMembershipError,
    SignatureMismatchError,
    SizeCapError,
)
from .logic import (
    DEFAULT_MODEL_CAP,
    Formula,
    Signature,
    parse_model,
    parse_sentence,
    parse_sentences,
    parse_signature,
    sentence_key,
)
from .morph import (
    concept_morphism,
    parse_interpretation,
    parse_morphism,
    truth_infomorphism,
)
from .truth import (
    ClosedTheory,
    TheoryLattice,
    TruthClassification,
    build_truth_classification,
    closure,
    entails,
    lattice_text,
    theory_lattice,
)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_signature(path: str) -> Signature:
    return parse_signature(_read(path), path=path)


def load_sentences(sig: Signature, path: str) -> tuple[Formula, ...]:
    return parse_sentences(sig, _read(path), path=path)


def parse_carrier_spec(specs: Sequence[str]) -> dict[str, list[str]]:
    """Parse repeated ``SORT=e1,e2`` flags; ``;`` separates sorts in one flag."""
    out: dict[str, list[str]] = {}
    for spec in specs:
        for part in spec.split(";"):
            part = part.strip()
            if not part:
                continue
            sort, sep, elems = part.partition("=")
            sort = sort.strip()
            if not sep or not sort:
                raise ParseError(f"bad carrier spec {part!r}; expected SORT=e1,e2")
            if sort in out:
                raise ParseError(f"duplicate carrier spec for {sort!r}")
            elements = [e.strip() for e in elems.split(",") if e.strip()]
            if not elements:
                raise ParseError(f"carrier spec for {sort!r} lists no elements")
            out[sort] = elements
    return out


def _add_model_source(p: argparse.ArgumentParser, prefix: str = "") -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument(
        f"--{prefix}carriers",
        action="append",
        metavar="SORT=e1,e2",
        help="enumerate all structures over these carriers (repeatable; ';' separates sorts)",
    )
    group.add_argument(
        f"--{prefix}model",
        action="append",
        metavar="FILE",
        help="an explicit model file (repeatable)",
    )


def _add_semantics(p: argparse.ArgumentParser, prefix: str = "", pool_required: bool = True) -> None:
    dash = f"--{prefix}"
    p.add_argument(f"{dash}sig", required=True, metavar="FILE", help="signature file")
    p.add_argument(
        f"{dash}pool",
        required=pool_required,
        metavar="FILE",
        help="sentence pool file" + ("" if pool_required else " (optional)"),
    )
    _add_model_source(p, prefix)


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cap-models", type=int, default=DEFAULT_MODEL_CAP, metavar="N")
    p.add_argument("--cap-concepts", type=int, default=fca.DEFAULT_CONCEPT_CAP, metavar="N")


def build_tc(args: argparse.Namespace, prefix: str = "") -> TruthClassification:
    get = lambda name: getattr(args, (prefix + name).replace("-", "_"))
    sig = load_signature(get("sig"))
    pool_path = get("pool")
    pool = load_sentences(sig, pool_path) if pool_path else ()
    carriers = get("carriers")
    if carriers is not None:
        return build_truth_classification(
            sig, pool, carriers=parse_carrier_spec(carriers), model_cap=args.cap_models
        )
    models = [parse_model(sig, _read(path), path=path) for path in get("model")]
    return build_truth_classification(sig, pool, models=models)


def load_theory(tc: TruthClassification, path: str) -> tuple[Formula, ...]:
    return load_sentences(tc.signature, path)


def _emit(args: argparse.Namespace, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _print_theory(theory: ClosedTheory) -> None:
    for key in theory.keys():
        print(key)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_lattice(args: argparse.Namespace) -> int:
    tc = build_tc(args)
    lat = theory_lattice(tc, concept_cap=args.cap_concepts)
    if args.format == "text":
        _emit(args, lattice_text(lat))
    elif args.format == "dot":
        _emit(args, fca.lattice_dot(lat.lattice))
    else:
        _emit(args, fca.write_cxt(tc.classification, "truth"))
    return 0


def cmd_close(args: argparse.Namespace) -> int:
    tc = build_tc(args)
    _print_theory(closure(tc, load_theory(tc, args.theory)))
    return 0


def cmd_entail(args: argparse.Namespace) -> int:
    tc = build_tc(args)
    theory = load_theory(tc, args.theory)
    query = parse_sentence(tc.signature, args.query)
    answer = entails(tc, theory, query)
    print("true" if answer else "false")
    return 0 if answer else 1


def cmd_leq(args: argparse.Namespace) -> int:
    tc = build_tc(args)
    t1 = load_theory(tc, args.theory)
    t2 = load_theory(tc, args.theory2)
    answer = all(entails(tc, t1, s) for s in t2)
    print("true" if answer else "false")
    return 0 if answer else 1


def cmd_nav(args: argparse.Namespace) -> int:
    tc = build_tc(args)
    lat = theory_lattice(tc, concept_cap=args.cap_concepts)
    start = closure(tc, load_theory(tc, args.start) if args.start else ())
    sig = tc.signature

    def load_map(path: str):
        return parse_morphism(sig, sig, _read(path), path=path)

    steps = nav.apply_nav_script(lat, start, _read(args.script), load_morphism=load_map, path=args.script)
    for k, step in enumerate(steps, start=1):
        result = lat.theories[step.result]
        body = "; ".join(result.keys()) if result.axioms else "(none)"
        print(f"{k} {step.kind} -> theory {step.result}: {body}")
    return 0


def cmd_analogy(args: argparse.Namespace) -> int:
    tc1 = build_tc(args)
    lat1 = theory_lattice(tc1, concept_cap=args.cap_concepts)
    if args.dst_sig:
        if not args.dst_pool or not (args.dst_carriers or args.dst_model):
            raise ParseError(
                "--dst-sig needs --dst-pool and one of --dst-carriers/--dst-model"
            )
        tc2 = build_tc(args, prefix="dst-")
        lat2 = theory_lattice(tc2, concept_cap=args.cap_concepts)
    else:
        tc2, lat2 = tc1, lat1
    f = parse_morphism(tc1.signature, tc2.signature, _read(args.map), path=args.map)
    theory = closure(tc1, load_theory(tc1, args.theory))
    _print_theory(nav.analogy(f, lat1, lat2, theory))
    return 0


def _load_interpretation(args: argparse.Namespace, src: Signature, dst: Signature):
    text = _read(args.map)
    if args.kind == "morphism":
        return parse_morphism(src, dst, text, path=args.map)
    return parse_interpretation(src, dst, text, path=args.map)


def cmd_interp_check(args: argparse.Namespace) -> int:
    tc1 = build_tc(args)
    tc2 = build_tc(args, prefix="dst-")
    try:
        truth_infomorphism(_load_interpretation(args, tc1.signature, tc2.signature), tc1, tc2)
    except InfomorphismError as exc:
        print(f"false: {exc}")
        return 1
    print("true")
    return 0


def cmd_interp_apply(args: argparse.Namespace) -> int:
    tc1 = build_tc(args)
    tc2 = build_tc(args, prefix="dst-")
    im = truth_infomorphism(_load_interpretation(args, tc1.signature, tc2.signature), tc1, tc2)
    lat1 = theory_lattice(tc1, concept_cap=args.cap_concepts)
    lat2 = theory_lattice(tc2, concept_cap=args.cap_concepts)
    cm = concept_morphism(im, lat1, lat2)
    if args.direction == "dir":
        theory = closure(tc1, load_theory(tc1, args.theory))
        _print_theory(cm.dir(theory))
    else:
        theory = closure(tc2, load_theory(tc2, args.theory))
        _print_theory(cm.inv(theory))
    return 0


def cmd_ctx_concepts(args: argparse.Namespace) -> int:
    ctx = fca.read_cxt(_read(args.cxt), path=args.cxt)
    lat = fca.concept_lattice(ctx, cap=args.cap_concepts)
    if args.format == "dot":
        _emit(args, fca.lattice_dot(lat))
        return 0
    if args.format == "cxt":
        _emit(args, fca.write_cxt(ctx))
        return 0
    lines = [f"concepts: {len(lat.concepts)}"]
    for k, c in enumerate(lat.concepts):
        extent = ", ".join(sorted(map(str, c.extent)))
        intent = ", ".join(sorted(map(str, c.intent)))
        lines.append(f"concept {k}: extent {{{extent}}} intent {{{intent}}}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="theorylattice",
        description="Build lattices of theories over finite model sets and query them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="build the lattice of theories and export it")
    _add_semantics(p)
    _add_caps(p)
    p.add_argument("--format", choices=("text", "dot", "cxt"), default="text")
    p.add_argument("--out", metavar="FILE", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("close", help="print the closure of a theory")
    _add_semantics(p)
    _add_caps(p)
    p.add_argument("--theory", required=True, metavar="FILE")
    p.set_defaults(func=cmd_close)

    p = sub.add_parser("entail", help="does a theory entail a sentence? (exit 1 if not)")
    _add_semantics(p, pool_required=False)
    _add_caps(p)
    p.add_argument("--theory", required=True, metavar="FILE")
    p.add_argument("--query", required=True, metavar="SENTENCE")
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("leq", help="is the first theory below the second? (exit 1 if not)")
    _add_semantics(p, pool_required=False)
    _add_caps(p)
    p.add_argument("--theory", required=True, metavar="FILE", help="the candidate lower theory")
    p.add_argument("--theory2", required=True, metavar="FILE", help="the candidate upper theory")
    p.set_defaults(func=cmd_leq)

    p = sub.add_parser("nav", help="replay a navigation script")
    _add_semantics(p)
    _add_caps(p)
    p.add_argument("--start", metavar="FILE", help="starting theory (default: the top)")
    p.add_argument("--script", required=True, metavar="FILE")
    p.set_defaults(func=cmd_nav)

    p = sub.add_parser("analogy", help="transport a theory along a renaming")
    _add_semantics(p)
    p.add_argument("--dst-sig", metavar="FILE", help="destination signature (default: source)")
    p.add_argument("--dst-pool", metavar="FILE")
    p.add_argument("--dst-carriers", action="append", metavar="SORT=e1,e2")
    p.add_argument("--dst-model", action="append", metavar="FILE")
    _add_caps(p)
    p.add_argument("--map", required=True, metavar="FILE", help="morphism file")
    p.add_argument("--theory", required=True, metavar="FILE")
    p.set_defaults(func=cmd_analogy)

    p = sub.add_parser("interp", help="interpretation-induced infomorphisms")
    isub = p.add_subparsers(dest="subcommand", required=True)
    for name, func in (("check", cmd_interp_check), ("apply", cmd_interp_apply)):
        q = isub.add_parser(
            name,
            help="validate the induced infomorphism" if name == "check" else "apply dir or inv",
        )
        _add_semantics(q)
        q.add_argument("--dst-sig", required=True, metavar="FILE")
        q.add_argument("--dst-pool", required=True, metavar="FILE")
        dst_group = q.add_mutually_exclusive_group(required=True)
        dst_group.add_argument("--dst-carriers", action="append", metavar="SORT=e1,e2")
        dst_group.add_argument("--dst-model", action="append", metavar="FILE")
        _add_caps(q)
        q.add_argument("--map", required=True, metavar="FILE")
        q.add_argument(
            "--kind",
            choices=("interpretation", "morphism"),
            default="interpretation",
            help="how to read the map file",
        )
        if name == "apply":
            q.add_argument("--direction", choices=("dir", "inv"), default="dir")
            q.add_argument(
                "--theory",
                required=True,
                metavar="FILE",
                help="over the source for dir, over the destination for inv",
            )
        q.set_defaults(func=func)

    p = sub.add_parser("ctx", help="pure formal-context operations")
    csub = p.add_subparsers(dest="subcommand", required=True)
    q = csub.add_parser("concepts", help="enumerate the concepts of a .cxt context")
    q.add_argument("--cxt", required=True, metavar="FILE")
    q.add_argument("--format", choices=("text", "dot", "cxt"), default="text")
    q.add_argument("--out", metavar="FILE")
    q.add_argument("--cap-concepts", type=int, default=fca.DEFAULT_CONCEPT_CAP, metavar="N")
    q.set_defaults(func=cmd_ctx_concepts)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, PoolMembershipError, SignatureMismatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run_main()
