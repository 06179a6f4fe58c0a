"""Command-line front door.

Verbs: ``reduce`` (normal forms), ``complete`` (bounded completion),
``irr`` (irreducible-word counts), ``verify`` (the verification drivers),
``zmul`` (products in the free pre-commutative algebra on words), and
``embed`` (the power-series embedding check).

Every verb takes ``--json`` for a machine-readable report with the fields
{command, parameters, status, counts, failures, timings}.  Timings are
null unless ``--timings`` is given, so identical inputs produce
byte-identical reports.  Exit codes: 0 success/verified, 1 verification
failure, 2 input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import random

from .envelope import (
    collapse_check,
    default_alphabet,
    odd_even_zero_sweep,
    verify_trivial_envelope,
    verify_zinbiel_basis,
)
from .embed import (
    FilteredAlgebra,
    rb_apply,
    random_series,
    series_product,
    splitting_product,
    standard_filtration,
    verify_embedding,
)
from .magma import Alphabet
from .rewrite import (
    ZinbielFamily,
    complete,
    interreduce,
    irreducible_counts,
    irreducible_words,
    normal_form,
    normal_form_with_trace,
)
from .sexpr import (
    ParseError,
    format_poly,
    format_relations,
    format_word,
    format_zinb,
    parse_algebra,
    parse_aword,
    parse_poly,
    parse_relations,
)
from .shuffle import PermAlgebra, ZinbElement, perm_tensor_check, random_element, star, zinbiel_product

_VERIFY_TARGETS = ("zinbiel", "trivial-envelope", "odd-even", "collapse", "rb", "perm")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="precom",
        description="Exact rewriting in free pre-commutative algebras and "
                    "power-series embeddings of filtered commutative algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true",
                        help="emit a structured JSON report")
    common.add_argument("--timings", action="store_true",
                        help="include wall-clock timings in the report")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("reduce", parents=[common],
                       help="normal form of a tree polynomial modulo relations")
    p.add_argument("--relations", required=True, help="relation file")
    p.add_argument("--input", required=True, help="word or polynomial S-expression")
    p.add_argument("--bound", type=int, default=None,
                   help="instantiation bound (default: the input's max length)")
    p.add_argument("--strategy", choices=("largest", "smallest"), default="largest")

    p = sub.add_parser("complete", parents=[common],
                       help="bounded completion of a relation set")
    p.add_argument("--relations", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--interreduce", action="store_true",
                   help="minimalize and tail-reduce the completed set")

    p = sub.add_parser("irr", parents=[common],
                       help="irreducible words modulo a relation set")
    p.add_argument("--relations", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--words", action="store_true", help="list the words, not just counts")

    p = sub.add_parser("zmul", parents=[common],
                       help="product of dotted words in the free pre-commutative algebra")
    p.add_argument("--left", required=True, help="dotted word, e.g. x.y")
    p.add_argument("--right", required=True)
    p.add_argument("--star", action="store_true",
                   help="symmetrized product instead of the one-sided one")
    p.add_argument("--letters", default=None,
                   help="comma-separated alphabet order (default: sorted names)")

    p = sub.add_parser("verify", parents=[common], help="run a verification driver")
    p.add_argument("target", choices=_VERIFY_TARGETS)
    p.add_argument("--letters", type=int, default=None, help="alphabet size")
    p.add_argument("--bound", type=int, default=None, help="ambiguity/length bound")
    p.add_argument("--completion-bound", type=int, default=None,
                   help="trivial-envelope: bound for the completion cross-check "
                        "(default: --bound)")
    p.add_argument("--no-completion", action="store_true",
                   help="trivial-envelope: skip the completion cross-check")
    p.add_argument("--m-max", type=int, default=None, help="odd-even: odd length cap")
    p.add_argument("--k-max", type=int, default=None, help="odd-even: even length cap")
    p.add_argument("--algebra", default=None, help="collapse: algebra JSON file")
    p.add_argument("--count", type=int, default=None, help="rb: number of random trials")
    p.add_argument("--max-n", type=int, default=None, help="rb: max truncation degree")
    p.add_argument("--dim", type=int, default=None, help="perm: Perm-algebra dimension")
    p.add_argument("--triples", type=int, default=None, help="perm: number of triples")
    p.add_argument("--max-degree", type=int, default=None, help="perm: element degree cap")
    p.add_argument("--seed", type=int, default=0, help="random seed (rb, perm)")

    p = sub.add_parser("embed", parents=[common],
                       help="verify the power-series embedding of a filtered algebra")
    p.add_argument("--algebra", required=True, help="algebra JSON file")
    p.add_argument("--N", type=int, required=True, help="truncation degree")
    p.add_argument("--factor-bound", type=int, default=4,
                   help="lcm factor cap for the injectivity certificate")
    return parser


def _need(args, names: dict) -> None:
    missing = [flag for flag, value in names.items() if value is None]
    if missing:
        raise ValueError("verify %s requires %s"
                         % (args.target, ", ".join("--" + m for m in missing)))


def _load_relations(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_relations(fh.read())


def _load_algebra(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return parse_algebra(data)


def _gsb_failures(rep) -> list:
    return [{"f": format_poly(f.f), "g": format_poly(f.g),
             "ambiguity": format_word(f.ambiguity),
             "remainder": format_poly(f.normal_form)}
            for f in rep.failures]


def _handle_reduce(args):
    alphabet, relations = _load_relations(args.relations)
    poly = parse_poly(args.input, alphabet)
    if args.strategy == "largest":
        nf, trace = normal_form_with_trace(poly, relations, args.bound)
        steps = len(trace)
    else:
        nf = normal_form(poly, relations, args.bound, strategy=args.strategy)
        steps = None
    result = format_poly(nf)
    report = {"status": "ok", "counts": [], "failures": [],
              "result": result, "steps": steps}
    lines = [result] if steps is None else [result, "steps: %d" % steps]
    return 0, report, lines


def _handle_complete(args):
    alphabet, relations = _load_relations(args.relations)
    done = complete(relations, args.bound)
    if args.interreduce:
        done = interreduce(done)
    counts = irreducible_counts(done, alphabet, args.bound)
    text = format_relations(alphabet, done)
    report = {"status": "ok", "counts": counts, "failures": [],
              "relations_file": text,
              "relation_count": len(done)}
    lines = [text.rstrip("\n"), "irreducible counts: %s" % counts, "status: ok"]
    return 0, report, lines


def _handle_irr(args):
    alphabet, relations = _load_relations(args.relations)
    counts = irreducible_counts(relations, alphabet, args.bound)
    report = {"status": "ok", "counts": counts, "failures": []}
    lines = ["irreducible counts: %s" % counts]
    if args.words:
        table = irreducible_words(relations, alphabet, args.bound)
        report["words"] = {str(n): [format_word(w) for w in ws]
                           for n, ws in table.items()}
        for n in sorted(table):
            lines.append("length %d: %s" % (n, " ".join(map(format_word, table[n]))))
    lines.append("status: ok")
    return 0, report, lines


def _handle_zmul(args):
    if args.letters:
        names = [s for s in args.letters.split(",") if s]
    else:
        names = sorted(set(args.left.split(".")) | set(args.right.split(".")))
    alphabet = Alphabet(names)
    u = parse_aword(args.left, alphabet)
    v = parse_aword(args.right, alphabet)
    f, g = ZinbElement.word(u), ZinbElement.word(v)
    res = star(f, g) if args.star else zinbiel_product(f, g)
    result = format_zinb(res)
    report = {"status": "ok", "counts": [], "failures": [], "result": result}
    return 0, report, [result]


def _verify_zinbiel(args):
    _need(args, {"letters": args.letters, "bound": args.bound})
    rep = verify_zinbiel_basis(args.letters, args.bound)
    ab = default_alphabet(args.letters)
    counts = irreducible_counts([ZinbielFamily(ab)], ab, args.bound)
    failures = _gsb_failures(rep)
    lines = ["ambiguities checked: %d" % rep.ambiguities_checked,
             "irreducible counts: %s" % counts]
    return rep.verified, counts, failures, lines


def _verify_trivial_envelope(args):
    _need(args, {"letters": args.letters, "bound": args.bound})
    cb = args.completion_bound if args.completion_bound is not None else args.bound
    rep = verify_trivial_envelope(args.letters, args.bound,
                                  completion_bound=cb,
                                  run_completion=not args.no_completion)
    failures = _gsb_failures(rep.gsb)
    if rep.counts != rep.expected_counts:
        failures.append({"counts": rep.counts, "expected": rep.expected_counts})
    lines = ["ambiguities checked: %d" % rep.gsb.ambiguities_checked,
             "irreducible counts: %s (expected %s)"
             % (rep.counts, rep.expected_counts)]
    if rep.completion_counts is not None:
        lines.append("completion counts:  %s" % rep.completion_counts)
        if rep.completion_counts != rep.expected_counts[:len(rep.completion_counts)]:
            failures.append({"completion_counts": rep.completion_counts,
                             "expected": rep.expected_counts[:len(rep.completion_counts)]})
    return rep.verified, rep.counts, failures, lines


def _verify_odd_even(args):
    _need(args, {"letters": args.letters, "m-max": args.m_max, "k-max": args.k_max})
    rep = odd_even_zero_sweep(args.letters, args.m_max, args.k_max)
    failures = [{"a": format_word(a), "b": format_word(b),
                 "normal_form": format_poly(nf)} for a, b, nf in rep.violations]
    return rep.verified, [rep.checked], failures, ["products checked: %d" % rep.checked]


def _verify_collapse(args):
    _need(args, {"algebra": args.algebra, "bound": args.bound})
    A, _levels = _load_algebra(args.algebra)
    rep = collapse_check(A, args.bound)
    failures = [{"x": x.name, "y": y.name, "star": format_poly(got),
                 "expected": format_poly(want)}
                for x, y, got, want in rep.mismatches]
    lines = ["irreducible counts: %s" % rep.counts]
    for (x, y), got in sorted(rep.star_table.items(),
                              key=lambda t: (t[0][0].rank, t[0][1].rank)):
        lines.append("%s * %s = %s" % (x.name, y.name, format_poly(got)))
    return rep.matches_structure, rep.counts, failures, lines


def _verify_rb(args):
    _need(args, {"count": args.count, "max-n": args.max_n})
    rng = random.Random(args.seed)
    failures = []
    for i in range(args.count):
        N = rng.randint(2, args.max_n)
        a, b, c = (random_series(rng, N) for _ in range(3))
        ra, rb_ = rb_apply(a), rb_apply(b)
        lhs = series_product(ra, rb_)
        rhs = rb_apply(series_product(ra, b) + series_product(a, rb_))
        if lhs != rhs:
            failures.append({"trial": i, "identity": "rota-baxter"})
        zl = splitting_product(a, splitting_product(b, c))
        zr = (splitting_product(splitting_product(a, b), c)
              + splitting_product(splitting_product(b, a), c))
        if zl != zr:
            failures.append({"trial": i, "identity": "pre-commutative"})
    lines = ["trials: %d (seed %d)" % (args.count, args.seed)]
    return not failures, [args.count], failures, lines


def _verify_perm(args):
    _need(args, {"dim": args.dim, "triples": args.triples,
                 "max-degree": args.max_degree})
    rng = random.Random(args.seed)
    alphabet = default_alphabet(2)
    samples = [tuple(random_element(rng, alphabet, args.max_degree)
                     for _ in range(3))
               for _ in range(args.triples)]
    rep = perm_tensor_check(PermAlgebra(args.dim), samples)
    failures = []
    for i, j, f, g in rep.commutativity_violations:
        failures.append({"identity": "commutativity", "i": i, "j": j,
                         "f": format_zinb(f), "g": format_zinb(g)})
    for i, j, k, f, g, h in rep.associativity_violations:
        failures.append({"identity": "associativity", "i": i, "j": j, "k": k,
                         "f": format_zinb(f), "g": format_zinb(g),
                         "h": format_zinb(h)})
    lines = ["basis-paired triples checked: %d (seed %d)"
             % (rep.triples_checked, args.seed)]
    return rep.verified, [rep.triples_checked], failures, lines


_VERIFY = {
    "zinbiel": _verify_zinbiel,
    "trivial-envelope": _verify_trivial_envelope,
    "odd-even": _verify_odd_even,
    "collapse": _verify_collapse,
    "rb": _verify_rb,
    "perm": _verify_perm,
}


def _handle_verify(args):
    ok, counts, failures, lines = _VERIFY[args.target](args)
    status = "verified" if ok else "failed"
    report = {"status": status, "counts": counts, "failures": failures}
    lines = lines + ["status: %s" % status]
    return (0 if ok else 1), report, lines


def _handle_embed(args):
    A, levels = _load_algebra(args.algebra)
    F = FilteredAlgebra(A, levels) if levels is not None else standard_filtration(A)
    rep = verify_embedding(F, args.N, args.factor_bound)
    failures = []
    for x, y, l, poly in rep.homomorphism_failures:
        failures.append({"kind": "homomorphism", "x": x, "y": y,
                         "degree": l, "residue": repr(poly)})
    for x, y, z, l, poly in rep.splitting_failures:
        failures.append({"kind": "pre-commutative", "x": x, "y": y, "z": z,
                         "degree": l, "residue": repr(poly)})
    for p in rep.linear_leadings:
        failures.append({"kind": "linear-leading", "relation": repr(p)})
    status = "verified" if rep.verified else "failed"
    report = {
        "status": status,
        "counts": [rep.relation_count, len(rep.buchberger.added)],
        "failures": failures,
        "levels": {x.name: F.level(x) for x in F.basis},
        "injectivity_certified_to": rep.injectivity_certified_to,
    }
    lines = [
        "adapted basis levels: %s"
        % ", ".join("%s:%d" % (x.name, F.level(x)) for x in F.basis),
        "coefficient relations: %d (completion added %d)"
        % (rep.relation_count, len(rep.buchberger.added)),
        rep.notes,
        "status: %s" % status,
    ]
    return (0 if rep.verified else 1), report, lines


_HANDLERS = {
    "reduce": _handle_reduce,
    "complete": _handle_complete,
    "irr": _handle_irr,
    "zmul": _handle_zmul,
    "verify": _handle_verify,
    "embed": _handle_embed,
}


def _parameters(args) -> dict:
    skip = {"verb", "json", "timings"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k.replace("_", "-")] = v
    return out


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code, report, lines = _HANDLERS[args.verb](args)
    except (ParseError, ValueError, OSError, json.JSONDecodeError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    command = args.verb if args.verb != "verify" else "verify %s" % args.target
    full = {"command": command, "parameters": _parameters(args),
            "timings": ({"total_s": round(time.perf_counter() - t0, 3)}
                        if args.timings else None)}
    full.update(report)
    if args.json:
        print(json.dumps(full, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
    return code


if __name__ == "__main__":
    sys.exit(main())
