"""``cox``: command-line front end.

Exit codes: 0 success, 1 usage or parse error, 2 numerical ambiguity,
3 a verifier found counterexamples, 4 resource limit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

from . import certificates as cert
from . import classify, parabolic, words
from .core import (
    INF,
    CoxeterSystem,
    GenSubset,
    format_order,
    irreducible_components,
    parse_system,
    product_order,
    restrict,
    serialize,
    validate,
)
from .errors import CoxeterError, NumericalAmbiguity, ResourceLimit

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_COUNTEREXAMPLE, EXIT_RESOURCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunReport:
    command: str
    system_digest: str
    verdicts: dict
    elapsed_ms: int
    text: str = ""
    exit_code: int = EXIT_OK


def load_system(path: str) -> CoxeterSystem:
    p = Path(path)
    if not p.exists():
        bundled = files("coxdense") / "fixtures" / p.name
        if bundled.is_file():
            return parse_system(bundled.read_text(encoding="utf-8"))
        raise UsageError(f"no such diagram file: {path}")
    return parse_system(p.read_text(encoding="utf-8"))


def matrix_json(system):
    return [[format_order(v) if v is INF else v for v in row] for row in system.matrix.entries]


def _order(v):
    return "inf" if v is INF else v


def _labels(system, subset):
    mask = subset.mask if isinstance(subset, GenSubset) else subset
    return system.labels(mask)


def _set(system, subset):
    return "{" + ",".join(_labels(system, subset)) + "}"


def _word(system, nf):
    return words.word_string(system, nf)


def _subset_arg(system, text, name="--t"):
    if text is None:
        raise UsageError(f"{name} is required")
    return system.parse_subset(text)


def _gen_arg(system, label):
    return system.index(label.strip())


def _nonneg_radius(args):
    if args.radius < 0:
        raise UsageError("--radius must be nonnegative")
    return args.radius


# ------------------------------------------------------------------ commands

def cmd_validate(system, args):
    problems = validate(system.matrix)
    return {"valid": not problems, "violations": problems}, "valid" if not problems else "\n".join(problems)


def cmd_components(system, args):
    comps = irreducible_components(system)
    verdict = {"components": [_labels(system, c) for c in comps]}
    return verdict, "\n".join(_set(system, c) for c in comps)


def cmd_restrict(system, args):
    sub = restrict(system, _subset_arg(system, args.t))
    return {"restricted": {"names": list(sub.names), "matrix": matrix_json(sub)}}, serialize(sub).rstrip()


def cmd_order(system, args):
    o = product_order(system, _gen_arg(system, args.s), _gen_arg(system, args.u))
    return {"s": args.s, "t": args.u, "order": _order(o)}, f"o({args.s}{args.u}) = {format_order(o)}"


def cmd_classify(system, args):
    T = system.full() if args.t is None else system.parse_subset(args.t)
    v = classify.classify_subset(system, T)
    comps = [
        {"generators": _labels(system, c.subset), "type": c.tag, "order": _order(c.order)}
        for c in v.components
    ]
    verdict = {"subset": _labels(system, T), "finite": v.finite, "components": comps,
               "total_order": _order(v.total_order)}
    lines = [f"W_T for T = {_set(system, T)}: {'finite' if v.finite else 'infinite'}, "
             f"order {format_order(v.total_order)}"]
    lines += [f"  {_set(system, c.subset)}  {c.tag}  {format_order(c.order)}" for c in v.components]
    return verdict, "\n".join(lines)


def cmd_spherical(system, args):
    if args.maximal:
        subsets = classify.maximal_spherical_subsets(system)
        return ({"maximal": True, "subsets": [_labels(system, u) for u in subsets]},
                "\n".join(_set(system, u) for u in subsets))
    T = _subset_arg(system, args.t, "--t (or --maximal)")
    sph = classify.is_spherical(system, T)
    return {"subset": _labels(system, T), "spherical": sph}, f"{_set(system, T)} spherical: {sph}"


def cmd_essential(system, args):
    if args.t is None:
        ess = classify.essential_subset(system)
    else:
        ess = classify.essential_of(system, system.parse_subset(args.t))
    return {"essential": _labels(system, ess)}, _set(system, ess)


def cmd_ball(system, args):
    R = _nonneg_radius(args)
    ball = words.enumerate_ball(system, R, eps=args.eps)
    verdict = {"radius": R, "size": len(ball), "counts": ball.counts()}
    text = f"|ball({R})| = {len(ball)}\nper length: {ball.counts()}"
    if args.dump and not args.count_only:
        verdict["elements"] = [
            {"nf": _word(system, ball.nf(i)), "length": int(ball.length[i]),
             "right_descents": _labels(system, int(ball.dr[i])),
             "left_descents": _labels(system, int(ball.dl[i])),
             "right_neighbors": [int(x) for x in ball.radj[i]]}
            for i in range(len(ball))
        ]
        text += "\n" + "\n".join(e["nf"] for e in verdict["elements"])
    return verdict, text


def _elem(system, text, args):
    return words.element(system, text, eps=args.eps)


def cmd_nf(system, args):
    nf = words.normal_form(_elem(system, args.word, args))
    word = _word(system, nf)
    return {"word": args.word, "nf": word, "length": len(nf)}, f"{word}  (length {len(nf)})"


def cmd_descents(system, args):
    w = _elem(system, args.word, args)
    r, l = words.descent_set(w, "right"), words.descent_set(w, "left")
    verdict = {"nf": w.word(), "right": _labels(system, r), "left": _labels(system, l)}
    return verdict, f"right {_set(system, r)}  left {_set(system, l)}"


def cmd_inverse(system, args):
    w = words.inverse(_elem(system, args.word, args))
    return {"inverse": w.word()}, w.word()


def cmd_equals(system, args):
    eq = words.equals(_elem(system, args.word1, args), _elem(system, args.word2, args))
    return {"equal": eq}, str(eq)


def cmd_distance(system, args):
    d = words.word_distance(_elem(system, args.word1, args), _elem(system, args.word2, args))
    return {"distance": d}, str(d)


def cmd_support(system, args):
    sup = parabolic.support(_elem(system, args.word, args))
    return {"support": _labels(system, sup)}, _set(system, sup)


def cmd_member(system, args):
    w = _elem(system, args.word, args)
    T = _subset_arg(system, args.t)
    verdict = {"nf": w.word(), "subset": _labels(system, T),
               "in_descent_class": parabolic.in_descent_class(w, T),
               "in_A_T": parabolic.in_A_T(w, T)}
    return verdict, (f"S(w) = T: {verdict['in_descent_class']}\n"
                     f"no descent in T (A_T): {verdict['in_A_T']}")


def cmd_decompose(system, args):
    u, v = parabolic.coset_decompose(_elem(system, args.word, args), _subset_arg(system, args.t))
    return {"u": u.word(), "v": v.word()}, f"u = {u.word()}\nv = {v.word()}"


def cmd_index(system, args):
    T = _subset_arg(system, args.t)
    idx = parabolic.index(system, T)
    return {"subset": _labels(system, T), "index": _order(idx)}, f"[W : W_T] = {format_order(idx)}"


def cmd_theorem_set(system, args):
    T = _subset_arg(system, args.t)
    gens = cert.theorem_generator_set(system, T)
    verdict = {"subset": _labels(system, T),
               "T_tilde": _labels(system, classify.essential_of(system, T)),
               "generators": _labels(system, gens)}
    return verdict, f"union of W^{{s}} for s in {_set(system, gens)}"


def _witness_json(system, w):
    return {"U": _labels(system, w.U), "s": system.names[w.s], "u0": system.names[w.u0],
            "condition": w.condition, "T_tilde": _labels(system, w.T_tilde),
            "via": _labels(system, w.via)}


def cmd_check_corollary(system, args):
    T = _subset_arg(system, args.t)
    found = cert.check_corollary(system, T, inherit=not args.direct)
    verdict = {"subset": _labels(system, T), "witnesses": [_witness_json(system, w) for w in found]}
    if not found:
        return verdict, "no witness (the corollary is inconclusive for this T)"
    lines = []
    for w in found:
        line = (f"U={_set(system, w.U)} s={system.names[w.s]} u0={system.names[w.u0]} "
                f"condition {w.condition}")
        if w.via != T:
            line += f"  (via T'={_set(system, w.via)})"
        lines.append(line)
    return verdict, "\n".join(lines)


def cmd_certificate(system, args):
    pairs = cert.check_quasidense_certificate(system)
    verdict = {"certificates": [{"U": _labels(system, U), "s0": system.names[s]} for U, s in pairs]}
    text = "\n".join(f"U={_set(system, U)} s0={system.names[s]}: W^{{{system.names[s]}}} quasi-dense"
                     for U, s in pairs) or "no certificate"
    return verdict, text


def cmd_density(system, args):
    if (args.t is None) == (args.target_gen is None):
        raise UsageError("give exactly one of --t or --target-gen")
    if args.t is not None:
        T = system.parse_subset(args.t)
        gens = cert.theorem_generator_set(system, T)
        desc = f"theorem set for T={_set(system, T)}: union of W^{{s}}, s in {_set(system, gens)}"
    else:
        gens = system.parse_subset(args.target_gen)
        desc = f"union of W^{{s}}, s in {_set(system, gens)}"
    R = _nonneg_radius(args)
    prof = cert.density_profile(system, cert.DescentClassUnion(gens), R, args.margin,
                                description=desc, eps=args.eps)
    rows = [{"r": row.radius, "max_distance": row.max_distance, "witness": _word(system, row.witness),
             "boundary_reliable": row.boundary_reliable} for row in prof.rows]
    verdict = {"target": desc, "R": R, "margin": args.margin, "target_in_ball": prof.target_size,
               "rows": rows}
    lines = [desc, f"R={R} margin={args.margin} target elements in ball: {prof.target_size}",
             "  r  max_dist  reliable  witness"]
    for row in rows:
        md = "inf" if row["max_distance"] is None else row["max_distance"]
        lines.append(f"{row['r']:3d}  {md!s:>8}  {row['boundary_reliable']!s:>8}  {row['witness']}")
    return verdict, "\n".join(lines)


def cmd_invariance(system, args):
    T = _subset_arg(system, args.t)
    inv = cert.check_w_invariance(system, T)
    return {"subset": _labels(system, T), "w_invariant": inv}, f"W-invariant: {inv}"


def cmd_sweep(system, args):
    R = _nonneg_radius(args)
    counts, margin = words.sign_sweep(system, R, eps=args.eps)
    verdict = {"radius": R, "elements": sum(counts), "counts": counts, "ambiguous": 0,
               "min_root_size": round(margin, 6)}
    return verdict, f"{sum(counts)} elements to radius {R}, every root sign certified (eps={args.eps:g})"


def cmd_verify(system, args):
    R = _nonneg_radius(args)
    lemma = args.lemma
    if lemma == "2.7":
        if args.chain is not None:
            chain = tuple(_gen_arg(system, x) for x in args.chain.split(",") if x.strip())
            cases = [(_subset_arg(system, args.t), chain)]
        else:
            cases = cert.lemma_2_7_instances(system, args.max_chain)
        ball = words.enumerate_ball(system, R + max([len(c) for _, c in cases], default=0),
                                    eps=args.eps)
        results = []
        total = 0
        for T, chain in cases:
            bad = cert.verify_lemma_2_7(system, T, chain, R, ball=ball)
            total += len(bad)
            results.append({"T": _labels(system, T), "chain": [system.names[c] for c in chain],
                            "counterexamples": [_word(system, b) for b in bad]})
        verdict = {"lemma": lemma, "radius": R, "instances": len(cases), "counterexamples": total,
                   "results": results}
        return verdict, f"{len(cases)} instances, {total} counterexamples", total != 0
    if lemma == "descent-extension":
        bad = cert.verify_descent_extension(system, R)
        verdict = {"lemma": lemma, "radius": R, "counterexamples": len(bad),
                   "violators": [{"w": _word(system, w), "s0": system.names[s]} for w, s in bad]}
        return verdict, f"{len(bad)} counterexamples", bool(bad)
    if lemma == "commuting-set":
        T = _subset_arg(system, args.t)
        U, rep = cert.estimate_commuting_set(system, T, R, args.window)
        verdict = {"lemma": lemma, "radius": R, "T": _labels(system, T),
                   "T_tilde": _labels(system, rep.T_tilde), "U_est": _labels(system, U),
                   "counts": {system.names[s]: list(c) for s, c in rep.counts.items()},
                   "stabilized": {system.names[s]: v for s, v in rep.stabilized.items()},
                   "violations": [[system.names[t], system.names[u]] for t, u in rep.violations],
                   "discrepancy": rep.discrepancy}
        text = f"U_est = {_set(system, U)}; discrepancy: {rep.discrepancy}"
        return verdict, text, rep.discrepancy
    if lemma == "infinite-intersection":
        T = _subset_arg(system, args.t)
        if args.s is not None:
            gens = [_gen_arg(system, args.s)]
        else:
            t_tilde = classify.essential_of(system, T)
            gens = [s for s in range(system.rank) if s not in T
                    and any(not (s == t or system.m(s, t) == 2) for t in t_tilde)]
        ball = words.enumerate_ball(system, R + 1, eps=args.eps)
        tables = [cert.verify_infinite_intersection(system, T, s, R, ball=ball) for s in gens]
        verdict = {"lemma": lemma, "radius": R, "T": _labels(system, T),
                   "tables": [{"s": system.names[t.s], "counts": list(t.counts),
                               "monotone": t.monotone, "strictly_increasing": t.strictly_increasing,
                               "checkpoints": list(t.checkpoints)} for t in tables]}
        text = "\n".join(f"{system.names[t.s]}: {list(t.counts)}  ok={t.ok}" for t in tables)
        return verdict, text, not all(t.ok for t in tables)
    if lemma == "index":
        subsets = ([_subset_arg(system, args.t)] if args.t is not None else
                   [GenSubset(m, system.rank) for m in range(1 << system.rank)])
        ball = words.enumerate_group(system, eps=args.eps)
        results = [{"T": _labels(system, T), "holds": cert.verify_index_lemma(system, T, ball=ball)}
                   for T in subsets]
        failures = sum(not r["holds"] for r in results)
        verdict = {"lemma": lemma, "group_order": len(ball), "results": results, "failures": failures}
        return verdict, f"{len(results)} subsets checked, {failures} failures", failures != 0
    raise UsageError(f"unknown lemma {lemma!r}")


COMMANDS = {
    "validate": cmd_validate,
    "components": cmd_components,
    "restrict": cmd_restrict,
    "order": cmd_order,
    "classify": cmd_classify,
    "spherical": cmd_spherical,
    "essential": cmd_essential,
    "ball": cmd_ball,
    "nf": cmd_nf,
    "descents": cmd_descents,
    "inverse": cmd_inverse,
    "equals": cmd_equals,
    "distance": cmd_distance,
    "support": cmd_support,
    "member": cmd_member,
    "decompose": cmd_decompose,
    "index": cmd_index,
    "theorem-set": cmd_theorem_set,
    "check-corollary": cmd_check_corollary,
    "certificate": cmd_certificate,
    "density": cmd_density,
    "invariance": cmd_invariance,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("diagram", help="diagram file (bundled fixture names also work)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    common.add_argument("--eps", type=float, default=words.EPS, help="root sign threshold")
    common.add_argument("--timing", action="store_true", help="include elapsed_ms in the output")

    parser = _Parser(prog="cox", description="Coxeter-system combinatorics and density certificates")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    add("validate", "check the Coxeter matrix conditions")
    add("components", "irreducible components")
    add("restrict", "parabolic subsystem on T").add_argument("--t")
    p = add("order", "order of the product of two generators")
    p.add_argument("s")
    p.add_argument("u")
    add("classify", "finite-type classification of W_T").add_argument("--t")
    p = add("spherical", "spherical subsets")
    p.add_argument("--t")
    p.add_argument("--maximal", action="store_true")
    add("essential", "essential subset of S (or of T with --t)").add_argument("--t")
    p = add("ball", "enumerate a Cayley ball")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--dump", action="store_true")
    for name, text in [("nf", "ShortLex normal form"), ("descents", "left and right descents"),
                       ("inverse", "inverse element"), ("support", "generators in the support")]:
        add(name, text).add_argument("word")
    for name, text in [("equals", "equality of two words"), ("distance", "word-metric distance")]:
        p = add(name, text)
        p.add_argument("word1")
        p.add_argument("word2")
    p = add("member", "membership in W^T and A_T")
    p.add_argument("word")
    p.add_argument("--t")
    p = add("decompose", "minimal coset decomposition w = u v")
    p.add_argument("word")
    p.add_argument("--t")
    add("index", "index of W_T in W").add_argument("--t")
    add("theorem-set", "generators of the density theorem's target set").add_argument("--t")
    p = add("check-corollary", "witnesses of the density corollary")
    p.add_argument("--t")
    p.add_argument("--direct", action="store_true", help="only witnesses for T itself")
    add("certificate", "quasi-density certificates (U, s0)")
    p = add("density", "empirical quasi-density profile")
    p.add_argument("--t")
    p.add_argument("--target-gen")
    p.add_argument("--radius", type=int, default=10)
    p.add_argument("--margin", type=int, default=4)
    add("invariance", "W-invariance criterion for the boundary of W_T").add_argument("--t")
    add("sweep", "sign-check every root vector to a radius").add_argument(
        "--radius", type=int, required=True)
    p = add("verify", "ball-level lemma verifiers")
    p.add_argument("--lemma", required=True,
                   choices=["2.7", "descent-extension", "commuting-set", "infinite-intersection",
                            "index"])
    p.add_argument("--radius", type=int, default=6)
    p.add_argument("--t")
    p.add_argument("--chain")
    p.add_argument("--max-chain", type=int, default=2)
    p.add_argument("--s")
    p.add_argument("--window", type=int, default=3)
    return parser


def execute(argv):
    args = build_parser().parse_args(argv)
    system = load_system(args.diagram)
    start = time.perf_counter()
    out = COMMANDS[args.command](system, args)
    failed = False
    if len(out) == 3:
        verdict, text, failed = out
    else:
        verdict, text = out
    elapsed = int((time.perf_counter() - start) * 1000)
    return RunReport(args.command, system.digest(), verdict, elapsed, text,
                     EXIT_COUNTEREXAMPLE if failed else EXIT_OK), system, args


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        report, system, args = execute(argv)
    except UsageError as exc:
        print(f"cox: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except NumericalAmbiguity as exc:
        print(f"cox: numerical ambiguity: {exc}", file=stderr)
        return EXIT_NUMERIC
    except ResourceLimit as exc:
        print(f"cox: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except CoxeterError as exc:
        print(f"cox: error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.json:
        doc = {"command": report.command,
               "system": {"names": list(system.names), "matrix": matrix_json(system)},
               "system_digest": report.system_digest,
               "verdict": report.verdicts}
        if args.timing:
            doc["elapsed_ms"] = report.elapsed_ms
        print(json.dumps(doc, sort_keys=False), file=stdout)
    else:
        print(report.text, file=stdout)
        if args.timing:
            print(f"({report.elapsed_ms} ms)", file=stdout)
    return report.exit_code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
