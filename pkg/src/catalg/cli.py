"""Command-line front end.

Exit codes: 0 success or a true verdict, 1 a false verdict (the witness is
printed), 2 bad input, 3 a search or rewriting budget ran out.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

import yaml

from . import fixtures
from . import models as md
from . import monadic as mo
from . import presheaf as psh
from . import rewrite as rw
from .fincat import CategoryError, cospan_components, is_sifted
from .io import (
    FormatError,
    category_from_doc,
    category_to_doc,
    dump_yaml,
    load_model,
    load_morphism,
    load_presheaf,
    model_from_doc,
    model_to_doc,
    morphism_from_doc,
    morphism_to_doc,
    presheaf_from_doc,
    presheaf_to_doc,
    read_yaml,
    resolve_category,
    resolve_theory,
    theory_from_doc,
    theory_to_doc,
)
from .suites import SUITES
from .theory import NonConfluent, TheoryError, check_theory_morphism, hom_enumerate

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

INPUT_ERRORS = (
    FormatError,
    yaml.YAMLError,
    rw.RewriteError,
    TheoryError,
    md.ModelError,
    CategoryError,
    psh.PresheafError,
    FileNotFoundError,
    IsADirectoryError,
)
BUDGET_ERRORS = (rw.BudgetExceeded, md.SearchSpaceTooLarge, md.Truncated, mo.Escaped)


class Result:
    def __init__(self, code: int, data: dict, lines: list[str]):
        self.code = code
        self.data = data
        self.lines = lines


# ---------------------------------------------------------------- references


_INJ = re.compile(r"inj:((?:y\(\d+\))(?:xy\(\d+\))*)@(\d+)")


def resolve_presheaf(ref: str) -> psh.Presheaf:
    """A built-in name (``gph:ExE``, ``rgph:E``, ...), ``inj:y(m)xy(n)@K`` for
    products of representables on injections truncated at ``K``, or a file."""
    if ref in fixtures.PRESHEAVES:
        return fixtures.PRESHEAVES[ref]()
    m = _INJ.fullmatch(ref)
    if m:
        K = int(m.group(2))
        ns = [int(n) for n in re.findall(r"\d+", m.group(1))]
        if any(n > K for n in ns):
            raise FormatError(f"{ref!r}: representable beyond the truncation {K}")
        Ps = [fixtures.inj_representable(n, K) for n in ns]
        return Ps[0] if len(Ps) == 1 else fixtures._product(*Ps)
    if not Path(ref).is_file():
        raise FormatError(f"unknown presheaf {ref!r}")
    return load_presheaf(ref)


def presheaf_witness_ref(ref: str):
    # built-in references stay symbolic; files are inlined so the witness stands alone
    if ref in fixtures.PRESHEAVES or _INJ.fullmatch(ref):
        return ref
    return presheaf_to_doc(load_presheaf(ref), base=category_to_doc(load_presheaf(ref).base))


def resolve_colimit(ref: str) -> psh.Colimit:
    if ref not in fixtures.COLIMITS:
        raise FormatError(f"unknown colimit {ref!r}; known: {sorted(fixtures.COLIMITS)}")
    return fixtures.COLIMITS[ref]()


def category_doc(ref: str):
    if Path(ref).is_file():
        return read_yaml(ref)
    return category_to_doc(resolve_category(ref))


# ---------------------------------------------------------------- witnesses


def model_equation_witness(M: md.Model, verdict: md.ModelVerdict) -> dict:
    eq, env, a, b = verdict.witness
    return {
        "kind": "model-equation",
        "model": {**model_to_doc(M), "theory": theory_to_doc(M.theory)},
        "equation": eq.label,
        "text": str(eq),
        "assignment": dict(env),
        "values": [a, b],
    }


def morphism_equation_witness(G, verdict) -> dict:
    eq, a, b = verdict.witness
    return {
        "kind": "morphism-equation",
        "morphism": {**morphism_to_doc(G), "source": theory_to_doc(G.source), "target": theory_to_doc(G.target)},
        "equation": eq.label,
        "text": str(eq),
        "normal_forms": [rw.show(a), rw.show(b)],
    }


def critical_pair_witness(doc, report) -> dict:
    cp = report[0]
    return {
        "kind": "critical-pair",
        "theory": doc,
        "peak": cp.source,
        "normal_forms": [rw.show(cp.left), rw.show(cp.right)],
    }


def _eval_equation(M: md.Model, eq, assignment: dict):
    env = {}
    for v in rw.variables(eq.lhs) | rw.variables(eq.rhs):
        if v.name not in assignment:
            raise FormatError(f"assignment misses variable {v.name!r}")
        labels = [str(x) for x in M.labels[v.sort]]
        if str(assignment[v.name]) not in labels:
            raise FormatError(f"{assignment[v.name]!r} is not an element of sort {v.sort!r}")
        env[v] = labels.index(str(assignment[v.name]))
    return M.eval(eq.lhs, env), M.eval(eq.rhs, env)


def _equation(T, label):
    for eq in T.equations():
        if eq.label == label:
            return eq
    raise FormatError(f"no equation labelled {label!r}")


def verify_witness(w: dict) -> tuple[bool, str]:
    """Recheck a witness from its own contents."""
    if not isinstance(w, dict) or "kind" not in w:
        raise FormatError("witness: expected a mapping with a 'kind'")
    kind = w["kind"]
    if kind == "model-equation":
        doc = dict(w["model"])
        T = theory_from_doc(doc.pop("theory"), unsafe=True)
        M = model_from_doc(doc, theory=T, check=False)
        eq = _equation(T, w["equation"])
        a, b = _eval_equation(M, eq, w["assignment"])
        names = M.labels[eq.lhs.sort]
        return a != b, f"{w['equation']} evaluates to {names[a]} and {names[b]}"
    if kind == "morphism-equation":
        doc = dict(w["morphism"])
        S = theory_from_doc(doc.pop("source"), unsafe=True)
        T = theory_from_doc(doc.pop("target"), unsafe=True)
        G = morphism_from_doc(doc, source=S, target=T)
        eq = _equation(S, w["equation"])
        a, b = T.system.nf(G.translate(eq.lhs)), T.system.nf(G.translate(eq.rhs))
        return a != b, f"{w['equation']} translates to {rw.show(a)} and {rw.show(b)}"
    if kind == "critical-pair":
        T = theory_from_doc(w["theory"], unsafe=True)
        peak = rw.parse_term(T.signature, w["peak"])
        forms = {rw.show(T.system.nf(t)) for _, t in T.system.rewrites(peak)}
        left, right = w["normal_forms"]
        ok = left != right and left in forms and right in forms
        return ok, f"{w['peak']} rewrites to normal forms {sorted(forms)}"
    if kind == "not-decomposable":
        ref = w["presheaf"]
        P = resolve_presheaf(ref) if isinstance(ref, str) else presheaf_from_doc(ref)
        comp = sorted((str(c), int(x)) for c, x in w["component"])
        comps = [sorted(c) for c in psh.components(P)]
        if comp not in comps:
            return False, "not a connected component"
        return psh._generator(P, comp) is None, f"component of {len(comp)} elements has no free generator"
    if kind == "not-preserved":
        ref = w["presheaf"]
        P = resolve_presheaf(ref) if isinstance(ref, str) else presheaf_from_doc(ref)
        res = psh.preserves_colimit(P, resolve_colimit(w["colimit"]))
        ok = not res.preserved and [res.colimit_of_homs, res.hom_into_colimit] == [
            w["colimit_of_homs"],
            w["hom_into_colimit"],
        ]
        return ok, f"colimit of homs {res.colimit_of_homs}, homs into the colimit {res.hom_into_colimit}"
    if kind == "not-sifted":
        C = category_from_doc(w["category"])
        if w.get("pair") is None:
            return not C.objects, "empty category"
        A, B = w["pair"]
        n = len(cospan_components(C, str(A), str(B)))
        return n != 1 and n == w["components"], f"{n} cospan components from {A} to {B}"
    raise FormatError(f"unknown witness kind {kind!r}")


# ---------------------------------------------------------------- commands


def _theory(ref, args):
    return resolve_theory(ref, unsafe=args.unsafe)


def cmd_theory_check(args) -> Result:
    doc = read_yaml(args.file)
    try:
        T = theory_from_doc(doc, unsafe=args.unsafe)
    except NonConfluent as e:
        w = critical_pair_witness(doc, e.report)
        lines = [f"not locally confluent: {len(e.report)} divergent pair(s)", f"  {e.report[0]}"]
        return Result(EXIT_FALSE, {"ok": False, "witness": w}, lines)
    data = {
        "ok": True,
        "name": T.name,
        "sorts": list(T.sorts),
        "ops": len(T.signature.ops),
        "rules": len(T.rules),
        "unsafe": T.unsafe,
    }
    lines = [f"{T.name or args.file}: {len(T.signature.ops)} operations, {len(T.rules)} rules, locally confluent"]
    if T.unsafe:
        lines[0] = f"{T.name or args.file}: confluence check waived ({len(T.report)} divergent pairs)"
    return Result(EXIT_OK, data, lines)


def _arity(T, k):
    if k.isdigit():
        return int(k)
    return tuple(k.split(","))


def cmd_theory_hom(args) -> Result:
    T = _theory(args.file, args)
    H = hom_enumerate(T, _arity(T, args.m), _arity(T, args.n), args.depth)
    homs = [str(h) for h in H.homs]
    lines = [f"|hom({args.m}, {args.n})| = {len(H)} at depth {args.depth}" + (" (truncated)" if H.truncated else "")]
    lines += [f"  {h}" for h in homs[: args.limit]]
    if len(homs) > args.limit:
        lines.append(f"  ... {len(homs) - args.limit} more")
    return Result(EXIT_OK, {"count": len(H), "truncated": H.truncated, "depth": args.depth, "homs": homs}, lines)


def cmd_theory_morphism(args) -> Result:
    S, T = _theory(args.source, args), _theory(args.target, args)
    G = load_morphism(args.map, S, T)
    v = check_theory_morphism(G)
    if v.ok:
        return Result(EXIT_OK, {"ok": True}, ["every source equation holds in the target"])
    w = morphism_equation_witness(G, v)
    eq, a, b = v.witness
    return Result(EXIT_FALSE, {"ok": False, "witness": w}, [f"fails: {eq}", f"  translates to {rw.show(a)} vs {rw.show(b)}"])


def _model(path, args, check=True):
    return load_model(path, check=check)


def cmd_model_check(args) -> Result:
    M = _model(args.file, args, check=False)
    v = md.check_model(M)
    if v.ok:
        return Result(EXIT_OK, {"ok": True, "carriers": M.carriers}, [f"model of {M.theory.name or 'the theory'}: all equations hold"])
    w = model_equation_witness(M, v)
    return Result(EXIT_FALSE, {"ok": False, "witness": w}, [f"not a model: {v.describe()}"])


def cmd_model_free(args) -> Result:
    T = _theory(args.theory, args)
    gens = [g for g in args.generators.split(",") if g] if args.generators else []
    F = md.free_model(T, gens, args.depth)
    if F.truncated:
        sizes = {s: len(v) for s, v in F.terms.items()}
        raise md.Truncated(f"normal forms not closed under the operations by depth {args.depth} ({sizes})")
    doc = model_to_doc(F.model, theory_ref=args.theory)
    return Result(EXIT_OK, {"model": doc}, dump_yaml(doc).splitlines())


def cmd_model_hom(args) -> Result:
    A, B = _model(args.source, args), _model(args.target, args)
    homs = md.hom_models(A, B, bound=args.bound or md.DEFAULT_HOM_BOUND)
    shown = [{s: [B.labels[s][y] for y in h.maps[s]] for s in A.theory.sorts} for h in homs]
    lines = [f"{len(homs)} homomorphism(s)"]
    for h in shown:
        lines.append("  " + "; ".join(f"{s}: " + " ".join(f"{x}->{y}" for x, y in zip(A.labels[s], ys)) for s, ys in h.items()))
    return Result(EXIT_OK, {"count": len(homs), "homs": shown}, lines)


def cmd_model_quotient(args) -> Result:
    M = _model(args.file, args, check=False)
    pairs = []
    for spec in args.identify or []:
        parts = spec.split(":")
        sort, rest = (parts[0], parts[1]) if len(parts) == 2 else (M.theory.signature.single_sort, parts[0])
        if sort not in M.carriers:
            raise FormatError(f"--identify {spec!r}: give the sort as SORT:a=b")
        a, _, b = rest.partition("=")
        labels = [str(x) for x in M.labels[sort]]
        if a not in labels or b not in labels:
            raise FormatError(f"--identify {spec!r}: unknown element")
        pairs.append((sort, labels.index(a), labels.index(b)))
    Q = md.quotient_by_congruence(M, pairs)
    doc = model_to_doc(Q.model)
    return Result(EXIT_OK, {"model": doc, "reflected": Q.hom is None}, dump_yaml(doc).splitlines())


def cmd_adjoint_apply(args) -> Result:
    S = _theory(args.source, args) if args.source else None
    T = _theory(args.target, args) if args.target else None
    G = load_morphism(args.map, S, T)
    A = load_model(args.model, theory=G.source)
    res = md.left_adjoint_algebraic(G, A, depth=args.depth, bound=args.bound)
    cert = res.certificate
    doc = model_to_doc(res.model, theory_ref=G.target.name)
    unit = {s: [res.model.labels[G.sort_map[s]][y] for y in res.unit.maps[s]] for s in G.source.sorts}
    data = {
        "model": doc,
        "unit": unit,
        "certificate": {
            "ok": cert.ok,
            "bound": cert.bound,
            "models": cert.models_checked,
            "capped": cert.capped,
            "bijective": cert.bijective,
            "natural": cert.natural,
            "naturality_checks": cert.naturality_checks,
            "failure": cert.failure,
        },
    }
    lines = dump_yaml(doc).splitlines()
    lines.append(
        f"certificate: {'ok' if cert.ok else 'FAILED'} over {cert.models_checked} target models"
        f" with carriers <= {cert.bound}" + (" (capped)" if cert.capped else "")
    )
    if cert.failure:
        lines.append(f"  {cert.failure}")
    return Result(EXIT_OK if cert.ok else EXIT_FALSE, data, lines)


def cmd_monad_build(args) -> Result:
    M = mo.monad_from_theory(_theory(args.theory, args), args.depth)
    X = tuple(f"a{i}" for i in range(args.set))
    S = M.slice(X)
    laws = mo.check_monad_laws(M, X, samples=args.samples, seed=args.seed)
    terms = [rw.show(t) for t in S.terms]
    data = {"size": len(S), "saturated": S.saturated, "depth": args.depth, "terms": terms, "laws": laws.ok, "checked": laws.checked}
    lines = [f"|T({args.set})| = {len(S)}" + ("" if S.saturated else f" (truncated at depth {args.depth})")]
    lines += [f"  {t}" for t in terms[: args.limit]]
    if len(terms) > args.limit:
        lines.append(f"  ... {len(terms) - args.limit} more")
    lines.append(f"monad laws: {'ok' if laws.ok else 'FAILED'} ({laws.checked} checks)")
    lines += [f"  {f}" for f in laws.failures[:5]]
    return Result(EXIT_OK if laws.ok else EXIT_FALSE, data, lines)


def cmd_monad_roundtrip(args) -> Result:
    pairs = args.pairs or None
    r = mo.roundtrip_check(_theory(args.theory, args), args.arity, args.depth, max_pairs=pairs, seed=args.seed)
    sizes = {f"{m},{n}": v for (m, n), v in sorted(r.sizes.items())}
    data = {"ok": r.ok, "exact": r.exact, "sizes": sizes, "compositions": r.compositions, "failures": [str(f) for f in r.failures[:20]]}
    lines = [f"roundtrip: {'ok' if r.ok else 'FAILED'}" + (" (exact)" if r.exact else " (truncated hom-sets)")]
    lines += [f"  |hom({k})| = {v}" for k, v in sizes.items()]
    lines.append(f"  {r.compositions} composites compared")
    lines += [f"  {f}" for f in r.failures[:5]]
    return Result(EXIT_OK if r.ok else EXIT_FALSE, data, lines)


def cmd_monad_em(args) -> Result:
    r = mo.em_model_correspondence(_theory(args.theory, args), args.carrier, depth=args.depth)
    data = {"ok": r.ok, "counts": {str(k): list(v) for k, v in r.counts.items()}, "hom_pairs": r.hom_pairs, "failures": [list(f) for f in r.failures]}
    lines = [f"algebras vs models: {'ok' if r.ok else 'FAILED'}"]
    lines += [f"  |X| = {n}: {a} models, {b} algebras" for n, (a, b) in r.counts.items()]
    lines.append(f"  {r.hom_pairs} hom-set pairs compared")
    return Result(EXIT_OK if r.ok else EXIT_FALSE, data, lines)


def cmd_presheaf_decompose(args) -> Result:
    P = resolve_presheaf(args.presheaf)
    try:
        d = psh.decompose_into_representables(P)
    except psh.NotDecomposable as e:
        w = {"kind": "not-decomposable", "presheaf": presheaf_witness_ref(args.presheaf), "component": [list(x) for x in sorted(e.component)]}
        return Result(EXIT_FALSE, {"ok": False, "witness": w}, [f"not a coproduct of representables: a component of {len(e.component)} elements has no free generator"])
    return Result(EXIT_OK, {"ok": True, "summands": list(d.summands), "formula": d.formula()}, [d.formula()])


def cmd_presheaf_preserves(args) -> Result:
    P = resolve_presheaf(args.presheaf)
    res = psh.preserves_colimit(P, resolve_colimit(args.colimit))
    data = {"ok": res.preserved, **res.witness()}
    lines = [f"colimit of homs: {res.colimit_of_homs}; homs into the colimit: {res.hom_into_colimit}"]
    if res.preserved:
        lines.append("preserved")
        return Result(EXIT_OK, data, lines)
    data["witness"] = {
        "kind": "not-preserved",
        "presheaf": presheaf_witness_ref(args.presheaf),
        "colimit": args.colimit,
        "colimit_of_homs": res.colimit_of_homs,
        "hom_into_colimit": res.hom_into_colimit,
    }
    lines.append("not preserved")
    return Result(EXIT_FALSE, data, lines)


def cmd_category_check(args) -> Result:
    C = resolve_category(args.category)
    data = {"ok": True, "objects": len(C.objects), "morphisms": len(C.morphisms)}
    return Result(EXIT_OK, data, [f"valid category: {len(C.objects)} objects, {len(C.morphisms)} morphisms"])


def cmd_category_sifted(args) -> Result:
    doc = category_doc(args.category)
    C = category_from_doc(doc)
    v = is_sifted(C)
    if v.sifted:
        return Result(EXIT_OK, {"ok": True}, ["sifted: " + v.reason])
    w = {"kind": "not-sifted", "category": doc, "pair": list(v.pair) if v.pair else None, "components": len(v.components)}
    where = f" for {v.pair[0]}, {v.pair[1]}" if v.pair else ""
    return Result(EXIT_FALSE, {"ok": False, "witness": w}, [f"not sifted: {v.reason}{where}"])


def cmd_suite(args) -> Result:
    if args.name not in SUITES:
        raise FormatError(f"unknown suite {args.name!r}; known: {sorted(SUITES)}")
    items = SUITES[args.name](args.seed, args.count)
    ok = all(i.ok for i in items)
    data = {"ok": ok, "items": [{"name": i.name, "ok": i.ok, "detail": i.detail} for i in items]}
    lines = [f"{'PASS' if i.ok else 'FAIL'}  {i.name}" + (f"  [{i.detail}]" if i.detail else "") for i in items]
    lines.append(f"{sum(i.ok for i in items)}/{len(items)} passed")
    return Result(EXIT_OK if ok else EXIT_FALSE, data, lines)


def cmd_verify_witness(args) -> Result:
    doc = read_yaml(args.file)
    if isinstance(doc, dict) and "witness" in doc:
        doc = doc["witness"]
    ok, detail = verify_witness(doc)
    return Result(EXIT_OK if ok else EXIT_FALSE, {"confirmed": ok, "detail": detail}, [("confirmed: " if ok else "not confirmed: ") + detail])


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="term depth bound")
    common.add_argument("--bound", type=int, default=None, help="search bound")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--unsafe", action="store_true", help="waive the confluence check")

    p = argparse.ArgumentParser(prog="catalg", description="Finite categorical universal algebra.")
    verbs = p.add_subparsers(dest="verb", required=True)

    def sub(parent, name, fn, defaults=None, help=None):
        q = parent.add_parser(name, parents=[common], help=help)
        q.set_defaults(fn=fn, **(defaults or {}))
        return q

    th = verbs.add_parser("theory", help="theory presentations").add_subparsers(dest="cmd", required=True)
    q = sub(th, "check", cmd_theory_check)
    q.add_argument("file")
    q = sub(th, "hom", cmd_theory_hom, {"depth_default": 3})
    q.add_argument("file")
    q.add_argument("-m", default="1", help="source arity, or comma-separated sorts")
    q.add_argument("-n", default="1", help="target arity, or comma-separated sorts")
    q.add_argument("--limit", type=int, default=50)
    q = sub(th, "morphism", cmd_theory_morphism)
    q.add_argument("source")
    q.add_argument("target")
    q.add_argument("map")

    mdl = verbs.add_parser("model", help="models in finite sets").add_subparsers(dest="cmd", required=True)
    q = sub(mdl, "check", cmd_model_check)
    q.add_argument("file")
    q = sub(mdl, "free", cmd_model_free, {"depth_default": 4})
    q.add_argument("theory")
    q.add_argument("-g", "--generators", default="", help="comma-separated generator names")
    q = sub(mdl, "hom", cmd_model_hom)
    q.add_argument("source")
    q.add_argument("target")
    q = sub(mdl, "quotient", cmd_model_quotient)
    q.add_argument("file")
    q.add_argument("-i", "--identify", action="append", metavar="[SORT:]a=b")

    mon = verbs.add_parser("monad", help="term monads").add_subparsers(dest="cmd", required=True)
    q = sub(mon, "build", cmd_monad_build, {"depth_default": 4})
    q.add_argument("theory")
    q.add_argument("--set", type=int, default=2)
    q.add_argument("--samples", type=int, default=200)
    q.add_argument("--limit", type=int, default=50)
    q = sub(mon, "roundtrip", cmd_monad_roundtrip, {"depth_default": 4})
    q.add_argument("theory")
    q.add_argument("--arity", type=int, default=2)
    q.add_argument("--pairs", type=int, default=2000, help="composites sampled per arity triple; 0 checks all")
    q = sub(mon, "em", cmd_monad_em, {"depth_default": 2})
    q.add_argument("theory")
    q.add_argument("--carrier", type=int, default=2)

    pr = verbs.add_parser("presheaf", help="presheaves").add_subparsers(dest="cmd", required=True)
    q = sub(pr, "decompose", cmd_presheaf_decompose)
    q.add_argument("presheaf")
    q = sub(pr, "preserves", cmd_presheaf_preserves)
    q.add_argument("presheaf")
    q.add_argument("--colimit", required=True)

    cat = verbs.add_parser("category", help="finite categories").add_subparsers(dest="cmd", required=True)
    q = sub(cat, "check", cmd_category_check)
    q.add_argument("category")
    q = sub(cat, "sifted", cmd_category_sifted)
    q.add_argument("category")

    adj = verbs.add_parser("adjoint", help="left adjoints to algebraic functors").add_subparsers(dest="cmd", required=True)
    q = sub(adj, "apply", cmd_adjoint_apply, {"depth_default": 4, "bound_default": md.DEFAULT_CERT_BOUND})
    q.add_argument("--source")
    q.add_argument("--target")
    q.add_argument("--map", required=True)
    q.add_argument("--model", required=True)

    q = verbs.add_parser("suite", parents=[common], help="run a named battery")
    q.add_argument("name")
    q.add_argument("--count", type=int, default=500, help="instances per property")
    q.set_defaults(fn=cmd_suite)

    q = verbs.add_parser("verify-witness", parents=[common], help="recheck a printed witness")
    q.add_argument("file")
    q.set_defaults(fn=cmd_verify_witness)
    return p


def emit(args, res: Result, out) -> None:
    if args.format == "json":
        out.write(json.dumps({"exit": res.code, **res.data}, sort_keys=True, indent=2, default=str) + "\n")
        return
    for line in res.lines:
        out.write(line + "\n")
    w = res.data.get("witness")
    if w is not None:
        out.write("witness:\n")
        out.write(dump_yaml(w))


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.depth is None:
        args.depth = getattr(args, "depth_default", 3)
    if args.bound is None:
        args.bound = getattr(args, "bound_default", None)
    for flag in ("depth", "bound", "seed"):
        v = getattr(args, flag)
        if v is not None and v < 0:
            return _fail(args, out, EXIT_INPUT, "input", f"--{flag} must be non-negative")
    try:
        res = args.fn(args)
    except BUDGET_ERRORS as e:
        return _fail(args, out, EXIT_BUDGET, "budget", f"{type(e).__name__}: {e}")
    except INPUT_ERRORS as e:
        return _fail(args, out, EXIT_INPUT, "input", f"{type(e).__name__}: {e}")
    emit(args, res, out)
    return res.code


def _fail(args, out, code, kind, msg) -> int:
    if args.format == "json":
        out.write(json.dumps({"exit": code, "error": kind, "message": msg}, sort_keys=True, indent=2) + "\n")
    else:
        print(f"error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
