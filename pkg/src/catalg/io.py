"""YAML documents for categories, presheaves, theories, models and theory
morphisms. Every loader rejects unknown keys; every dumper emits a document
that loads back to an equal object.

Category::

    name: walking-arrow        # optional
    objects: [a, b]
    morphisms: [[f, a, b]]     # id, source, target; identities are implicit
    compose: [[g, f, h]]       # g∘f = h, for composable non-identity pairs

Presheaf (``base`` is ``gph``, ``rgph``, a category file or an inline category)::

    base: gph
    sets: {V: [v0, v1], E: [e]}
    actions: {s: {e: v0}, t: {e: v1}}   # f: a -> b acts P(b) -> P(a)

Theory::

    name: monoid
    sorts: [s]
    ops: ["m: s s -> s", "e: -> s"]
    ac: {m: e}                 # AC operations and their units (or null)
    rules: ["m(e, x) -> x"]

Model (``theory`` is a built-in name or a path relative to the file)::

    theory: monoid
    carriers: {s: ["1", a]}
    tables: {m: [["1", a], [a, a]], e: "1"}   # nested by argument

Theory morphism::

    source: monoid
    target: cmonoid
    map: {m: "m(x1, x2)", e: "e"}
    sorts: {s: s}              # optional
"""

from __future__ import annotations

import re
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Any, Mapping

import yaml

from . import rewrite as rw
from .fincat import FinCat, build
from .models import Model
from .presheaf import Presheaf
from .theory import TheoryMorphism, TheoryPresentation


class FormatError(ValueError):
    pass


BUILTIN_THEORIES = ("empty", "pointed", "monoid", "group", "cmonoid", "semilattice", "action")


def _keys(doc, allowed, required, what):
    if not isinstance(doc, Mapping):
        raise FormatError(f"{what}: expected a mapping")
    extra = set(doc) - set(allowed)
    if extra:
        raise FormatError(f"{what}: unknown keys {sorted(extra)}")
    missing = set(required) - set(doc)
    if missing:
        raise FormatError(f"{what}: missing keys {sorted(missing)}")


def read_yaml(path) -> Any:
    try:
        return yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as e:
        raise FormatError(f"{path}: {e}") from None


def dump_yaml(doc) -> str:
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=False, allow_unicode=True, width=100)


# ---------------------------------------------------------------- categories


def category_from_doc(doc) -> FinCat:
    _keys(doc, {"name", "objects", "morphisms", "compose"}, {"objects"}, "category")
    objects = [str(o) for o in doc["objects"]]
    arrows = doc.get("morphisms") or []
    if isinstance(arrows, Mapping):
        arrows = [[f, *ends] for f, ends in arrows.items()]
    triples = []
    for a in arrows:
        if len(a) != 3:
            raise FormatError(f"category: morphism entry {a!r} is not [id, source, target]")
        triples.append(tuple(map(str, a)))
    compose = []
    for c in doc.get("compose") or []:
        if len(c) != 3:
            raise FormatError(f"category: compose entry {c!r} is not [g, f, g∘f]")
        compose.append(tuple(map(str, c)))
    return build(objects, triples, compose, name=str(doc.get("name", "")))


def category_to_doc(C: FinCat) -> dict:
    nonid = C.nonidentity()
    compose = [
        [g, f, C.comp(g, f)] for f in nonid for g in C.out(C.dst(f)) if not C.is_identity(g)
    ]
    doc = {"objects": list(C.objects), "morphisms": [[f, C.src(f), C.dst(f)] for f in nonid], "compose": compose}
    if C.name:
        doc = {"name": C.name, **doc}
    return doc


def load_category(path) -> FinCat:
    return category_from_doc(read_yaml(path))


def resolve_category(ref, base_dir=None) -> FinCat:
    from . import fixtures

    if isinstance(ref, Mapping):
        return category_from_doc(ref)
    ref = str(ref)
    named = {"gph": fixtures.gph_base, "rgph": fixtures.rgph_base, **fixtures.INDEX_CATEGORIES}
    if ref in named:
        return named[ref]()
    m = re.fullmatch(r"inj:(\d+)", ref)
    if m:
        return fixtures.injections(int(m.group(1))).op()
    path = Path(base_dir or ".") / ref
    if not path.exists():
        raise FormatError(f"unknown category {ref!r}")
    return load_category(path)


# ---------------------------------------------------------------- presheaves


def presheaf_from_doc(doc, base_dir=None) -> Presheaf:
    _keys(doc, {"name", "base", "sets", "actions"}, {"base", "sets"}, "presheaf")
    C = resolve_category(doc["base"], base_dir)
    sets = doc["sets"] or {}
    if set(map(str, sets)) - set(C.objects):
        raise FormatError(f"presheaf: sets for unknown objects {sorted(set(map(str, sets)) - set(C.objects))}")
    labels = {c: [str(x) for x in sets.get(c, [])] for c in C.objects}
    index = {c: {x: i for i, x in enumerate(v)} for c, v in labels.items()}
    acts: dict = {}
    for f, table in (doc.get("actions") or {}).items():
        f = str(f)
        if f not in C.morphisms:
            raise FormatError(f"presheaf: unknown morphism {f!r}")
        a, b = C.morphisms[f]
        table = {str(k): v for k, v in (table or {}).items()}
        try:
            acts[f] = tuple(index[a][str(table[x])] for x in labels[b])
        except KeyError as e:
            raise FormatError(f"presheaf: action of {f!r} is not total or names an unknown element {e}") from None
    _derive_composites(C, acts)
    return Presheaf(C, {c: len(v) for c, v in labels.items()}, acts, labels, name=str(doc.get("name", "")))


def _derive_composites(C, acts):
    # actions of composites follow from those of their factors
    changed = True
    while changed:
        changed = False
        for f in C.nonidentity():
            if f in acts:
                continue
            for g in list(acts):
                for h in list(acts):
                    if C.dst(h) == C.src(g):
                        try:
                            gh = C.comp(g, h)
                        except KeyError:
                            continue
                        if gh == f:
                            acts[f] = tuple(acts[h][y] for y in acts[g])
                            changed = True
                            break
                if f in acts:
                    break


def presheaf_to_doc(P: Presheaf, base=None) -> dict:
    C = P.base
    labels = {c: [P.label(c, x) for x in range(P.sizes[c])] for c in C.objects}
    actions = {}
    for f in C.nonidentity():
        a, b = C.morphisms[f]
        actions[f] = {labels[b][y]: labels[a][P.act(f, y)] for y in range(P.sizes[b])}
    doc = {"base": base if base is not None else category_to_doc(C), "sets": labels, "actions": actions}
    if P.name:
        doc = {"name": P.name, **doc}
    return doc


def load_presheaf(path) -> Presheaf:
    return presheaf_from_doc(read_yaml(path), Path(path).parent)


# ---------------------------------------------------------------- theories

_OP = re.compile(r"^\s*([A-Za-z_][\w']*)\s*:\s*([\w'\s]*?)\s*->\s*([A-Za-z_][\w']*)\s*$")


def parse_op(text: str) -> rw.OpDecl:
    m = _OP.match(str(text))
    if not m:
        raise FormatError(f"operation {text!r} is not 'name: s1 ... sk -> s'")
    return rw.OpDecl(m.group(1), tuple(m.group(2).split()), m.group(3))


def show_op(d: rw.OpDecl) -> str:
    args = " ".join(d.arity)
    return f"{d.name}: {args + ' ' if args else ''}-> {d.sort}"


def theory_from_doc(doc, unsafe=False, confluence_depth=2) -> TheoryPresentation:
    _keys(doc, {"name", "sorts", "ops", "ac", "rules"}, {"sorts"}, "theory")
    ops = [parse_op(o) for o in doc.get("ops") or []]
    ac = doc.get("ac") or {}
    if isinstance(ac, list):
        ac = {str(op): None for op in ac}
    ac = {str(k): (None if v is None else str(v)) for k, v in ac.items()}
    sig = rw.Signature([str(s) for s in doc["sorts"]], ops, ac)
    rules = [rw.parse_rule(sig, str(r), name=f"r{i + 1}") for i, r in enumerate(doc.get("rules") or [])]
    return TheoryPresentation(sig, rules, name=str(doc.get("name", "")), unsafe=unsafe, confluence_depth=confluence_depth)


def theory_to_doc(T: TheoryPresentation) -> dict:
    sig = T.signature
    return {
        "name": T.name,
        "sorts": list(sig.sorts),
        "ops": [show_op(d) for d in sig.ops.values()],
        "ac": dict(sig.ac),
        "rules": [str(r) for r in T.source_rules],
    }


def load_theory(path, unsafe=False) -> TheoryPresentation:
    return theory_from_doc(read_yaml(path), unsafe=unsafe)


_BUILTIN_CACHE: dict = {}


def builtin_theory(name: str) -> TheoryPresentation:
    if name not in BUILTIN_THEORIES:
        raise FormatError(f"no built-in theory {name!r}")
    if name not in _BUILTIN_CACHE:
        text = resources.files("catalg").joinpath("data", f"{name}.yaml").read_text()
        _BUILTIN_CACHE[name] = theory_from_doc(yaml.safe_load(text))
    return _BUILTIN_CACHE[name]


def resolve_theory(ref, base_dir=None, unsafe=False) -> TheoryPresentation:
    if isinstance(ref, TheoryPresentation):
        return ref
    if isinstance(ref, Mapping):
        return theory_from_doc(ref, unsafe=unsafe)
    ref = str(ref)
    path = Path(base_dir or ".") / ref
    if path.is_file():
        return load_theory(path, unsafe=unsafe)
    if ref in BUILTIN_THEORIES:
        return builtin_theory(ref)
    raise FormatError(f"unknown theory {ref!r}")


# ---------------------------------------------------------------- models


def model_from_doc(doc, base_dir=None, theory=None, check=True) -> Model:
    _keys(doc, {"name", "theory", "carriers", "tables"}, {"carriers", "tables"}, "model")
    if theory is None:
        if "theory" not in doc:
            raise FormatError("model: missing keys ['theory']")
        theory = resolve_theory(doc["theory"], base_dir)
    sig = theory.signature
    carriers = doc["carriers"] or {}
    if set(map(str, carriers)) != set(sig.sorts):
        raise FormatError(f"model: carriers must be given for exactly the sorts {list(sig.sorts)}")
    labels = {str(s): [str(x) for x in v] for s, v in carriers.items()}
    index = {s: {x: i for i, x in enumerate(v)} for s, v in labels.items()}
    tables_doc = doc["tables"] or {}
    extra = set(map(str, tables_doc)) - set(sig.ops)
    if extra:
        raise FormatError(f"model: tables for unknown operations {sorted(extra)}")
    tables = {}
    for op, d in sig.ops.items():
        if op not in tables_doc:
            raise FormatError(f"model: no table for {op!r}")
        row = []
        for args in product(*(range(len(labels[s])) for s in d.arity)):
            cell = tables_doc[op]
            try:
                for a in args:
                    cell = cell[a]
                row.append(index[d.sort][str(cell)])
            except (KeyError, IndexError, TypeError):
                raise FormatError(f"model: table of {op!r} is not total at {args}") from None
        tables[op] = row
    return Model(theory, {s: len(v) for s, v in labels.items()}, tables, labels, name=str(doc.get("name", "")), check=check)


def model_to_doc(M: Model, theory_ref=None) -> dict:
    sig = M.theory.signature
    tables = {}
    for op, d in sig.ops.items():
        tables[op] = _nest(M, op, d, ())
    doc = {
        "theory": theory_ref or M.theory.name,
        "carriers": {s: list(M.labels[s]) for s in sig.sorts},
        "tables": tables,
    }
    if M.name:
        doc = {"name": M.name, **doc}
    return doc


def _nest(M, op, d, prefix):
    k = len(prefix)
    if k == len(d.arity):
        return M.labels[d.sort][M.apply(op, prefix)]
    return [_nest(M, op, d, prefix + (x,)) for x in range(M.carriers[d.arity[k]])]


def load_model(path, theory=None, check=True) -> Model:
    return model_from_doc(read_yaml(path), Path(path).parent, theory, check)


# ---------------------------------------------------------------- theory morphisms


def morphism_from_doc(doc, base_dir=None, source=None, target=None) -> TheoryMorphism:
    _keys(doc, {"source", "target", "map", "sorts"}, {"map"}, "morphism")
    S = source if source is not None else resolve_theory(doc.get("source"), base_dir)
    T = target if target is not None else resolve_theory(doc.get("target"), base_dir)
    op_map = {str(k): str(v) for k, v in (doc["map"] or {}).items()}
    sorts = {str(k): str(v) for k, v in (doc.get("sorts") or {}).items()} or None
    return TheoryMorphism(S, T, op_map, sorts)


def morphism_to_doc(G: TheoryMorphism, source_ref=None, target_ref=None) -> dict:
    return {
        "source": source_ref or G.source.name,
        "target": target_ref or G.target.name,
        "map": {op: rw.show(t) for op, t in G.op_map.items()},
        "sorts": dict(G.sort_map),
    }


def load_morphism(path, source=None, target=None) -> TheoryMorphism:
    return morphism_from_doc(read_yaml(path), Path(path).parent, source, target)
