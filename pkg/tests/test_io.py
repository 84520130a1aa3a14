from __future__ import annotations

from pathlib import Path

import pytest

from catalg import fixtures
from catalg import io
from catalg import models as md
from catalg import presheaf as psh
from catalg.theory import NonConfluent, check_theory_morphism

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


@pytest.mark.parametrize("name", io.BUILTIN_THEORIES)
def test_builtin_theories_roundtrip(name):
    T = io.builtin_theory(name)
    again = io.theory_from_doc(io.theory_to_doc(T))
    assert io.theory_to_doc(again) == io.theory_to_doc(T)
    assert io.theory_from_doc(__import__("yaml").safe_load(io.dump_yaml(io.theory_to_doc(T)))).signature.ops.keys() == T.signature.ops.keys()


def test_unknown_builtin():
    with pytest.raises(io.FormatError):
        io.builtin_theory("ring")
    with pytest.raises(io.FormatError):
        io.resolve_theory("no-such-file.thy")


@pytest.mark.parametrize(
    "doc",
    [
        {"sorts": ["s"], "ops": ["e: -> s"], "laws": []},
        {"ops": ["e: -> s"]},
        ["not", "a", "mapping"],
    ],
)
def test_theory_doc_rejected(doc):
    with pytest.raises(io.FormatError):
        io.theory_from_doc(doc)


def test_category_roundtrip():
    for C in (fixtures.gph_base(), fixtures.rgph_base(), *(mk() for mk in fixtures.INDEX_CATEGORIES.values())):
        doc = io.category_to_doc(C)
        D = io.category_from_doc(doc)
        assert io.category_to_doc(D) == doc


def test_category_bad_entries():
    with pytest.raises(io.FormatError):
        io.category_from_doc({"objects": ["a"], "morphisms": [["f", "a"]]})
    with pytest.raises(io.FormatError):
        io.category_from_doc({"objects": ["a"], "arrows": []})


def test_presheaf_roundtrip():
    for ref in ("gph:ExE", "rgph:ExE", "gph:terminal"):
        P = fixtures.PRESHEAVES[ref]()
        doc = io.presheaf_to_doc(P)
        Q = io.presheaf_from_doc(doc)
        assert psh.isomorphic(P, Q) is not None


def test_model_roundtrip_and_labels():
    M = io.load_model(SAMPLES / "left-zero.yaml")
    assert M.labels["s"] == ("1", "a", "b") or list(M.labels["s"]) == ["1", "a", "b"]
    doc = io.model_to_doc(M, "monoid")
    N = io.model_from_doc(doc)
    assert N == M


def test_model_doc_errors():
    base = {"theory": "monoid", "carriers": {"s": ["0"]}, "tables": {"m": [["0"]], "e": "0"}}
    assert io.model_from_doc(base).carriers == {"s": 1}
    with pytest.raises(io.FormatError):
        io.model_from_doc({**base, "tables": {"m": [["0"]]}})
    with pytest.raises(io.FormatError):
        io.model_from_doc({**base, "tables": {"m": [["0"]], "e": "0", "inv": ["0"]}})
    with pytest.raises(io.FormatError):
        io.model_from_doc({**base, "tables": {"m": [[]], "e": "0"}})
    with pytest.raises(io.FormatError):
        io.model_from_doc({**base, "carriers": {"t": ["0"]}})


def test_samples_load():
    assert io.load_theory(SAMPLES / "monoid.thy").name == "monoid"
    assert md.check_model(io.load_model(SAMPLES / "left-zero.yaml")).ok
    assert md.check_model(io.load_model(SAMPLES / "z4.yaml")).ok
    bad = io.load_model(SAMPLES / "not-a-group.yaml", check=False)
    assert not md.check_model(bad).ok
    G = io.load_morphism(SAMPLES / "abelianize.yaml")
    assert check_theory_morphism(G)
    assert not check_theory_morphism(io.load_morphism(SAMPLES / "to-pointed.yaml"))
    with pytest.raises(NonConfluent):
        io.load_theory(SAMPLES / "bad-rules.thy")
    io.load_theory(SAMPLES / "bad-rules.thy", unsafe=True)
    assert sum(io.load_presheaf(SAMPLES / "path.yaml").sizes.values()) == 2
    assert len(io.load_category(SAMPLES / "walking-idempotent.yaml").objects) == 1
