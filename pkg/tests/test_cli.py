from __future__ import annotations

import json
from io import StringIO
from pathlib import Path

import pytest

from catalg.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def run(*argv):
    out = StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    doc = json.loads(text)
    assert doc["exit"] == code
    return code, doc


def test_decompose_ex_e():
    code, text = run("presheaf", "decompose", "gph:ExE")
    assert code == 0
    assert "V + V + E" in text


def test_preservation_failure_has_witness():
    code, doc = run_json("presheaf", "preserves", "gph:terminal", "--colimit", "gph:reflexive-coeq")
    assert code == 1
    w = doc["witness"]
    assert w["kind"] == "not-preserved"
    assert (w["colimit_of_homs"], w["hom_into_colimit"]) == (0, 1)


def test_theory_check_sample():
    assert run("theory", "check", SAMPLES / "monoid.thy")[0] == 0
    code, doc = run_json("theory", "check", SAMPLES / "bad-rules.thy")
    assert code == 1 and doc["witness"]["kind"] == "critical-pair"


def test_unknown_suite():
    assert run("suite", "nope")[0] == 2


def test_input_errors():
    assert run("theory", "check", "missing.thy")[0] == 2
    assert run("theory", "hom", "monoid", "-m", "1", "-n", "1", "--depth", "-1")[0] == 2
    code, doc = run_json("model", "check", "missing.yaml")
    assert code == 2 and doc["error"] == "input"


def test_budget_exit():
    assert run("model", "free", "monoid", "-g", "a")[0] == 3


def test_properties_suite_is_deterministic():
    a = run("suite", "properties", "--seed", "42", "--count", "20")
    b = run("suite", "properties", "--seed", "42", "--count", "20")
    assert a == b and a[0] == 0
    ja = run("suite", "properties", "--seed", "42", "--count", "20", "--format", "json")
    assert ja == run("suite", "properties", "--seed", "42", "--count", "20", "--format", "json")


def test_theory_hom_counts():
    code, doc = run_json("theory", "hom", "pointed", "-m", "2", "-n", "1")
    assert code == 0
    assert doc["count"] == 3


def test_model_commands():
    assert run("model", "check", SAMPLES / "left-zero.yaml")[0] == 0
    assert run("model", "check", SAMPLES / "z4.yaml")[0] == 0
    code, text = run("model", "quotient", SAMPLES / "z4.yaml", "-i", "0=2")
    assert code == 0
    code, doc = run_json("model", "free", "semilattice", "-g", "a,b")
    assert code == 0


def test_adjoint_apply():
    code, doc = run_json(
        "adjoint", "apply", "--map", SAMPLES / "abelianize.yaml", "--model", SAMPLES / "left-zero.yaml", "--bound", "2"
    )
    assert code == 0


def test_monad_commands():
    assert run("monad", "build", "pointed", "--set", "2", "--depth", "2")[0] == 0
    assert run("monad", "roundtrip", "pointed", "--arity", "2", "--depth", "2", "--pairs", "0")[0] == 0
    assert run("monad", "em", "pointed", "--carrier", "2", "--depth", "2")[0] == 0


def test_category_commands():
    assert run("category", "check", SAMPLES / "walking-idempotent.yaml")[0] == 0
    assert run("category", "sifted", "reflexive-pair")[0] == 0
    code, doc = run_json("category", "sifted", "discrete2")
    assert code == 1 and doc["witness"]["kind"] == "not-sifted"


def _verify(tmp_path, witness_doc):
    p = tmp_path / "w.json"
    p.write_text(json.dumps(witness_doc))
    return run("verify-witness", p)[0]


@pytest.mark.parametrize(
    "argv",
    [
        ("presheaf", "preserves", "gph:terminal", "--colimit", "gph:reflexive-coeq"),
        ("presheaf", "decompose", SAMPLES / "path.yaml"),
        ("presheaf", "decompose", "rgph:ExE"),
        ("model", "check", SAMPLES / "not-a-group.yaml"),
        ("theory", "morphism", "monoid", "pointed", SAMPLES / "to-pointed.yaml"),
        ("theory", "check", SAMPLES / "bad-rules.thy"),
        ("category", "sifted", "discrete2"),
    ],
)
def test_every_witness_verifies(tmp_path, argv):
    code, doc = run_json(*argv)
    assert code == 1
    assert _verify(tmp_path, doc) == 0
    assert _verify(tmp_path, doc["witness"]) == 0


def test_tampered_witness_rejected(tmp_path):
    _, doc = run_json("presheaf", "preserves", "gph:terminal", "--colimit", "gph:reflexive-coeq")
    doc["witness"]["colimit_of_homs"] = 1
    assert _verify(tmp_path, doc) == 1
    _, doc = run_json("model", "check", SAMPLES / "not-a-group.yaml")
    doc["witness"]["assignment"] = {"x": "0"}
    assert _verify(tmp_path, doc) == 1
