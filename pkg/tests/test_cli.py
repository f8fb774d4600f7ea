import json
import subprocess
import sys

import pytest

from conftest import FIXTURE_DIR
from depchoice import fixtures
from depchoice.cli import (
    load_structure,
    main,
    manifest_to_predsc,
    parse_version,
    version_matches,
)
from depchoice.core import from_json, to_json, validate_dsc
from depchoice.errors import ResolutionError

S = frozenset


def fx(name):
    return str(FIXTURE_DIR / name)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def pkg(name, version, *deps):
    return {"name": name, "version": version, "dependencies": [{"name": n, "version": v} for n, v in deps]}


# -- manifests ------------------------------------------------------------------------------


def test_version_specs():
    assert parse_version("1.10.2") == (1, 10, 2)
    assert version_matches("^1.0", "1.1.0") and version_matches("^1.2.0", "1.2.0")
    assert not version_matches("^1.2.0", "1.1.9") and not version_matches("^1.0.0", "2.0.0")
    assert version_matches("1.0.0", "1.0.0") and not version_matches("1.0.0", "1.0.1")
    with pytest.raises(ValueError):
        parse_version("one")


def test_manifest_examples():
    m = {"packages": [pkg("a", "1.0", ("b", "^1.0")), pkg("b", "1.0"), pkg("b", "1.1")]}
    d = manifest_to_predsc(m)
    assert d.dep("a-1.0") == {S({"b-1.0"}), S({"b-1.1"})}
    assert d.dep("b-1.0") == {S()}
    m = {"packages": [pkg("a", "1.0", ("b", "1.0"), ("c", "^1.0")), pkg("b", "1.0"), pkg("c", "1.0"), pkg("c", "1.1")]}
    d = manifest_to_predsc(m)
    assert d.dep("a-1.0") == {S({"b-1.0", "c-1.0"}), S({"b-1.0", "c-1.1"})}
    assert validate_dsc(d).ok


def test_manifest_closure_reaches_deep_choices():
    m = {"packages": [pkg("a", "1.0", ("b", "1.0")), pkg("b", "1.0", ("c", "^1.0")), pkg("c", "1.0"), pkg("c", "1.1")]}
    d = manifest_to_predsc(m)
    assert d.dep("a-1.0") == {S({"b-1.0", "c-1.0"}), S({"b-1.0", "c-1.1"})}
    assert validate_dsc(d).ok


def test_manifest_errors():
    with pytest.raises(ResolutionError, match="z"):
        manifest_to_predsc({"packages": [pkg("a", "1.0", ("z", "^1.0"))]})
    loop = load_structure(fx("self_dependent.json"), validate=False)
    report = validate_dsc(loop)
    assert "D2" in report.failed_axioms()


def test_manifest_fixture():
    d = load_structure(fx("manifest.json"))
    assert d.dep("app-1.0.0") == {S({"lib-1.0.0", "log-2.0.0"}), S({"lib-1.1.0", "log-2.0.0"})}
    assert d.dep("lib-1.1.0") == {S({"log-2.0.0"})}


def test_ingestion_is_deterministic(capsys):
    a = run(capsys, "validate", fx("manifest.json"), "--emit")
    b = run(capsys, "validate", fx("manifest.json"), "--emit")
    assert a == b and a[0] == 0
    h1 = run(capsys, "merkle", fx("manifest.json"))
    h2 = run(capsys, "merkle", fx("manifest.json"))
    assert h1 == h2 and json.loads(h1[1])["nodes"]


def test_json_round_trip():
    for d in fixtures.ALL.values():
        d = d()
        assert from_json(json.loads(json.dumps(to_json(d)))) == d


# -- verbs ------------------------------------------------------------------------------------


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", fx("e1.json"))
    assert code == 0 and "valid" in out
    code, out, _ = run(capsys, "validate", fx("self_dependent.json"))
    assert code == 1 and "D2" in out
    code, out, _ = run(capsys, "validate", fx("self_dependent.json"), "--json")
    assert code == 1 and json.loads(out)["ok"] is False


def test_rdp(capsys):
    code, out, _ = run(capsys, "rdp", fx("e1.json"))
    assert code == 0 and out.startswith("7 elements, 9 covering pairs")
    code, out, _ = run(capsys, "rdp", fx("e1.json"), "--dot")
    assert out.startswith("digraph") and out.count("->") == 9
    assert out.count("[label=") == 7
    code, out, _ = run(capsys, "rdp", fx("e1.json"), "--json")
    assert len(json.loads(out)["elements"]) == 7


def test_antimatroid_and_bl(capsys):
    code, out, _ = run(capsys, "antimatroid", fx("e1.json"))
    assert code == 0 and "identical" in out
    code, out, _ = run(capsys, "bl", fx("e1.json"))
    assert code == 0 and out.startswith("9 elements") and "top: {ab,ac,b,c}" in out
    code, out, _ = run(capsys, "bl", fx("e1.json"), "--dot")
    assert out.startswith("digraph")


def test_merkle(capsys):
    code, out, _ = run(capsys, "merkle", fx("e1.json"))
    labels = {n["label"] for n in json.loads(out)["nodes"]}
    assert code == 0 and labels == {"b", "c", "ab", "ac"}


def test_morphism(capsys):
    code, out, _ = run(capsys, "morphism", fx("h_e1_to_rst.json"), "--json")
    res = json.loads(out)
    assert code == 0 and res["classification"]["morphism"] is False
    assert res["witnesses"]["morphism"] == {"event": "a", "depset": ["t"]}
    code, out, _ = run(capsys, "morphism", fx("k_uv_to_rst.json"))
    assert "morphism=no" in out


def test_constructions(capsys):
    code, out, _ = run(capsys, "coproduct", fx("e1.json"), fx("uv.json"))
    assert code == 0 and len(json.loads(out)["object"]["events"]) == 5
    code, out, _ = run(capsys, "product", fx("e1.json"), fx("uv.json"))
    assert code == 0 and len(json.loads(out)["object"]["events"]) == 6
    code, out, _ = run(capsys, "equalizer", fx("pick_a.json"), fx("pick_c.json"))
    assert code == 0 and json.loads(out)["object"]["events"] == []
    code, out, _ = run(capsys, "pullback", fx("pick_a.json"), fx("pick_a.json"))
    assert code == 0 and json.loads(out)["object"]["events"] == ["(*,*)"]
    code, out, _ = run(capsys, "double", fx("uv.json"), "v")
    assert code == 0 and "v#2" in json.loads(out)["object"]["events"]


def test_coequalizer(capsys):
    code, out, _ = run(capsys, "coequalizer", fx("pick_a.json"), fx("pick_c.json"), "--json")
    res = json.loads(out)
    assert code == 0 and res["exists"] and len(res["candidates"]) >= 3
    code, out, _ = run(capsys, "coequalizer", fx("pick_a.json"), fx("pick_c.json"))
    assert out.strip()


def test_versions(capsys):
    code, out, _ = run(capsys, "versions", fx("versions.json"))
    assert code == 0 and "p1 ◂ p2" in out and "equivalent: p1 p2" in out
    code, out, _ = run(capsys, "versions", fx("versions.json"), "--json")
    assert ["p1", "p2"] in json.loads(out)["classes"]


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "--count", "30", "--size", "5", "--seed", "3")
    assert code == 0 and "0 failures" in out


def test_fixture_references(capsys):
    code, out, _ = run(capsys, "rdp", "fixture:a.b&c")
    assert code == 0 and out.startswith("5 elements")
    assert run(capsys, "rdp", "fixture:nope")[0] == 3


# -- exit codes --------------------------------------------------------------------------------


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "rdp", fx("missing.json"))[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "rdp", str(bad))[0] == 3
    assert run(capsys, "rdp", fx("e1.json"), "--cap", "2")[0] == 2
    assert run(capsys, "double", fx("uv.json"), "q")[0] == 1
    assert run(capsys, "nonsense")[0] == 3
    assert run(capsys, "equalizer", fx("k_uv_to_rst.json"), fx("k_uv_to_rst.json"))[0] == 1


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "depchoice", "rdp", fx("e2.json")], capture_output=True, text=True
    )
    assert res.returncode == 0 and res.stdout.startswith("5 elements")
