import io
import json
from contextlib import redirect_stdout

import pytest

from homalg import cli
from homalg.specfile import parse_spec, schema

from jsonschema import Draft202012Validator

from conftest import fixture_names, fixture_path, load_fixture

SOLVER_POINT = ["--instantiate", "b=1", "--instantiate", "c122=2", "--instantiate", "c123=3",
                "--instantiate", "c132=4", "--instantiate", "c133=5"]


def run(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(list(argv) + ["--no-timing"])
    return code, buf.getvalue()


def report(*argv):
    code, out = run(*argv)
    return code, json.loads(out)["report"]


def statuses(rep):
    return {r["law"]: r["status"] for r in rep["results"]}


def test_jackson_holds():
    code, rep = report("check", fixture_path("jackson_sl2"), "--law", "antisymmetry", "--law", "hom_jacobi")
    assert code == 0
    assert statuses(rep) == {"antisymmetry": "holds", "hom_jacobi": "holds"}


def test_example1_associativity_witness():
    code, rep = report("check", fixture_path("example1_hom_assoc"), "--law", "associativity")
    assert code == 1
    (res,) = rep["results"]
    assert res["status"] == "fails"
    first = res["witnesses"][0]
    assert first["index"][:3] == [1, 1, 3] and first["value"] == "a*b - b^2"
    assert res["constraints"] == ["a*b - b^2"]


def test_empty_algebra_holds():
    code, rep = report("check", fixture_path("empty_algebra"))
    assert code == 0 and rep["status"] == "holds"


def test_conditional_exit_code():
    code, rep = report("check", fixture_path("hom_poisson_k3"))
    assert code == 2 and rep["status"] == "conditional"
    assert any(r["constraints"] for r in rep["results"] if r["status"] == "conditional")


def test_text_summary():
    code, out = run("check", fixture_path("jackson_sl2"), "--text")
    assert code == 0
    assert out.splitlines()[0].endswith("-> holds")


def test_twist_sl2_family1(tmp_path):
    out = tmp_path / "tw.json"
    code, text = run("twist", fixture_path("sl2"), fixture_path("sl2_alpha1"), "-o", str(out))
    assert code == 0
    rep = json.loads(text)["report"]
    assert statuses(rep)["hom_jacobi"] == "holds"
    twisted = json.loads(out.read_text())
    assert twisted["origin"]["weak"] is False
    # round trip: re-checking the written spec reproduces the embedded results
    code2, rep2 = report("check", str(out), "--law", ",".join(r["law"] for r in twisted["origin"]["results"]))
    assert code2 == 0
    assert rep2["results"] == twisted["origin"]["results"]


def test_twist_sklyanin_case3():
    code, text = run("twist", fixture_path("sklyanin"), fixture_path("sklyanin_alpha3"))
    assert code == 0
    spec = json.loads(text)
    assert spec["kind"] == "poly_poisson"
    assert all(r["status"] == "holds" for r in spec["origin"]["results"])


def test_identity_twist_returns_input(tmp_path):
    ident = {"kind": "morphism", "field": "Q", "params": [], "payload": {"dim": 3, "alpha": [[k, k, "1"] for k in (1, 2, 3)]}}
    mpath = tmp_path / "id.json"
    mpath.write_text(json.dumps(ident))
    code, text = run("twist", fixture_path("sl2"), str(mpath))
    assert code == 0
    out = json.loads(text)
    out.pop("origin")
    src = json.loads(open(fixture_path("sl2")).read())
    assert out == src


def test_failed_morphism_is_reported_not_written(tmp_path):
    out = tmp_path / "tw.json"
    code, text = run("twist", fixture_path("sl2"), fixture_path("sl2_alpha3"), "-o", str(out))
    assert code == 1
    assert not out.exists()


def test_solve_poisson_reports_space():
    code, rep = report("solve-poisson", fixture_path("hom_lie_solver"), *SOLVER_POINT)
    assert code in (0, 2)
    st = statuses(rep)
    assert st["antisymmetry"] == "holds" and st["hom_jacobi"] == "holds"
    assert rep["details"]["solution_space"]["dimension"] >= 1


def test_solve_poisson_abelian(tmp_path):
    spec = {"kind": "hom_algebra", "field": "Q", "params": [],
            "payload": {"dim": 2, "bracket": [], "alpha": [[1, 1, "1"], [2, 2, "1"]]}}
    path = tmp_path / "ab.json"
    path.write_text(json.dumps(spec))
    code, rep = report("solve-poisson", str(path))
    assert code == 2
    assert rep["details"]["solution_space"]["dimension"] == 6
    assert rep["details"]["constraints"]


@pytest.mark.parametrize("harness,name", [("assoc", "moyal_standard"), ("intertwine", "moyal_affine"),
                                          ("families", "moyal_families")])
def test_moyal_harnesses(harness, name):
    code, rep = report("moyal", fixture_path(name), "--harness", harness)
    st = statuses(rep)
    if harness == "families":
        assert st["deg1_i:degree1"] == "fails"
        assert st["deg1_i:hom_assoc_xyy"] == "fails"
        assert st["affine:hom_assoc_xyy"] == "holds"
    else:
        assert code == 0 and set(st.values()) == {"holds"}


@pytest.mark.parametrize("doc", [
    {"kind": "hom_algebra", "field": "Q", "params": [], "payload": {"dim": 1}, "extra": 1},
    {"kind": "nonsense", "field": "Q", "params": [], "payload": {}},
    {"kind": "hom_algebra", "field": "R", "params": [], "payload": {"dim": 1}},
    {"kind": "hom_algebra", "field": "Q", "params": [], "payload": {"dim": 2, "mult": [[1, 1, 3, "1"]]}},
    {"kind": "hom_algebra", "field": "Q", "params": [], "payload": {"dim": 1, "mult": [[1, 1, 1, "q"]]}},
])
def test_bad_input_exits_3(tmp_path, doc):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _ = run("check", str(path))
    assert code == 3


def test_missing_file_exits_3(tmp_path):
    assert run("check", str(tmp_path / "nope.json"))[0] == 3


def test_reports_match_schema_and_are_deterministic():
    validator = Draft202012Validator(schema("report"))
    for name in fixture_names():
        spec = load_fixture(name)
        if spec.kind == "morphism":
            continue
        argv = ["moyal" if spec.kind == "moyal_config" else "check", fixture_path(name)]
        first, second = run(*argv), run(*argv)
        assert first == second, name
        validator.validate(json.loads(first[1]))


def test_all_fixtures_validate():
    for name in fixture_names():
        parse_spec(json.loads(open(fixture_path(name)).read()))
