import json
import shutil
import subprocess

import pytest

from matcomp.cli import main
from matcomp.compose import compose_lax, compose_strict
from matcomp.core import Matroid, matroid_to_json, relation_from_json, relation_to_json, tensor, uniform_relation
from matcomp.digraph import path_relation
from matcomp.matroid_ops import delete, minor
from matcomp.sampling import labels

from test_digraph import REORIENTABLE, PERFECT, GLUE_LEFT

U24 = Matroid.uniform(2, ["a", "b", "c", "d"])
LAM = uniform_relation(labels("a", 1), labels("b", 2), 1)
MU = uniform_relation(labels("b", 2), labels("c", 1), -1)


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def files(tmp_path):
    return {
        "u24": write(tmp_path, "u24.json", matroid_to_json(U24)),
        "lam": write(tmp_path, "lam.json", relation_to_json(LAM)),
        "mu": write(tmp_path, "mu.json", relation_to_json(MU)),
        "loop": write(tmp_path, "loop.json", {"ground": ["e"], "bases": [[]]}),
        "coloop": write(tmp_path, "coloop.json", {"ground": ["e"], "bases": [["e"]]}),
        "bad_json": write(tmp_path, "bad.json", "{not json"),
        "bad_shape": write(tmp_path, "shape.json", {"ground": "abc", "bases": []}),
        "not_matroid": write(tmp_path, "nm.json", {"ground": ["a", "b"], "bases": [[], ["a", "b"]]}),
        "graph": write(tmp_path, "g.json", GLUE_LEFT.to_json()),
        "left": write(tmp_path, "left.json", REORIENTABLE.to_json()),
        "right": write(tmp_path, "right.json", PERFECT.to_json()),
    }


def test_check_matroid(capsys, files):
    code, doc = run_json(capsys, "check", files["u24"])
    assert code == 0
    assert doc == {"matroid": True, "rank": 2, "zero": False}


def test_check_invalid_family(capsys, files):
    code, doc = run_json(capsys, "check", files["not_matroid"])
    assert code == 0 and doc["matroid"] is False


def test_check_relation(capsys, files):
    code, doc = run_json(capsys, "check", files["lam"])
    assert code == 0
    # no pair of the form (empty, empty), so not a bimatroid
    assert doc == {"exchange": True, "degree": 1, "bimatroid": False, "zero": False}


def test_compose_strict_and_lax(capsys, files):
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"])
    assert code == 0 and relation_from_json(doc) == compose_strict(LAM, MU)
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"], "--lax")
    want = compose_lax(LAM, MU)
    assert code == 0
    assert doc["type"] == want.type.as_list()
    assert relation_from_json(doc["relation"]) == want.relation


def test_compose_semiring(capsys, files):
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"], "--semiring", "zxy")
    assert code == 0 and doc["semiring"] == "zxy"
    assert all(isinstance(t["coefficient"], str) for t in doc["terms"])
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"], "--semiring", "bool11")
    assert [relation_from_json(t["relation"]) for t in doc["terms"]] == [compose_lax(LAM, MU).relation]


def test_compose_mode_flags_exclusive(files):
    with pytest.raises(SystemExit) as exc:
        main(["compose", files["lam"], files["mu"], "--lax", "--strict"])
    assert exc.value.code == 2


def test_compose_middle_mismatch_is_domain_error(capsys, files):
    code, doc = run_json(capsys, "compose", files["lam"], files["lam"])
    assert code == 1 and doc["error"]["kind"] == "domain"


def test_tensor_and_complement(capsys, files):
    code, doc = run_json(capsys, "tensor", files["lam"], files["mu"])
    assert code == 0 and relation_from_json(doc) == tensor(LAM, MU)
    code, doc = run_json(capsys, "complement", files["lam"])
    assert code == 0 and len(doc["pairs"]) == len(LAM)


def test_dual(capsys, files):
    code, doc = run_json(capsys, "dual", files["u24"])
    assert code == 0 and len(doc["bases"]) == 6 and all(len(b) == 2 for b in doc["bases"])


def test_delete_contract(capsys, files):
    code, doc = run_json(capsys, "delete", files["u24"], "--point", "a")
    assert code == 0 and doc == matroid_to_json(delete(U24, "a"))
    code, doc = run_json(capsys, "delete", files["coloop"], "--point", "e", "--strict")
    assert code == 0 and doc["bases"] == []
    code, doc = run_json(capsys, "contract", files["loop"], "--point", "e")
    assert code == 0 and doc == {"ground": [], "bases": [[]]}
    code, doc = run_json(capsys, "contract", files["u24"], "--point", "z")
    assert code == 1 and doc["error"]["kind"] == "domain"


def test_minor(capsys, files):
    code, doc = run_json(capsys, "minor", files["u24"], "--delete", "a", "--contract", "b,c")
    assert code == 0 and doc == matroid_to_json(minor(U24, ["a"], ["b", "c"]))


def test_pointed_connections(capsys, tmp_path):
    tri = write(tmp_path, "tri.json", {"ground": ["p", "q", "x"], "bases": [["p", "q"], ["p", "x"], ["q", "x"]], "basepoint": "x"})
    dig = write(tmp_path, "dig.json", {"ground": ["r", "y"], "bases": [["r"], ["y"]], "basepoint": "y"})
    code, doc = run_json(capsys, "twosum", tri, dig)
    assert code == 0 and doc["ground"] == ["p", "q", "r"]
    code, doc = run_json(capsys, "parallel", tri, dig, "--basepoint", "z")
    assert code == 0 and doc["basepoint"] == "z"
    code, doc = run_json(capsys, "series", tri, dig)
    assert code == 0 and "basepoint" in doc


def test_symmetrize(capsys, files, tmp_path):
    rel = write(tmp_path, "e.json", {"domain": [], "codomain": ["b1", "b2"], "pairs": [[[], ["b1"]]]})
    code, doc = run_json(capsys, "symmetrize", rel, "--points", "b1,b2")
    assert code == 0 and doc["pairs"] == [[[], ["b1"]], [[], ["b2"]]]


def test_tutte_text_and_json(capsys, files):
    code, out = run(capsys, "tutte", files["loop"])
    assert code == 0 and out == "x\n"
    code, out = run(capsys, "tutte", files["u24"])
    assert out == "x^2 + y^2 + 2 * x + 2 * y\n"
    code, doc = run_json(capsys, "tutte", files["coloop"], "--json")
    assert doc == {"tutte": "y", "terms": [[1, 0, 1]]}


def test_tutte_on_zero_matroid(capsys, tmp_path):
    zero = write(tmp_path, "zero.json", {"ground": ["a"], "bases": []})
    code, doc = run_json(capsys, "tutte", zero)
    assert code == 1 and doc["error"]["kind"] == "domain"


def test_path_and_epath(capsys, files):
    code, doc = run_json(capsys, "path", files["graph"])
    assert code == 0 and relation_from_json(doc) == path_relation(GLUE_LEFT)
    code, doc = run_json(capsys, "epath", files["graph"])
    assert code == 0 and doc["domain"] == ["1", "2"]
    code, out = run(capsys, "path", files["graph"], "--dot")
    assert code == 0 and out.startswith("digraph G {")


def test_bpath(capsys, files):
    code, doc = run_json(capsys, "bpath", files["right"])
    assert code == 0 and relation_from_json(doc) == path_relation(PERFECT)
    code, doc = run_json(capsys, "bpath", files["left"], "--lax")
    assert code == 0 and doc["type"] == [0, 0]
    code, doc = run_json(capsys, "bpath", files["graph"])
    assert code == 2 and doc["error"]["kind"] == "malformed"


def test_pathlax(capsys, tmp_path):
    doc = GLUE_LEFT.to_json()
    doc["extra_sources"] = ["1"]
    doc["extra_sinks"] = ["5"]
    path = write(tmp_path, "ext.json", doc)
    code, out = run_json(capsys, "pathlax", path)
    assert code == 0 and out["relation"]["domain"] == ["2"]
    assert out["relation"]["codomain"] == ["3", "4"]


def test_structure(capsys, files):
    code, doc = run_json(capsys, "structure", files["lam"], files["mu"])
    assert code == 0
    assert doc["type"] == compose_lax(LAM, MU).type.as_list()
    assert len(doc["K"]) == doc["type"][0] and len(doc["L"]) == doc["type"][1]


def test_mconvex_check(capsys, tmp_path):
    good = write(tmp_path, "good.json", {"vectors": [[1, 0], [0, 1]]})
    bad = write(tmp_path, "bad.json", {"vectors": [[2, 0], [0, 2]]})
    rel = write(tmp_path, "rel.json", {"domain": ["1"], "codomain": ["1"], "pairs": [[[0], [0]], [[1], [1]]]})
    assert run_json(capsys, "mconvex-check", good) == (0, {"mconvex": True})
    assert run_json(capsys, "mconvex-check", bad) == (0, {"mconvex": False})
    assert run_json(capsys, "mconvex-check", rel) == (0, {"mconvex": True, "bounds": [1, 1]})


def test_skeleton(capsys, tmp_path):
    doc = relation_to_json(uniform_relation(labels("a", 3), labels("b", 2), 1))
    doc["domain_blocks"] = [["a0", "a1", "a2"]]
    doc["codomain_blocks"] = [["b0", "b1"]]
    code, out = run_json(capsys, "skeleton", write(tmp_path, "s.json", doc))
    assert code == 0 and out["pairs"] == [[[0], [1]], [[1], [2]]]
    doc["codomain_blocks"] = [["b0"], ["b1"]]
    doc["pairs"] = [[[], ["b0"]]]
    doc["domain"], doc["domain_blocks"] = [], []
    code, out = run_json(capsys, "skeleton", write(tmp_path, "s2.json", doc))
    assert code == 0


def test_malformed_inputs(capsys, files, tmp_path):
    for path in (files["bad_json"], files["bad_shape"], str(tmp_path / "missing.json")):
        code, doc = run_json(capsys, "dual", path)
        assert code == 2 and doc["error"]["kind"] == "malformed"
    arr = write(tmp_path, "arr.json", [1, 2])
    assert run_json(capsys, "check", arr)[0] == 2


def test_invalid_matroid_is_domain_error(capsys, files):
    code, doc = run_json(capsys, "dual", files["not_matroid"])
    assert code == 1 and set(doc["error"]) == {"kind", "message"}


def test_ground_cap_is_domain_error(capsys, files, monkeypatch):
    monkeypatch.setenv("MATCOMP_MAX_GROUND", "1")
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"])
    assert code == 1 and doc["error"]["kind"] == "domain"


def test_output_file(capsys, files, tmp_path):
    target = tmp_path / "out.json"
    assert main(["-o", str(target), "dual", files["u24"]]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["ground"] == ["a", "b", "c", "d"]


def test_deterministic_output(capsys, files):
    first = run(capsys, "compose", files["lam"], files["mu"], "--semiring", "zxy")
    second = run(capsys, "compose", files["lam"], files["mu"], "--semiring", "zxy")
    assert first == second


def test_round_trip_through_serialization(capsys, files, tmp_path):
    code, doc = run_json(capsys, "compose", files["lam"], files["mu"], "--lax")
    again = write(tmp_path, "again.json", doc["relation"])
    code, echoed = run_json(capsys, "complement", again)
    code, back = run_json(capsys, "complement", write(tmp_path, "back.json", echoed))
    assert back == doc["relation"]


@pytest.mark.skipif(shutil.which("matcomp") is None, reason="console script not installed")
def test_console_script(files):
    proc = subprocess.run(["matcomp", "tutte", files["u24"]], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "x^2 + y^2 + 2 * x + 2 * y\n"
    proc = subprocess.run(["matcomp", "dual", files["bad_json"]], capture_output=True, text=True, check=False)
    assert proc.returncode == 2
