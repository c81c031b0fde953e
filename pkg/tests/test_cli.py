import json

import pytest

from framecat.cli import main
from framecat.corpus import m3_lattice, pair_groupoid
from framecat.documents import WorkbenchDocument, serialize_document
from framecat.order import FiniteFrame


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("docs")
    assert main(["corpus", "emit", str(d)]) == 0
    return d


def test_corpus_emit_writes_documents(fixture_dir):
    files = sorted(p.name for p in fixture_dir.glob("*.json"))
    assert "pair2.topcategory.json" in files
    assert "omega-pair2.rqf.json" in files
    assert "pi-omega-pair2.crm.json" in files


def test_validate_passes_on_corpus_document(fixture_dir, capsys):
    code = main(["validate", str(fixture_dir / "pair3.topcategory.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS]" in out and "0 failed" in out


def test_validate_fails_on_m3(tmp_path, capsys):
    doc = WorkbenchDocument("frame", "m3", FiniteFrame(m3_lattice()))
    path = tmp_path / "m3.frame.json"
    path.write_text(serialize_document(doc))
    code = main(["validate", str(path)])
    out = capsys.readouterr().out
    assert code == 1
    assert "frame.distributivity" in out


def test_missing_file_is_an_input_error(capsys):
    assert main(["validate", "/no/such/file.json"]) == 2


def test_unparseable_file_is_an_input_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["validate", str(path)]) == 2


def test_unknown_command_is_an_input_error():
    assert main(["frobnicate"]) == 2


def test_bound_exceeded_exit_code(fixture_dir):
    code = main(["--max-elements", "4", "omega",
                 str(fixture_dir / "pair2.topcategory.json")])
    assert code == 3


def test_omega_command_emits_rqf(fixture_dir, tmp_path, capsys):
    out_path = tmp_path / "omega.json"
    code = main(["omega", str(fixture_dir / "semilattice-monoid.topcategory.json"),
                 "--out", str(out_path)])
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["kind"] == "rqf"
    assert doc["payload"]["n"] == 4


def test_cpoints_command_emits_topcategory(fixture_dir, capsys):
    code = main(["cpoints", str(fixture_dir / "omega-pair2.rqf.json")])
    out = capsys.readouterr().out
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "topcategory"
    assert doc["payload"]["arrows"] == 4


def test_roundtrip_command_on_category(fixture_dir, capsys):
    code = main(["roundtrip", str(fixture_dir / "pair2.topcategory.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "omega-isomorphism" in out and "chi-on-omega-image" in out


def test_roundtrip_command_on_rqf(fixture_dir, capsys):
    code = main(["roundtrip", str(fixture_dir / "omega-semilattice-monoid.rqf.json")])
    assert code == 0


def test_crm_command_roundtrips(fixture_dir, capsys):
    assert main(["crm", str(fixture_dir / "omega-pair2.rqf.json")]) == 0
    assert main(["crm", str(fixture_dir / "pi-omega-pair2.crm.json")]) == 0


def test_adjoint_command_theorem_one(fixture_dir, capsys):
    code = main(["adjoint", str(fixture_dir / "pair2.topcategory.json"),
                 str(fixture_dir / "omega-pair2.rqf.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "homset sizes (2, 2)" in out


def test_adjoint_command_theorem_two(fixture_dir, capsys):
    code = main(["adjoint", str(fixture_dir / "pair2.topcategory.json"),
                 str(fixture_dir / "pi-omega-pair2.crm.json")])
    out = capsys.readouterr().out
    assert code == 0
    assert "adjunction-II" in out


def test_json_format_summary(fixture_dir, capsys):
    code = main(["--format", "json", "validate",
                 str(fixture_dir / "chain3.frame.json")])
    out = capsys.readouterr().out
    assert code == 0
    payload = json.loads(out)
    assert payload["failed"] == 0
    assert payload["checks"]


def test_corpus_run_is_deterministic_across_jobs(capsys):
    def run(jobs):
        code = main(["--format", "json", "--jobs", jobs, "corpus", "run"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        return [(c["instance"], c["check"], c["status"], c.get("witness"))
                for c in payload["checks"]]

    first = run("1")
    second = run("4")
    assert first == second


def test_validate_functor_document(tmp_path, capsys):
    import numpy as np
    from framecat.documents import StructMorphism
    tc = pair_groupoid(2)
    m = StructMorphism("functor", tc, tc, np.array([3, 2, 1, 0], dtype=np.int64))
    path = tmp_path / "swap.functor.json"
    path.write_text(serialize_document(WorkbenchDocument("functor", "swap", m)))
    assert main(["validate", str(path)]) == 0
    out = capsys.readouterr().out
    assert "continuity" in out
