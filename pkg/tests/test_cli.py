"""Exit codes, report shape and JSON schema conformance."""
import json
import os

import jsonschema
import pytest

from asq import cli
from asq.asconfig import save_config
from asq.groups import HeisenbergGroup, save_group
from asq.search import brute_force_as_configs

SCHEMA_PATH = os.path.join(os.path.dirname(__file__), "..", "docs",
                           "report_schema.json")


@pytest.fixture(scope="module")
def schema():
    with open(SCHEMA_PATH) as fh:
        return json.load(fh)


@pytest.fixture(scope="module")
def h3_files(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("h3")
    G = HeisenbergGroup(3)
    cfg = brute_force_as_configs(G)[0]
    gf = tmp / "h3.group"
    cf = tmp / "h3.cfg"
    gf.write_text(save_group(G))
    cf.write_text(save_config(cfg))
    # corrupt copy: duplicate U2
    lines = save_config(cfg).splitlines()
    lines[3] = "U2:" + lines[2].partition(":")[2]
    bad = tmp / "bad.cfg"
    bad.write_text("\n".join(lines) + "\n")
    return str(gf), str(cf), str(bad)


def run_json(tmp_path, argv, schema):
    out = tmp_path / "report.json"
    code = cli.main(list(argv) + ["--json", str(out), "--quiet"])
    rep = json.loads(out.read_text())
    jsonschema.validate(rep, schema)
    return code, rep


def test_verify_good_config(tmp_path, h3_files, schema):
    gf, cf, _ = h3_files
    code, rep = run_json(tmp_path, ["verify", gf, cf], schema)
    assert code == 0
    assert rep["verdicts"]["config_valid"]
    assert rep["verdicts"]["as_gq"] and rep["verdicts"]["kantor_gq"]
    assert rep["counts"]["srg_v"] == 27


def test_verify_corrupted_config(tmp_path, h3_files, schema):
    gf, _, bad = h3_files
    code, rep = run_json(tmp_path, ["verify", gf, bad], schema)
    assert code == 1
    assert rep["verdicts"]["config_valid"] is False
    assert "duplicate" in rep["notes"]["config_witness"]


def test_verify_missing_file_exit2(h3_files):
    gf, _, _ = h3_files
    assert cli.main(["--quiet", "verify", gf, "/nonexistent.cfg"]) == 2


def test_classify_8(tmp_path, schema):
    code, rep = run_json(tmp_path, ["classify", "8"], schema)
    assert code == 0
    assert rep["counts"]["configs_C2^3"] == 28
    assert sum(v for k, v in rep["counts"].items()) == 28


def test_classify_unsupported_order():
    assert cli.main(["--quiet", "classify", "5"]) == 2


def test_filters_heisenberg(tmp_path, schema):
    code, rep = run_json(tmp_path, ["filters", "heisenberg3"], schema)
    assert code == 0
    assert rep["verdicts"]["frattini_small"]


def test_filters_unknown_group():
    assert cli.main(["--quiet", "filters", "nope"]) == 2


def test_demo_field_reduction(tmp_path, schema):
    code, rep = run_json(tmp_path, ["demo", "field-reduction"], schema)
    assert code == 0


def test_demo_unknown():
    assert cli.main(["--quiet", "demo", "nope"]) == 2


def test_pseudoarcs_mixed_form_exit2():
    assert cli.main(["--quiet", "pseudoarcs", "deg-c4"]) == 2


def test_flags_accepted_after_subcommand(tmp_path, schema):
    code, rep = run_json(tmp_path, ["classify", "27"], schema)
    assert code == 0
    code2 = cli.main(["classify", "27", "--quiet", "--threads", "2"])
    assert code2 == 0


def test_bad_threads_env(monkeypatch):
    monkeypatch.setenv("ASQ_THREADS", "many")
    assert cli.main(["--quiet", "classify", "8"]) == 2


def test_report_passed_property():
    rep = cli.RunReport("verify")
    assert rep.passed
    rep.verdicts["x"] = False
    assert not rep.passed
