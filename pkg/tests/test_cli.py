import json
import os

import pytest

from tqrgroups import cli


def _run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_parse_group_specs():
    assert cli.parse_group_spec("cyclic:12") == \
        {"family": "cyclic", "params": {"n": 12}}
    assert cli.parse_group_spec("family:affine:5") == \
        {"family": "affine", "params": {"p": 5}}
    assert cli.parse_group_spec("quaternion8")["family"] == "quaternion8"
    nested = cli.parse_group_spec("product(cyclic(2),symmetric(4))")
    assert nested["params"]["left"] == {"family": "cyclic", "params": {"n": 2}}
    assert nested["params"]["right"] == {"family": "symmetric", "params": {"n": 4}}


def test_parse_group_spec_from_file(tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"family": "dihedral", "params": {"n": 4}}))
    assert cli.parse_group_spec(f"@{path}") == \
        {"family": "dihedral", "params": {"n": 4}}


def test_group_subcommand(capsys):
    code, doc = _run(["group", "--group", "quaternion8", "--normal-subgroups"],
                     capsys)
    assert code == 0
    rep = doc["report"]
    assert rep["order"] == 8
    assert rep["class_sizes"] == [1, 1, 2, 2, 2]
    assert rep["center_order"] == 2
    assert rep["quotient_chain_orders"] == [8, 4, 1]
    assert rep["normal_subgroup_orders"] == [1, 2, 4, 4, 4, 8]


def test_check_subcommand_q8(capsys):
    code, doc = _run(["check", "--group", "family:quaternion8",
                      "--criterion", "all"], capsys)
    assert code == 0
    by_id = {r["criterion"]: r for r in doc["report"]["criteria"]}
    assert by_id["tqr1"]["holds"] is False
    assert by_id["tqr1"]["witness"]["labels"] == ["-1"]
    assert by_id["tqr4"]["holds"] is False
    assert doc["version"]


def test_cover_subcommand_affine5(capsys):
    code, doc = _run(["cover", "--group", "family:affine:5", "--v1", "irrep:4",
                      "--v2", "irrep:4", "--v3", "irrep:4", "--profile"], capsys)
    assert code == 0
    rep = doc["report"]
    assert rep["guaranteed"] and rep["covered"]
    assert rep["multiplicity_profile"]["multiplicities"] == [192, 192, 192, 192, 832]


def test_cover_exit_code_on_violation(monkeypatch, capsys):
    from tqrgroups.criteria import CoverReport

    def fake(T, v1, v2):
        return CoverReport("two_factor", [1.0, 1.0], True, False, (0,))
    monkeypatch.setattr(cli, "two_factor_cover", fake)
    code, doc = _run(["cover", "--group", "symmetric:3", "--v1", "all",
                      "--v2", "all"], capsys)
    assert code == 1
    assert doc["report"]["guarantee_violated"]


def test_markov_subcommand(tmp_path, capsys):
    csv = tmp_path / "curve.csv"
    out = tmp_path / "markov.json"
    code = cli.main(["markov", "--group", "symmetric:3", "--rep", "irrep:2",
                     "--metric", "tv", "--epsilon", "0.25",
                     "--tmax", "8", "--csv", str(csv), "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["mixing_time"] is not None
    lines = csv.read_text().splitlines()
    assert lines[0] == "t,uniform,tv_max,tv_half_l1"
    assert len(lines) == 10


def test_counterexample_subcommand(capsys):
    code, doc = _run(["counterexample", "--group", "cyclic:12",
                      "--normal", "group", "--m", "2", "--epsilon", "1/4"],
                     capsys)
    assert code == 0
    rep = doc["report"]["construction"]
    assert rep["set_size"] == 3
    assert rep["power_measure_at_most_half"]
    assert doc["report"]["rep"]["mult"]


def test_counterexample_normal_selectors(capsys):
    code, doc = _run(["counterexample", "--group", "quaternion8",
                      "--normal", "order:8", "--m", "3"], capsys)
    assert code == 0
    code2, doc2 = _run(["counterexample", "--group", "quaternion8",
                        "--normal", "center", "--m", "3"], capsys)
    assert code2 == 0
    assert doc2["report"]["normal_order"] == 2


def test_sumset_subcommand(capsys):
    code, doc = _run(["sumset", "--factors", "12", "--set", "0;1;2", "--m", "2"],
                     capsys)
    assert code == 0
    assert doc["report"]["size"] == 5
    code, doc = _run(["sumset", "--set", "0;1", "--m", "3", "--n", "2",
                      "--cover"], capsys)
    assert code == 0
    assert doc["report"]["count"] == 3


def test_chartable_export_import(tmp_path, capsys):
    table = tmp_path / "t.json"
    code = cli.main(["chartable", "--group", "dihedral:4",
                     "--export", str(table), "--out", os.devnull])
    assert code == 0
    code2, doc = _run(["chartable", "--import", str(table)], capsys)
    assert code2 == 0
    assert doc["report"]["source"] == "imported"
    assert doc["report"]["dims"] == [1, 1, 1, 1, 2]


def test_usage_errors(capsys):
    assert cli.main(["check", "--group", "nosuchfamily:3"]) == 2
    assert cli.main(["group", "--group", "affine:6"]) == 2
    assert cli.main(["counterexample", "--group", "symmetric:4",
                     "--normal", "order:99"]) == 2
    assert cli.main(["chartable"]) == 2
    capsys.readouterr()


def test_markov_start_selector(capsys):
    code, doc = _run(["markov", "--group", "symmetric:3", "--rep", "irrep:2",
                      "--start", "trivial", "--tmax", "4"], capsys)
    assert code == 0
    assert doc["report"]["start"] == 0
    # from the trivial irrep the first step is deterministic, so t=1 already
    # has all mass on the 2-dim irrep
    assert doc["report"]["curve"][1]["tv_half_l1"] == pytest.approx(1 / 3)


def test_suite_runs_and_is_deterministic(tmp_path, capsys):
    config = {"experiments": [
        {"id": "q8", "command": "check",
         "args": {"group": "quaternion8", "criterion": "tqr1", "seed": 3}},
        {"id": "cover", "command": "cover",
         "args": {"group": "affine:5", "v1": "irrep:4", "v2": "irrep:4"}},
        {"id": "bad", "command": "group", "args": {"group": "affine:9"}},
        {"id": "walk", "command": "markov",
         "args": {"group": "symmetric:3", "rep": "irrep:2", "tmax": 6,
                  "csv": "walk.csv"}},
    ]}
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps(config))
    outs = []
    for sub in ("one", "two"):
        outdir = tmp_path / sub
        code = cli.main(["suite", "--config", str(cfg), "--outdir", str(outdir)])
        assert code == 0
        capsys.readouterr()
        blobs = {}
        for fn in sorted(os.listdir(outdir)):
            blobs[fn] = (outdir / fn).read_bytes()
        outs.append(blobs)
    assert sorted(outs[0]) == sorted(outs[1])
    for fn in outs[0]:
        assert outs[0][fn] == outs[1][fn], fn
    summary = json.loads((tmp_path / "one" / "summary.json").read_text())
    statuses = {e["id"]: e["status"] for e in summary["experiments"]}
    assert statuses == {"q8": "ok", "cover": "ok", "bad": "error", "walk": "ok"}
