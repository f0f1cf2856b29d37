import json
import os

from tatebv.cli import main
from tatebv.harness import JobConfig, cmd_dims, cmd_tables


def run_json(capsys, *args):
    rc = main(list(args) + ["--format", "json"])
    out = capsys.readouterr().out
    return rc, json.loads(out)


def test_dims_s3(capsys):
    rc, data = run_json(capsys, "dims", "--group", "symmetric:3", "--char", "3",
                        "--window", "-4..3")
    assert rc == 0
    assert data["dims"]["total"] == [2, 1, 1, 2, 2, 1, 1, 2]
    assert data["dims"]["per_class"]["a"] == [1] * 8
    assert data["dims"]["direct"] == {"-3": 1, "-2": 1, "-1": 2, "0": 2, "1": 1, "2": 1}


def test_dims_c2_vanish(capsys):
    rc, data = run_json(capsys, "dims", "--group", "cyclic:2", "--char", "3",
                        "--window", "-3..2")
    assert rc == 0
    assert data["dims"]["total"] == [0] * 6


def test_info_perms(capsys):
    rc, data = run_json(capsys, "info", "--group", "perms:(0 1 2),(0 1)", "--char", "3",
                        "--window", "-2..2")
    assert rc == 0
    assert data["order"] == 6
    assert len(data["classes"]) == 3


def test_group_from_file(tmp_path, capsys):
    path = tmp_path / "c3.json"
    path.write_text(json.dumps({"mult": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]}))
    rc, data = run_json(capsys, "info", "--group", f"file:{path}", "--char", "3",
                        "--window", "-2..2")
    assert rc == 0
    assert data["order"] == 3


def test_invalid_config_exit_codes(capsys):
    assert main(["dims", "--group", "cyclic:2", "--char", "6", "--window", "-2..2"]) == 2
    assert main(["dims", "--group", "nosuch:3", "--char", "3", "--window", "-2..2"]) == 2
    assert main(["dims", "--group", "cyclic:2", "--char", "3", "--window", "2..-2"]) == 2
    capsys.readouterr()


def test_cost_cap_exit_code(capsys):
    assert main(["dims", "--group", "cyclic:5", "--char", "5", "--window", "-200..200"]) == 3
    assert main(["export-diff", "--group", "symmetric:4", "--char", "2",
                 "--window", "-9..9"]) == 3
    capsys.readouterr()


def test_selftest_and_verify_exit_zero(capsys):
    assert main(["selftest", "--group", "cyclic:3", "--char", "3", "--window", "-2..2",
                 "--seed", "5"]) == 0
    assert main(["verify-appendix-b", "--group", "cyclic:3", "--char", "3",
                 "--window", "-3..2"]) == 0
    capsys.readouterr()


def test_appendix_needs_modular_characteristic(capsys):
    assert main(["verify-appendix-b", "--group", "cyclic:3", "--char", "2",
                 "--window", "-3..2"]) == 2
    capsys.readouterr()


def test_json_determinism():
    cfg = JobConfig(group="symmetric:3", p=3, window=(-3, 2), seed=9, fmt="json")
    a = json.dumps(cmd_dims(cfg), sort_keys=True)
    b = json.dumps(cmd_dims(cfg), sort_keys=True)
    assert a == b
    ta = json.dumps(cmd_tables(cfg), sort_keys=True)
    tb = json.dumps(cmd_tables(cfg), sort_keys=True)
    assert ta == tb


def test_threads_same_output():
    base = JobConfig(group="symmetric:3", p=3, window=(-3, 2), seed=1)
    multi = JobConfig(group="symmetric:3", p=3, window=(-3, 2), seed=1, threads=4)
    a = json.dumps(cmd_dims(base), sort_keys=True)
    b = json.dumps(cmd_dims(multi), sort_keys=True)
    assert json.loads(a)["dims"] == json.loads(b)["dims"]


def test_export_diff_triples(capsys):
    rc, data = run_json(capsys, "export-diff", "--group", "cyclic:2", "--char", "2",
                        "--window", "-2..1")
    assert rc == 0
    from tatebv.complexes import DComplex
    from tatebv.groups import preset_group
    dc = DComplex(preset_group("cyclic", 2), 2, (-2, 1))
    expected = []
    for d in (-2, -1, 0):
        for i, j, v in dc.matrix(d).triples():
            expected.append([d, i, j, v])
    assert data["triples"] == expected


def test_csv_output(tmp_path, capsys):
    rc = main(["dims", "--group", "cyclic:2", "--char", "2", "--window", "-2..1",
               "--format", "csv", "--output", str(tmp_path)])
    assert rc == 0
    capsys.readouterr()
    files = sorted(os.listdir(tmp_path))
    assert "tatebv_dims_total.csv" in files
    text = (tmp_path / "tatebv_dims_total.csv").read_text().splitlines()
    assert text[0] == "degree,dim"
    assert len(text) == 5


def test_tables_c2_f2_structure():
    cfg = JobConfig(group="cyclic:2", p=2, window=(-2, 1), seed=0)
    data = cmd_tables(cfg)
    tables = data["tables"]
    assert tables["spot_check"]["failed"] == 0
    # every in-window product of basis classes is a single basis class
    for key, val in tables["cup"].items():
        if val is None:
            continue
        assert len(val) <= 1
    # the BV column of every degree-0 class vanishes
    for key, val in tables["delta"].items():
        if "deg0" in key.split(":")[0] and val is not None:
            assert val == {}


def test_verify_s3_text_output(capsys):
    rc = main(["verify-s3", "--group", "symmetric:3", "--char", "3",
               "--window", "-4..3"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "result: PASS" in out
    assert "DIFFERS from source" in out
    assert main(["verify-s3", "--char", "5", "--window", "-4..3"]) == 2
    capsys.readouterr()
