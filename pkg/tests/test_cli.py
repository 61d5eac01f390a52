from __future__ import annotations

import json

import pytest

from globkernel import cli, fixtures, omega


def run(argv):
    return cli.main(argv)


def write_structure(path, x):
    path.write_text(json.dumps(omega.omega_to_json(x)), encoding="utf-8")


@pytest.fixture()
def z2_file(tmp_path):
    path = tmp_path / "z2.json"
    write_structure(path, fixtures.delooping(fixtures.cyclic_table(2), 3))
    return path


def test_check_clean_exit_zero(z2_file, capsys):
    assert run(["check", str(z2_file), "--axioms", "l,r,f,li,ri"]) == 0
    out = capsys.readouterr().out
    assert "CHECK structure all PASS" in out
    assert "CHECK axiom:assoc all PASS" in out


def test_check_json_format(z2_file, capsys):
    assert run(["check", str(z2_file), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert all(entry["status"] == "PASS" for entry in payload)
    assert {"check", "scope", "status", "witness"} == set(payload[0])


def test_check_invalid_json_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    assert run(["check", str(path)]) == 2
    assert "input error" in capsys.readouterr().err


def test_check_missing_cell_exit_two(tmp_path, capsys):
    x = fixtures.delooping(fixtures.cyclic_table(2), 2)
    data = omega.omega_to_json(x)
    data["tgt"][0]["1"] = "ghost"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert run(["check", str(path)]) == 2
    assert "input error" in capsys.readouterr().err


def test_check_axiom_violation_exit_one(tmp_path, capsys):
    x = fixtures.delooping(fixtures.cyclic_table(3), 2)
    data = omega.omega_to_json(x)
    data["comp"]["1,0"]["0|2"] = "1"  # left unit broken at 2
    path = tmp_path / "fault.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert run(["check", str(path)]) == 1
    out = capsys.readouterr().out
    assert "CHECK axiom:left_unit all FAIL" in out
    assert "left_unit(1,0)" in out  # witness printed


def test_missing_file_exit_two(capsys):
    assert run(["check", "/no/such/file.json"]) == 2


def test_twist_pipeline(tmp_path, z2_file, capsys):
    out_path = tmp_path / "z2_twist.json"
    assert run(["twist", str(z2_file), "-o", str(out_path)]) == 0
    assert run(["check", str(out_path), "--axioms", "l,r,f,li,ri"]) == 0
    # double twist stays clean
    out2 = tmp_path / "z2_twist2.json"
    assert run(["twist", str(out_path), "-o", str(out2)]) == 0
    assert run(["check", str(out2)]) == 0


def test_twist_truncation_zero_exit_two(tmp_path, capsys):
    path = tmp_path / "point.json"
    write_structure(path, fixtures.discrete(("a",), 0))
    assert run(["twist", str(path), "-o", str(tmp_path / "out.json")]) == 2


def test_decalage_command(tmp_path, capsys):
    path = tmp_path / "sus.json"
    write_structure(path, fixtures.suspension(fixtures.cyclic_table(2), 1, 4))
    assert run(["decalage", str(path), "--max-width", "3", "--max-dim", "3"]) == 0
    out = capsys.readouterr().out
    assert "CHECK section" in out
    assert "CHECK apex-naturality" in out
    assert "CHECK lift-non-naturality" in out
    assert "FAIL" not in out


def test_decalage_dims_too_deep_exit_two(z2_file, capsys):
    # truncation 3 cannot lift dimension-3 cells
    assert run(["decalage", str(z2_file), "--max-dim", "3"]) == 2
    assert "input error" in capsys.readouterr().err


def test_decalage_fault_exit_one(tmp_path, capsys):
    x = fixtures.suspension(fixtures.cyclic_table(2), 1, 4)
    units = [dict(t) for t in x.unit]
    units[2]["0"] = "1"
    bad = omega.OmegaStructure(x.base, x.comp, tuple(units), x.inv)
    path = tmp_path / "fault.json"
    write_structure(path, bad)
    # the corrupted unit breaks the structure laws, so this is an input error
    assert run(["decalage", str(path)]) == 2


def test_delta_command(capsys):
    assert run(["delta", "--max-n", "2"]) == 0
    out = capsys.readouterr().out
    assert "comp: [1]->[2](0>0,1>2)" in out
    assert "CHECK shift-composition" in out
    assert "CHECK shift-generators comp PASS" in out


def test_fixture_command_suspension(tmp_path, capsys):
    out_path = tmp_path / "sus.json"
    code = run([
        "fixture", "suspension", "--group", "z3", "--dim", "2",
        "--trunc", "4", "-o", str(out_path),
    ])
    assert code == 0
    assert run(["check", str(out_path), "--axioms", "l,r,f,li,ri"]) == 0


def test_fixture_command_product(tmp_path, z2_file):
    other = tmp_path / "sus.json"
    assert run(["fixture", "suspension", "--group", "z2", "--dim", "1",
                "--trunc", "3", "-o", str(other)]) == 0
    out_path = tmp_path / "prod.json"
    assert run(["fixture", "product", "--files", str(z2_file), str(other),
                "-o", str(out_path)]) == 0
    assert run(["check", str(out_path)]) == 0


def test_sum_command(z2_file, capsys):
    assert run(["sum", "1 0 1", str(z2_file)]) == 0
    out = capsys.readouterr().out
    assert "4 tuples" in out


def test_sum_bad_table_exit_two(z2_file, capsys):
    assert run(["sum", "1 1 1", str(z2_file)]) == 2


def test_check_without_inverse_tables(tmp_path, capsys):
    # a structure with no inverse tables: inverse flags are an input mismatch,
    # the categorical flags pass
    x = fixtures.delooping(fixtures.cyclic_table(2), 2)
    data = omega.omega_to_json(x)
    del data["inv"]
    path = tmp_path / "noinv.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    assert run(["check", str(path), "--axioms", "l,r,f,li,ri"]) == 2
    assert "input error" in capsys.readouterr().err
    assert run(["check", str(path), "--axioms", "l,r,f"]) == 0


def test_json_report_mirrors_text(tmp_path, capsys):
    path = tmp_path / "sus.json"
    write_structure(path, fixtures.suspension(fixtures.cyclic_table(2), 1, 4))
    assert run(["decalage", str(path), "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert run(["decalage", str(path)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(payload) == len(lines)
    for entry, line in zip(payload, lines):
        assert line.startswith(f"CHECK {entry['check']} {entry['scope']} {entry['status']}")


def test_threads_env_does_not_change_output(z2_file, capsys, monkeypatch):
    assert run(["check", str(z2_file)]) == 0
    serial = capsys.readouterr().out
    monkeypatch.setenv("GLOB_KERNEL_THREADS", "4")
    assert run(["check", str(z2_file)]) == 0
    assert capsys.readouterr().out == serial
