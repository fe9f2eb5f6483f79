import json
import subprocess
import sys

import pytest

from torsor.cli import main
from torsor.io import data_path, shipped_local_system
from torsor.workbench import (
    EXIT_NON_REGULAR,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_VALIDATION,
    JobError,
    JobSpec,
    parse_representation,
    run_batch,
)


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def corrupted_complex(tmp_path):
    doc = json.loads(data_path("figure_eight.json").read_text())
    term = doc["cells"]["2"][0]["boundary"][0]
    term["sign"] = -term["sign"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_run_prints_golden_value(capsys):
    code, out, _ = cli(capsys, "run")
    assert code == EXIT_OK
    assert out == "360\n"


def test_json_report_round_trips_through_parser(capsys):
    code, out, _ = cli(capsys, "run", "--emit", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    field = shipped_local_system("iota_geom").field
    assert field.parse(doc["torsion"]) == 360
    assert doc["torsion_coefficients"] == ["360", "0"]
    assert doc["rank"] == 10 and doc["sign_fiber"] == 1
    assert doc["regularity"]["gamma_regular"] is True
    assert "seconds" not in doc


def test_output_is_byte_identical_across_runs(capsys):
    args = ("run", "--local-system", "geom", "--rep", "sl2-irrep(3)", "--emit", "report")
    first = cli(capsys, *args)
    second = cli(capsys, *args)
    assert first == second and first[0] == EXIT_OK


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "torsor.cli", "run", "--local-system", "geom", "--rep", "sl2-irrep(5)", "--emit", "embed"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == EXIT_OK
    assert len(proc.stdout.splitlines()) == 2


def test_non_regular_input_exits_with_its_own_code(capsys):
    code, out, _ = cli(capsys, "run", "--local-system", "geom", "--rep", "trivial(1)", "--emit", "report")
    assert code == EXIT_NON_REGULAR
    assert "torsion          0" in out and "gamma-regular    False" in out


def test_corrupted_complex_is_a_validation_failure(capsys, corrupted_complex):
    code, out, _ = cli(capsys, "validate", corrupted_complex)
    assert code == EXIT_VALIDATION and out.startswith("invalid:")
    code, _, err = cli(capsys, "run", "--complex", corrupted_complex)
    assert code == EXIT_VALIDATION and "validation" in err


def test_validate_shipped_files(capsys):
    code, out, _ = cli(capsys, "validate", str(data_path("figure_eight.json")))
    assert code == EXIT_OK and "(4, 14, 12, 2)" in out
    code, out, _ = cli(capsys, "validate", str(data_path("p_exotic.json")))
    assert code == EXIT_OK and "rank 4" in out


@pytest.mark.parametrize("argv", [
    ("run", "--rep", "sl2-irrep(3)"),  # wrong group for the rep
    ("run", "--local-system", "geom", "--rep", "sl2-irrep(4)"),  # does not descend to PGL(2)
    ("run", "--rep", "coadjoint"),
    ("run", "--complex", "/nonexistent.json"),
    ("run", "--loop", "lambda"),
    ("validate", "/nonexistent.json"),
])
def test_parse_errors(capsys, argv):
    code, _, err = cli(capsys, *argv)
    assert code == EXIT_PARSE
    assert err.startswith("error:")


def test_orientation_file(capsys, tmp_path):
    base = ("run", "--local-system", "geom", "--rep", "sl2-irrep(3)")
    _, plain, _ = cli(capsys, *base)
    o = tmp_path / "o.json"
    field = shipped_local_system("geom").field
    # the default cycles with the sign flipped, then with one cycle reversed as well
    o.write_text(json.dumps({"sign": -1, "classes": {"0": [{"v0": 1}], "1": [{"e1": 1}]}}))
    code, flipped, _ = cli(capsys, *base, "--orientation", str(o))
    assert code == EXIT_OK
    assert field.parse(flipped) == -field.parse(plain)
    o.write_text(json.dumps({"sign": -1, "classes": {"0": [{"v0": 1}], "1": [{"e1": -1}]}}))
    assert field.parse(cli(capsys, *base, "--orientation", str(o))[1]) == field.parse(plain)
    o.write_text(json.dumps({"classes": {"1": [{"nope": 1}]}}))
    assert cli(capsys, *base, "--orientation", str(o))[0] == EXIT_PARSE


def test_batch_keeps_job_order_and_is_worker_independent(capsys, tmp_path):
    jobs = [
        {"local_system": "geom", "rep": f"sl2-irrep({n})"} for n in (7, 3, 5)
    ] + [{"local_system": "geom", "rep": "trivial(1)"}, {"rep": "bogus"}]
    path = tmp_path / "jobs.json"
    path.write_text(json.dumps(jobs))
    code, out1, _ = cli(capsys, "batch", str(path))
    _, out2, _ = cli(capsys, "batch", str(path), "--workers", "3")
    assert out1 == out2
    results = json.loads(out1)
    assert [r["status"] for r in results] == [0, 0, 0, EXIT_NON_REGULAR, EXIT_PARSE]
    assert [r["report"]["representation"] for r in results[:3]] == ["sl2-irrep(7)", "sl2-irrep(3)", "sl2-irrep(5)"]
    assert code == max(r["status"] for r in results)


def test_job_spec_rejects_unknown_keys():
    with pytest.raises(JobError):
        JobSpec.from_dict({"complex": "figure-eight", "threads": 4})


def test_principal_embedding_route_matches_shipped_image():
    geom = shipped_local_system("geom")
    ls, _ = parse_representation("principal-embed-then-adjoint", geom)
    assert ls.group_tag.endswith("Sp(4)")
    doc = run_batch([JobSpec(local_system_path="geom", representation="principal-embed-then-adjoint")])[0]
    assert doc["status"] == EXIT_OK and doc["report"]["torsion"] == "360"


def test_selftest_quick(capsys):
    code, out, _ = cli(capsys, "selftest")
    assert code == EXIT_OK
    assert out.strip().endswith("8/8 passed")
