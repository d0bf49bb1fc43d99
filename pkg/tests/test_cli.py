import json

import jsonschema
import pytest

from nilrigid.cli import main
from nilrigid.documents import (
    EXAMPLE_NAMES,
    GEOMETRY_SCHEMA,
    INPUT_SCHEMA,
    InputError,
    PERTURB_SCHEMA,
    VERDICT_SCHEMA,
    example_pair,
    input_document_dict,
    load_input_file,
    parse_input_mapping,
    parse_rational,
    rational_str,
)

HEISENBERG_TOML = """
[metadata]
name = "heisenberg-demo"

[algebra]
dim = 3
basis = ["X", "Y", "Z"]

[[algebra.brackets]]
left = "X"
right = "Y"
result = { Z = "1" }

[automorphism]
matrix = ["2", "1", "0", "1", "1", "0", "0", "0", "1"]
"""


@pytest.fixture()
def heis_file(tmp_path):
    p = tmp_path / "heis.toml"
    p.write_text(HEISENBERG_TOML)
    return str(p)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- document parsing ------------------------------------------------------------


def test_rational_string_roundtrip():
    from fractions import Fraction

    assert rational_str(Fraction(3, 1)) == "3"
    assert rational_str(Fraction(-7, 2)) == "-7/2"
    assert parse_rational("-7/2") == Fraction(-7, 2)
    assert parse_rational(4) == 4


def test_parse_rational_rejects_garbage():
    with pytest.raises(InputError):
        parse_rational("1/0")
    with pytest.raises(InputError):
        parse_rational("x")
    with pytest.raises(InputError):
        parse_rational(1.5)


def test_load_toml_and_build(heis_file):
    doc = load_input_file(heis_file)
    alg, matrix = doc.build()
    assert alg.dim == 3
    assert matrix[0, 0] == 2
    assert doc.metadata["name"] == "heisenberg-demo"


def test_json_input_equivalent(tmp_path):
    alg, matrix = example_pair("smale")
    doc = input_document_dict(alg, matrix, "smale")
    p = tmp_path / "smale.json"
    p.write_text(json.dumps(doc))
    parsed = load_input_file(str(p))
    alg2, matrix2 = parsed.build()
    assert alg2 == alg
    assert matrix2 == matrix


def test_nested_matrix_rows_accepted():
    alg, matrix = example_pair("cat2")
    doc = input_document_dict(alg, matrix, "cat2")
    doc["automorphism"]["matrix"] = [["2", "1"], ["1", "1"]]
    parsed = parse_input_mapping(doc)
    _, m = parsed.build()
    assert m == matrix


def test_bracket_orientation_normalized():
    doc = {
        "algebra": {
            "dim": 3,
            "basis": ["X", "Y", "Z"],
            "brackets": [{"left": "Y", "right": "X", "result": {"Z": "-1"}}],
        },
        "automorphism": {"matrix": ["1", "0", "0", "0", "1", "0", "0", "0", "1"]},
    }
    alg, _ = parse_input_mapping(doc).build()
    from nilrigid.algebra import heisenberg

    assert alg.structure == heisenberg().structure


def test_example_documents_validate_against_input_schema():
    for name in EXAMPLE_NAMES:
        alg, matrix = example_pair(name)
        doc = input_document_dict(alg, matrix, name)
        jsonschema.validate(doc, INPUT_SCHEMA)
        rebuilt_alg, rebuilt_m = parse_input_mapping(doc).build()
        assert rebuilt_alg == alg and rebuilt_m == matrix


def test_unknown_example_rejected():
    with pytest.raises(InputError):
        example_pair("nope")


# -- CLI surface -------------------------------------------------------------------


def test_verdict_smale_rigid(capsys):
    code, out, _ = run_cli(capsys, "verdict", "--example", "smale")
    assert code == 0
    assert "RIGID" in out and "NOT RIGID" not in out


def test_verdict_free32_not_rigid(capsys):
    code, out, _ = run_cli(capsys, "verdict", "--example", "free32")
    assert code == 0
    assert "NOT RIGID" in out


def test_verdict_heisenberg_inapplicable(capsys):
    code, out, _ = run_cli(capsys, "verdict", "--example", "heisenberg")
    assert code == 0
    assert "INAPPLICABLE" in out


def test_example_subcommand_loads(capsys):
    for name in ("smale", "free32"):
        code, out, _ = run_cli(capsys, "example", name)
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, INPUT_SCHEMA)


def test_parse_error_exit_1(capsys, tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text(HEISENBERG_TOML.replace('Z = "1"', 'Z = "1/0"'))
    code, _, err = run_cli(capsys, "verdict", str(p))
    assert code == 1
    assert "error" in err


def test_missing_file_exit_1(capsys):
    code, _, err = run_cli(capsys, "verdict", "/nonexistent/file.toml")
    assert code == 1


def test_lattice_failure_exit_2(capsys, tmp_path):
    p = tmp_path / "lat.toml"
    p.write_text(HEISENBERG_TOML.replace(
        'matrix = ["2", "1", "0", "1", "1", "0", "0", "0", "1"]',
        'matrix = ["2", "0", "0", "0", "2", "0", "0", "0", "4"]',
    ))
    code, _, err = run_cli(capsys, "verdict", str(p))
    assert code == 2
    assert "lattice" in err


def test_bracket_violation_exit_2(capsys, tmp_path):
    p = tmp_path / "brk.toml"
    p.write_text(HEISENBERG_TOML.replace(
        'matrix = ["2", "1", "0", "1", "1", "0", "0", "0", "1"]',
        'matrix = ["2", "0", "0", "0", "1", "0", "0", "0", "1"]',
    ))
    code, _, err = run_cli(capsys, "verdict", str(p))
    assert code == 2
    assert "automorphism" in err


def test_validate_subcommand(capsys, heis_file):
    code, out, _ = run_cli(capsys, "validate", heis_file)
    assert code == 0
    assert "valid automorphism" in out


def test_invalid_algebra_exit_2(capsys, tmp_path):
    # [X, Z] = X breaks the Jacobi identity
    p = tmp_path / "jac.toml"
    p.write_text(
        HEISENBERG_TOML
        + '\n[[algebra.brackets]]\nleft = "X"\nright = "Z"\nresult = { X = "1" }\n'
    )
    code, _, err = run_cli(capsys, "validate", str(p))
    assert code == 2
    assert "Jacobi" in err


def test_grading_subcommand_json(capsys):
    code, out, _ = run_cli(capsys, "grading", "--example", "free32", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["grade_dims"] == [3, 3]
    assert doc["carnot_verified"] is True


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_verdict_json_schema_all_builders(capsys, name):
    code, out, _ = run_cli(capsys, "verdict", "--example", name, "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), VERDICT_SCHEMA)


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_geometry_json_schema_all_builders(capsys, name):
    code, out, _ = run_cli(capsys, "geometry-check", "--example", name, "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, GEOMETRY_SCHEMA)
    assert doc["passed"] is True


def test_perturb_witness_free32_invert(capsys):
    code, out, _ = run_cli(capsys, "perturb-witness", "--example", "free32", "--invert", "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, PERTURB_SCHEMA)
    assert doc["shear_data"]["inverted"] is True
    assert doc["witness"] is True
    assert doc["right"] == [0.0, 0.0] or doc["right"] == [-0.0, 0.0]


def test_perturb_witness_smale_none(capsys):
    code, out, _ = run_cli(capsys, "perturb-witness", "--example", "smale", "--json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, PERTURB_SCHEMA)
    assert doc["shear_data"] is None
    assert doc["witness"] is False


def test_perturb_witness_cat2_unsupported(capsys):
    code, _, err = run_cli(capsys, "perturb-witness", "--example", "cat2")
    assert code == 2


def test_perturb_witness_mode_flag(capsys):
    code, out, _ = run_cli(
        capsys, "perturb-witness", "--example", "free32", "--invert", "--K", "3", "--mode", "1,1,0", "--json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["mode"] == [1, 1, 0]
    assert doc["witness"] is True


def test_analyze_text_output(capsys):
    code, out, _ = run_cli(capsys, "analyze", "--example", "smale")
    assert code == 0
    assert "eigenvalues:" in out and "grade dims" in out


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_validate_json_schema_all_builders(capsys, name):
    from nilrigid.documents import VALIDATE_SCHEMA

    code, out, _ = run_cli(capsys, "validate", "--example", name, "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), VALIDATE_SCHEMA)


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_grading_json_schema_all_builders(capsys, name):
    from nilrigid.documents import GRADING_SCHEMA

    code, out, _ = run_cli(capsys, "grading", "--example", name, "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), GRADING_SCHEMA)


@pytest.mark.parametrize("name", EXAMPLE_NAMES)
def test_analyze_json_schema_all_builders(capsys, name):
    code, out, _ = run_cli(capsys, "analyze", "--example", name, "--json")
    assert code == 0
    jsonschema.validate(json.loads(out), VERDICT_SCHEMA)


def test_undecided_verdict_exit_3(capsys, tmp_path):
    # Lehmer companion block on a torus: hyperbolicity cannot be certified
    lehmer = [1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]
    n = 10
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = 1
    for i in range(n):
        rows[i][n - 1] = -lehmer[i]
    doc = {
        "algebra": {"dim": n, "basis": [f"e{i}" for i in range(n)], "brackets": []},
        "automorphism": {"matrix": [str(x) for row in rows for x in row]},
    }
    p = tmp_path / "salem.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "verdict", str(p))
    assert code == 3
    assert "UNDECIDED" in out


def test_negative_tolerance_exit_1(capsys):
    code, _, err = run_cli(capsys, "verdict", "--example", "cat2", "--tol", "-1")
    assert code == 1
    assert "error" in err


def test_precision_bits_env_override(monkeypatch):
    from nilrigid.roots import precision_cap_bits

    monkeypatch.setenv("NILRIGID_PRECISION_BITS", "512")
    assert precision_cap_bits() == 512
    monkeypatch.setenv("NILRIGID_PRECISION_BITS", "junk")
    assert precision_cap_bits() == 4096
    monkeypatch.delenv("NILRIGID_PRECISION_BITS")
    assert precision_cap_bits() == 4096


def test_cross_process_byte_identical_reports():
    import os
    import subprocess
    import sys

    outs = []
    for seed in ("1", "7"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "nilrigid.cli", "verdict", "--example", "free32", "--json"],
            capture_output=True,
            env=env,
            check=True,
        )
        outs.append(proc.stdout)
    assert outs[0] == outs[1]


def test_byte_identical_reports(capsys):
    _, out1, _ = run_cli(capsys, "verdict", "--example", "free32", "--json")
    _, out2, _ = run_cli(capsys, "verdict", "--example", "free32", "--json")
    assert out1 == out2
    _, g1, _ = run_cli(capsys, "geometry-check", "--example", "smale", "--json")
    _, g2, _ = run_cli(capsys, "geometry-check", "--example", "smale", "--json")
    assert g1 == g2
    _, p1, _ = run_cli(capsys, "perturb-witness", "--example", "free32", "--json")
    _, p2, _ = run_cli(capsys, "perturb-witness", "--example", "free32", "--json")
    assert p1 == p2
