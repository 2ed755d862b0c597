import json

import numpy as np
import pytest

from epk.cli import main
from epk.serialize import dump_json


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bh_spectrum(capsys):
    code, out, _ = run(capsys, "bh", "--n", "2", "--gamma", "0", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "epk-1"
    eigs = [complex(re, im) for re, im in payload["report"]["eigenvalues"]]
    assert np.allclose(eigs, [-2, 0, 2])
    assert payload["report"]["classification"] == "real-nondegenerate"


def test_bh_text_output(capsys):
    code, out, _ = run(capsys, "bh", "--n", "1", "--gamma", "0.6")
    assert code == 0
    assert "real-nondegenerate" in out
    assert "-0.8, 0.8" in out


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bh"])  # missing required flags
    assert exc.value.code == 1


def test_unknown_command_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_domain_error_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    dump_json({"K": 2, "coeffs": {"1,0": -1}}, bad)  # spectrum +-i
    code, _, err = run(capsys, "unfold", "--fundamental", str(bad), "--lambda", "0.1")
    assert code == 2
    assert "real-nondegenerate" in err


def test_unfold_energies(tmp_path, capsys):
    good = tmp_path / "c.json"
    dump_json({"K": 2, "coeffs": {"1,0": 1}}, good)
    code, out, _ = run(capsys, "unfold", "--fundamental", str(good), "--lambda", "1e-2", "--json")
    assert code == 0
    assert np.allclose(json.loads(out)["energies"], [-0.1, 0.1])


def test_jordan_command(capsys):
    code, out, _ = run(capsys, "jordan", "--k", "5", "--json")
    assert code == 0
    assert json.loads(out)["residual"] < 1e-10


def test_ep_order_command(tmp_path, capsys):
    from epk.jordan import JordanSpec, jordan_matrix
    from epk.serialize import matrix_to_dict

    path = tmp_path / "m.json"
    dump_json(matrix_to_dict(jordan_matrix(JordanSpec(((2, 0j), (3, 0j))))), path)
    code, out, _ = run(capsys, "ep-order", "--input", str(path), "--eta", "0,0", "--json")
    assert code == 0
    assert json.loads(out)["block_sizes"] == [3, 2]


def test_converge_csv(tmp_path, capsys):
    path = tmp_path / "c.json"
    dump_json({"K": 3, "coeffs": {"1,0": 1, "1,1": 1}}, path)
    code, out, _ = run(capsys, "converge", "--fundamental", str(path),
                       "--lambdas", "1e-2,1e-4,1e-6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("lambda,cutoff,scaled_0")
    assert len(lines) == 4


def test_partitioned_template(capsys):
    code, out, _ = run(capsys, "partitioned", "template", "--dims", "2,3,4", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["star_count"] == 29
    assert len(payload["dominant"]) == 17


def test_partitioned_eig(tmp_path, capsys):
    path = tmp_path / "f.json"
    dump_json({"dims": [2, 3], "entries": {"1,0": 1, "1,2": 1, "3,0": 1, "3,2": 1,
                                           "4,1": "1/100", "4,3": "1/2"}}, path)
    code, out, _ = run(capsys, "partitioned", "eig", "--input", str(path), "--json")
    assert code == 0
    assert json.loads(out)["report"]["classification"] == "real-nondegenerate"


def test_boundary_solution_a(capsys):
    code, out, _ = run(capsys, "boundary", "solution-a",
                       "--a", "1", "--b", "1", "--c", "1", "--d", "1", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["ep_signature"] == [5]
    assert payload["det_q"] == 32


def test_boundary_deep_limit(capsys):
    code, out, _ = run(capsys, "boundary", "deep-limit")
    assert code == 0
    assert "det Q = 1" in out


def test_scan_deterministic(tmp_path, capsys):
    template = tmp_path / "t.json"
    dump_json({"dims": [2, 3], "entries": {"1,0": 1, "1,2": 1, "3,0": 1, "3,2": 1,
                                           "4,1": 0.01, "4,3": 0.5}}, template)
    box = tmp_path / "box.json"
    dump_json({"4,3": [0.4, 0.6]}, box)
    code1, out1, _ = run(capsys, "scan", "--template", str(template), "--box", str(box),
                         "--samples", "6", "--seed", "7")
    code2, out2, _ = run(capsys, "scan", "--template", str(template), "--box", str(box),
                         "--samples", "6", "--seed", "7")
    assert code1 == code2 == 0
    assert out1 == out2
    records = [json.loads(line) for line in out1.strip().splitlines()]
    assert len(records) == 6
    assert all("classification" in r and "min_gap" in r for r in records)


def test_seed_env_default(tmp_path, capsys, monkeypatch):
    template = tmp_path / "t.json"
    dump_json({"dims": [2, 3], "entries": {"1,0": 1, "1,2": 1, "3,0": 1, "3,2": 1,
                                           "4,1": 0.01, "4,3": 0.5}}, template)
    box = tmp_path / "box.json"
    dump_json({"4,3": [0.4, 0.6]}, box)
    monkeypatch.setenv("EPK_SEED", "7")
    _, out_env, _ = run(capsys, "scan", "--template", str(template), "--box", str(box),
                        "--samples", "4")
    monkeypatch.delenv("EPK_SEED")
    _, out_flag, _ = run(capsys, "scan", "--template", str(template), "--box", str(box),
                         "--samples", "4", "--seed", "7")
    assert out_env == out_flag


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    dump_json({"json": True}, cfg)
    code, out, _ = run(capsys, "--config", str(cfg), "jordan", "--k", "2")
    assert code == 0
    assert json.loads(out)["K"] == 2


def test_reproduce_single_case(capsys):
    code, out, _ = run(capsys, "reproduce", "chebyshev")
    assert code == 0
    assert "PASS chebyshev" in out


def test_reproduce_rejects_unknown_case(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["reproduce", "nonsense"])
    assert exc.value.code == 1
