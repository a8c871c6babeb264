import json

import pytest

from padovan_repdigits.certificate import ProofCertificate, build_certificate, exit_code
from padovan_repdigits.cli import main

P106 = "177652856036642165557187989663314255133456297895465"
Q106 = "21695574963444524513646677911090250505443859600601"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_search_text(capsys):
    code, out, _ = run(capsys, "search", "--n-max", "500")
    assert code == 0
    assert "10 solutions" in out
    assert "  21      200   2  0  1  2" in out


def test_search_json(capsys):
    code, out, _ = run(capsys, "search", "--n-max", "500", "--format", "json")
    rows = json.loads(out)
    assert len(rows) == 10
    assert set(rows[0]) == {"n", "d1", "d2", "l1", "l2", "value"}
    code, out, _ = run(capsys, "search", "--n-max", "10", "--format", "json")
    assert json.loads(out) == []


def test_cf_index(capsys):
    code, out, _ = run(capsys, "cf", "tau", "--index", "106")
    assert code == 0
    assert f"p_106 = {P106}" in out and f"q_106 = {Q106}" in out


def test_cf_terms_and_rational(capsys):
    _, out, _ = run(capsys, "cf", "tau", "--terms", "31")
    assert out.splitlines()[0] == ("[8; 5, 3, 3, 1, 5, 1, 8, 4, 6, 1, 4, 1, 1, 1, 9, 1, 4, 4, "
                                   "9, 1, 5, 1, 1, 1, 5, 1, 1, 1, 2, 1]")
    _, out, _ = run(capsys, "cf", "rational:10/7")
    assert out.splitlines()[0] == "[1; 2, 3]"
    _, out, _ = run(capsys, "cf", "rational:10/7", "--format", "json")
    assert json.loads(out)["quotients"] == [1, 2, 3]


def test_bound_commands(capsys):
    code, out, _ = run(capsys, "bound", "guzman-luca", "--r", "2", "--H", "1.70e44")
    assert code == 0 and out.startswith("L < 7.0531")
    code, out, _ = run(capsys, "bound", "matveev", "--t", "3", "--degree", "3",
                       "--B", "100", "--A", "16,1,7", "--format", "json")
    assert float(json.loads(out)["value"]["midpoint"]) > 0


@pytest.mark.parametrize("argv", [
    ["search", "--n-max", "-1"],
    ["cf", "pi"],
    ["prove", "--mode", "sloppy"],
    ["bound", "guzman-luca", "--r", "2", "--H", "20"],
    ["search", "--precision", "0"],
])
def test_bad_input_exit_4(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 4


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_max": 11, "format": "json"}))
    _, out, _ = run(capsys, "search", "--config", str(cfg))
    assert len(json.loads(out)) == 1
    _, out, _ = run(capsys, "search", "--config", str(cfg), "--n-max", "500")
    assert len(json.loads(out)) == 10
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["search", "--config", str(cfg)]) == 4


def test_output_file(tmp_path, capsys):
    path = tmp_path / "rows.json"
    run(capsys, "search", "--format", "json", "--output", str(path))
    assert len(json.loads(path.read_text())) == 10


@pytest.fixture(scope="module")
def replay_cert():
    return build_certificate("paper")


def test_prove_replay_certificate(replay_cert):
    c = replay_cert
    assert c.closure and exit_code(c) == 0
    assert c.initial_bounds["n_max"] == {"exact": "7380000000000000000000000000000000000000000000000"}
    assert c.round1["l1_bound"] == 53
    assert c.round2["n_bound"] <= 446
    assert c.schema_version == 1


def test_certificate_round_trip(replay_cert):
    back = ProofCertificate.from_json(replay_cert.to_json())
    assert back == replay_cert
    assert [s.value for s in back.solutions] == [12, 16, 21, 28, 37, 49, 65, 86, 114, 200]


def test_certificate_deterministic(replay_cert):
    again = build_certificate("paper", timestamp=False)
    assert again.to_dict() | {"generated_at": None} == replay_cert.to_dict() | {"generated_at": None}


def test_prove_cli_writes_json(tmp_path, capsys):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "prove", "--mode", "certified", "--output", str(path))
    assert code == 0 and "closed: yes" in out
    assert json.loads(path.read_text())["closure"] is True


def test_prove_low_precision_is_honest(capsys):
    code, out, _ = run(capsys, "prove", "--precision", "20")
    assert code in (0, 3)
    assert ("closed: yes" in out) == (code == 0)


def test_prove_short_search_not_closed(capsys):
    code, out, _ = run(capsys, "prove", "--n-max", "300")
    assert code == 2 and "closed: no" in out
