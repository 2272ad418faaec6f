import json
import subprocess
import sys

from houghton.cli import main


def _run(args, tmp_path=None):
    return subprocess.run([sys.executable, "-m", "houghton.cli", *args], capture_output=True, text=True,
                          cwd=tmp_path)


def test_eval(capsys):
    assert main(["eval", "--n", "3", "--word", "g2", "--point", "1,5"]) == 0
    assert capsys.readouterr().out == "1,6\n"
    assert main(["eval", "--n", "3", "--word", "g3^-1", "--point", "1,1"]) == 0
    assert capsys.readouterr().out == "3,1\n"


def test_eval_bad_input(capsys):
    assert main(["eval", "--n", "3", "--word", "g9", "--point", "1,1"]) == 2
    assert main(["eval", "--n", "3", "--word", "g2", "--point", "1;1"]) == 2
    assert main(["eval", "--n", "3", "--word", "g2", "--point", "4,1"]) == 2


def test_recover_exit_codes(tmp_path):
    out = tmp_path / "cert.json"
    assert main(["recover", "--family", "hn", "--n", "3", "--seed", "0", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["family"] == "hn"
    assert main(["recover", "--family", "uv", "--n", "3", "--v", "2", "--seed", "0"]) == 2
    assert main(["recover", "--family", "hn", "--n", "3"]) == 2


def test_adversary_then_certify(tmp_path, capsys):
    sc, cert = tmp_path / "sc.json", tmp_path / "cert.json"
    assert main(["adversary", "--family", "uv", "--n", "3", "--v", "4", "--seed", "5", "--out", str(sc)]) == 0
    assert main(["recover", "--scenario", str(sc), "--trace", "--out", str(cert)]) == 0
    assert "trace" in json.loads(cert.read_text())
    capsys.readouterr()
    assert main(["certify", "--cert", str(cert), "--scenario", str(sc)]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_certify_rejects_tampered(tmp_path, capsys):
    sc, cert = tmp_path / "sc.json", tmp_path / "cert.json"
    main(["adversary", "--family", "hn", "--n", "3", "--seed", "1", "--out", str(sc)])
    main(["recover", "--scenario", str(sc), "--out", str(cert)])
    data = json.loads(cert.read_text())
    data["witnesses"][0]["word"] = data["witnesses"][0]["word"][:-1]
    cert.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["certify", "--cert", str(cert), "--scenario", str(sc)]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["first_failure"] == "witness:" + data["witnesses"][0]["name"]


def test_certify_missing_file(tmp_path):
    assert main(["certify", "--cert", str(tmp_path / "nope.json"), "--scenario", str(tmp_path / "x.json")]) == 2


def test_scenario_flag_mismatch(tmp_path):
    sc = tmp_path / "sc.json"
    main(["adversary", "--family", "hn", "--n", "3", "--seed", "1", "--out", str(sc)])
    assert main(["recover", "--family", "hn", "--n", "4", "--scenario", str(sc)]) == 2


def test_output_byte_identical(tmp_path):
    a = _run(["recover", "--family", "h2s2", "--n", "2", "--seed", "9", "--trace"])
    b = _run(["recover", "--family", "h2s2", "--n", "2", "--seed", "9", "--trace"])
    assert a.returncode == 0
    assert a.stdout == b.stdout and a.stdout
    c = _run(["adversary", "--family", "uv", "--n", "4", "--v", "4", "--seed", "2"])
    d = _run(["adversary", "--family", "uv", "--n", "4", "--v", "4", "--seed", "2"])
    assert c.stdout == d.stdout and c.returncode == 0


def test_selftest_small_scale(capsys):
    code = main(["selftest", "--scale", "0.02"])
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 9
    assert code == 0
