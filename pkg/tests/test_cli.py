import json

import pytest

from zhatwitt import cli
from zhatwitt.plumbing import PlumbingGraph


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_graph(tmp_path, g, name="g"):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(g.to_json()))
    return str(path)


def test_zhat_lens(capsys):
    code, out, _ = run(capsys, "zhat", "--lens", "3", "--qmax", "5")
    assert code == 0
    data = json.loads(out)
    assert [d["class"] for d in data] == [0, 1, 2]
    assert data[0]["series"]["coeffs"] == [[0, "-2/1"]]


def test_zhat_cache_and_out_dir(capsys, tmp_path):
    cache = tmp_path / "cache"
    args = ("--cache-dir", str(cache), "zhat", "e8", "--qmax", "10", "--folded", "--out", str(tmp_path / "o"))
    code, first, _ = run(capsys, *args)
    assert code == 0 and len(list(cache.iterdir())) == 1
    code, second, _ = run(capsys, *args)
    assert first == second
    assert (tmp_path / "o" / "e8_spinc0.json").is_file()


def test_zhat_single_class(capsys):
    code, out, _ = run(capsys, "zhat", "--lens", "5", "--spinc", "2")
    assert code == 0 and [d["class"] for d in json.loads(out)] == [2]
    code, _, err = run(capsys, "zhat", "--lens", "5", "--spinc", "9")
    assert code == 2 and "Spin^c" in err


def test_tau6_and_witt(capsys):
    code, out, _ = run(capsys, "tau6", "--lens", "6")
    chans = json.loads(out)["channels"]
    assert code == 0 and [(c["recognized"]["a"], c["recognized"]["b"]) for c in chans] == [(1, 1), (2, 1)]
    code, out, _ = run(capsys, "witt", "s3_m3_trefoil", "--closed-form")
    rep = json.loads(out)
    assert code == 0 and (rep["w"], rep["d"]) == (3, 1)
    assert rep["channels"][0]["d_cover"] == 2


def test_witt_surgery_and_override(capsys):
    code, out, _ = run(capsys, "witt", "--surgery", "T(3,7),2")
    assert code == 0 and json.loads(out)["w"] == 0
    code, out, _ = run(capsys, "witt", "s3_p2_fig8", "--two-theta-cubed", "0,1,1,0=0")
    ch = json.loads(out)["channels"][1]
    assert ch["two_theta_cubed"] == {"value": 0, "source": "input"}


def test_graph_file_argument(capsys, tmp_path):
    path = write_graph(tmp_path, PlumbingGraph.lens(7))
    code, out, _ = run(capsys, "witt4d", path)
    assert code == 0 and json.loads(out)["witt_4d"] == 0


def test_bruteforce(capsys):
    code, out, _ = run(capsys, "wrt-bruteforce", "--lens", "2", "--theta", "1")
    ch = json.loads(out)["channels"]
    assert code == 0 and ch[0]["re"] == pytest.approx(3 ** 0.5)
    code, _, _ = run(capsys, "wrt-bruteforce", "e8")
    assert code == 2


def test_falsetheta_and_surgery(capsys):
    code, out, _ = run(capsys, "falsetheta", "--m", "6", "--r", "1", "--k", "6", "--exact")
    data = json.loads(out)
    assert code == 0 and data["exact"]["1/144"] == "35/36"
    code, out, _ = run(capsys, "falsetheta", "--kind", "B", "--m", "30", "--r", "7", "--series", "--qmax", "5")
    assert code == 0
    code, out, _ = run(capsys, "surgery", "T(2,3)", "1", "--qmax", "5")
    assert json.loads(out)["brieskorn"] == [2, 3, 7]
    code, _, _ = run(capsys, "surgery", "T(4,5)", "1")
    assert code == 2


def test_radial(capsys, tmp_path):
    csv = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "radial", "s3_m1_2_fig8_prefix", "--truncations", "10", "15", "20",
                       "--csv", str(csv))
    assert code == 0 and json.loads(out)["converged"] is False
    assert csv.read_text().startswith("N,y,")
    code, _, err = run(capsys, "radial", "s3_m1_2_fig8_prefix", "--truncations", "200")
    assert code == 3 and "InsufficientSeries" in err
    code, out, _ = run(capsys, "radial", "s3_m1_2_fig8_prefix", "--truncations", "200", "300", "400",
                       "--allow-clip", "--tau6")
    assert code == 0 and json.loads(out)["converged"] is False


def test_sumrule(capsys):
    code, out, _ = run(capsys, "sumrule", "--p", "4", "5")
    assert code == 0 and all(r["passed"] for r in json.loads(out))
    code, out, _ = run(capsys, "sumrule", "--p", "5", "--flip-lk")
    assert not json.loads(out)[0]["passed"]


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lens-odd")
    assert code == 0 and out.strip().endswith("9/9 passed")
    code, out, _ = run(capsys, "verify", "--suite", "seifert", "--format", "json")
    assert code == 1
    assert any(not c["passed"] for c in json.loads(out))


def test_validation_and_numeric_exit_codes(capsys, tmp_path):
    code, _, err = run(capsys, "witt", "--lens", "0")
    assert code == 2 and "SingularLinkingMatrix" in err
    code, _, _ = run(capsys, "witt", write_graph(tmp_path, PlumbingGraph.from_framings([1])))
    assert code == 2
    code, _, _ = run(capsys, "tau6", "no_such_graph")
    assert code == 2
    code, _, _ = run(capsys, "tau6")
    assert code == 2
    code, _, _ = run(capsys, "--precision", "8", "tau6", "--lens", "3")
    assert code == 2
    # a degree-4 graph whose radial limit diverges in one class
    diverging = write_graph(tmp_path, PlumbingGraph.star(-4, [[-2]] * 4), "div")
    code, _, err = run(capsys, "tau6", diverging)
    assert code == 3 and "NonConvergence" in err


def test_recognition_exit_code(capsys, tmp_path):
    d4 = write_graph(tmp_path, PlumbingGraph.star(-2, [[-2], [-2], [-2]]), "d4")
    code, _, err = run(capsys, "tau6", d4, "--method", "cwitt")
    assert code == 4 and "PairingNotFound" in err


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "--out-file", str(target), "witt4d", "--lens", "3")
    assert code == 0 and out == "" and json.loads(target.read_text())["witt_4d"] == 3
