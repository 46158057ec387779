import json
import subprocess
import sys

import pytest

from bicover.battery import BatteryConfig, load_seed_file, run_battery
from bicover.cli import ExperimentSpec, main, run

from conftest import GOLDEN


def cli(*args, cwd=None):
    p = subprocess.run([sys.executable, "-m", "bicover.cli", *map(str, args)], cwd=cwd,
                       capture_output=True, text=True)
    return p.returncode, p.stdout, p.stderr


def reason_ok(stderr, code):
    lines = [l for l in stderr.splitlines() if l.startswith("bicover: error=")]
    assert len(lines) == 1 and f"exit={code}" in lines[0]


def test_verify_c7_figure_cover(tmp_path):
    cover = tmp_path / "c.json"
    cover.write_text(json.dumps({"n": 7, "x": 2, "colorings": ["0101010", "0101011"]}))
    code, out, _ = cli("verify", GOLDEN / "c7.bhg", cover, "--json")
    assert code == 0
    assert json.loads(out) == {"version": 1, "valid": True, "witness": [1, 2, 1, 1, 1, 1, 1]}


def test_verify_all_zero_fails(tmp_path):
    cover = tmp_path / "z.json"
    cover.write_text(json.dumps({"n": 7, "colorings": ["0000000"]}))
    code, _, err = cli("verify", GOLDEN / "c7.bhg", cover)
    assert code == 1
    reason_ok(err, 1)


def test_usage_errors(tmp_path):
    code, _, err = cli("verify", tmp_path / "missing.bhg", tmp_path / "x.json")
    assert code == 2
    reason_ok(err, 2)
    assert main(["nosuchcommand"]) == 2
    bad = tmp_path / "bad.bhg"
    bad.write_text("p bhg 3 1 2\ne 1 2 3\n")
    code, _, err = cli("oracle", bad)
    assert code == 2 and "non-uniform" in err


def test_cap_refusals(tmp_path):
    code, _, err = cli("oracle", GOLDEN / "k9_3.bhg", "--cap", "5")
    assert code == 3
    reason_ok(err, 3)
    code, out, err = cli("msearch", "--k", 3, "--x", 2, "--n", 9, "--json")
    assert code == 3
    rep = json.loads(out)
    assert (rep["lower_bound"], rep["upper_bound"], rep["upper_witness"]) == (8, 84, "K_9^3")


def test_precondition_refusal():
    code, _, err = cli("rcover", GOLDEN / "k9_3.bhg", "--x", 2, "--algo", "sparse", "--seed", 1)
    assert code == 2 and "exceeds" in err


@pytest.mark.parametrize("argv,name", [
    (["oracle", "{g}", "--json"], "oracle"),
    (["cover", "{g}", "--algo", "mbc", "--json"], "mbc"),
    (["cover", "{g}", "--algo", "hbc", "--json"], "hbc"),
    (["cover", "{g}", "--algo", "kn", "--json"], "kn"),
    (["approx", "{g}", "--json"], "approx"),
    (["rcover", "{g}", "--x", "3", "--algo", "mtc", "--seed", "4", "--json", "--override"], "mtc"),
])
def test_artifacts_reverify(tmp_path, argv, name):
    g = GOLDEN / "k9_3.bhg"
    out = tmp_path / f"{name}.json"
    code, _, _ = cli(*[a.replace("{g}", str(g)) for a in argv], "-o", out)
    assert code == 0
    code, stdout, _ = cli("verify", g, out, "--json")
    assert code == 0 and json.loads(stdout)["valid"]
    assert json.loads(out.read_text())["version"] == 1


def test_cover_with_files(tmp_path):
    m = tmp_path / "m.txt"
    m.write_text("1 2\n3 4\n")
    code, out, _ = cli("cover", GOLDEN / "k4.bhg", "--algo", "mbc", "--matching-file", m, "--json")
    assert code == 0 and json.loads(out)["size"] <= 3
    h = tmp_path / "h.txt"
    h.write_text("1\n")
    code, _, err = cli("cover", GOLDEN / "k4.bhg", "--algo", "hbc", "--hitting-file", h)
    assert code == 2 and "missed" in err


def test_rcover_csv(tmp_path):
    g = tmp_path / "r.bhg"
    assert cli("gen", "random", "--n", 12, "--k", 3, "--m", 8, "--seed", 5, "-o", g)[0] == 0
    code, out, _ = cli("rcover", g, "--x", 2, "--algo", "sparse", "--seed", 10, "--trials", 20, "--csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "seed,attempts_or_T,bits,valid" and len(lines) == 21
    assert all(l.endswith(",1") for l in lines[1:])
    assert all(int(l.split(",")[2]) == 24 * int(l.split(",")[1]) for l in lines[1:])


@pytest.mark.parametrize("args,n,m", [
    (["complete", "--n", 9, "--k", 3], 9, 84),
    (["cycle", "--n", 7], 7, 7),
    (["g1"], 12, 164),
    (["coverfriendly", "--p", 3, "--q", 4], 12, 164),
    (["random", "--n", 10, "--k", 3, "--prob", 1.0, "--seed", 1], 10, 120),
])
def test_gen(tmp_path, args, n, m):
    out = tmp_path / "g.bhg"
    assert cli("gen", *args, "-o", out)[0] == 0
    header = next(l for l in out.read_text().splitlines() if l.startswith("p "))
    assert header.split()[2:4] == [str(n), str(m)]


def test_gen_cliquegap_report(tmp_path):
    code, _, _ = cli("gen", "cliquegap", "--k", 3, "--t", 1, "--n", 30, "--seed", 2,
                     "-o", tmp_path / "g.bhg", "--report", tmp_path / "r.json")
    rep = json.loads((tmp_path / "r.json").read_text())
    assert code == 0 and rep["omega"] == 3
    assert rep["expectations"]["expected_cliques_below_bound"]


def test_gen_missing_param():
    code, _, err = cli("gen", "complete", "--n", 5)
    assert code == 2 and "--k" in err


def test_replay_spec(tmp_path):
    spec = tmp_path / "s.json"
    out1 = tmp_path / "a.bhg"
    assert cli("gen", "random", "--n", 9, "--k", 3, "--prob", 0.3, "--seed", 8, "-o", out1,
               "--save-spec", spec)[0] == 0
    first = out1.read_text()
    out1.unlink()
    assert cli("replay", spec)[0] == 0
    assert out1.read_text() == first


def test_run_spec_in_process():
    spec = ExperimentSpec("oracle", instance=str(GOLDEN / "g1.bhg"), fmt="json")
    out = run(spec)
    rep = json.loads(out.artifacts["-"])
    assert out.status == 0 and (rep["chi_c"], rep["alpha"], rep["gamma"]) == (2, 5, 3)
    assert ExperimentSpec.from_json(spec.to_json()) == spec


def test_seed_file_formats(tmp_path):
    a = tmp_path / "a"
    a.write_text("17\n")
    b = tmp_path / "b"
    b.write_text('{"master_seed": 17}')
    assert load_seed_file(a).master_seed == load_seed_file(b).master_seed == 17
    c = tmp_path / "c"
    c.write_text("[1]")
    with pytest.raises(ValueError):
        load_seed_file(c)


def test_battery_subset_passes():
    res = run_battery(BatteryConfig(quick=True), only=[1, 3, 9])
    assert [r.id for r in res.rows] == [1, 3, 9] and res.passed
    assert res.csv().splitlines()[0] == "id,name,bound,observed,pass"


def test_battery_seed_changes_artifacts():
    a = run_battery(BatteryConfig(master_seed=1, quick=True), only=[7])
    b = run_battery(BatteryConfig(master_seed=2, quick=True), only=[7])
    assert a.mc_sparse != b.mc_sparse
