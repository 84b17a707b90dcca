import json

from dihedral_mckay import cli, verify


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quiver_dot_star(capsys):
    code, out, _ = run(capsys, "quiver", "--n", "4", "--format", "dot")
    assert code == 0
    assert '"rho1" -- "rho2\'" [label="1"];' in out
    assert out.count("--") == 4


def test_fixed_points_json(capsys):
    code, out, _ = run(capsys, "fixed-points", "--n", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "fixed-points" and doc["n"] == 5
    assert len(doc["payload"]) == 1
    assert doc["payload"][0]["point"] == "I2(0:1)"


def test_outputs_are_deterministic(capsys):
    results = []
    for _ in range(2):
        code, out, _ = run(capsys, "socle-table", "--n", "6")
        assert code == 0
        results.append(out)
    assert results[0] == results[1]
    for _ in range(2):
        code, out, _ = run(capsys, "taut-table", "--n", "5")
        assert code == 0
        results.append(out)
    assert results[2] == results[3]


def test_chartable_formats(capsys):
    code, out, _ = run(capsys, "chartable", "--n", "4")
    doc = json.loads(out)
    assert [c["name"] for c in doc["payload"]["characters"]] == [
        "rho0",
        "rho0'",
        "rho1",
        "rho2",
        "rho2'",
    ]
    code, out, _ = run(capsys, "chartable", "--n", "4", "--format", "table")
    assert code == 0 and out.startswith("rep\t")


def test_hilb_atlas_and_chain(capsys):
    code, out, _ = run(capsys, "hilb-atlas", "--n", "4")
    doc = json.loads(out)
    assert len(doc["payload"]["charts"]) == 4
    code, out, _ = run(capsys, "chain", "--n", "6")
    doc = json.loads(out)
    assert len(doc["payload"]) == 4  # m + 1 configurations


def test_strict_transforms_cli(capsys):
    code, out, _ = run(capsys, "strict-transforms", "--n", "5")
    doc = json.loads(out)
    rows = {(r["boundary"], r["chart"]): r for r in doc["payload"]}
    assert rows[("B3", "Ainv")]["certificate"]["multiplicity"] == 2


def test_refdiv_flags(capsys):
    code, out, _ = run(capsys, "refdiv", "--n", "5")
    doc = json.loads(out)
    assert doc["payload"]["k"] == 2
    code, out, _ = run(capsys, "refdiv", "--n", "5", "--k", "1")
    assert json.loads(out)["payload"]["k"] == 1


def test_socle_table_with_theta(capsys):
    # rho0, rho0', rho1, rho2 for n = 5 (leading dash needs the = form)
    code, out, _ = run(capsys, "socle-table", "--n", "5", "--theta=-6,2,1,1")
    assert code == 0
    doc = json.loads(out)
    verdicts = [row.get("theta") for row in doc["payload"] if "theta" in row]
    assert verdicts and all(v["verdict"] in ("destabilized-by", "no-violation-found") for v in verdicts)


def test_usage_errors_exit_1(capsys):
    assert cli.main(["quiver"]) == 1
    capsys.readouterr()
    assert cli.main(["quiver", "--n", "2"]) == 1
    capsys.readouterr()
    assert cli.main(["verify", "--n-range", "8..4"]) == 1
    capsys.readouterr()
    assert cli.main(["socle-table", "--n", "5", "--theta", "1,2"]) == 1
    capsys.readouterr()


def test_verify_exit_codes(capsys, monkeypatch, tmp_path):
    code = cli.main(["verify", "--n-range", "3..4"])
    out = capsys.readouterr().out
    assert code == 0
    assert out.count("PASS") == 11 and "11/11" in out
    # a failing criterion flips the exit code to 2 with a readable report
    def failing(n_range=None):
        return {"id": 0, "name": "stub", "passed": False, "details": "forced"}

    monkeypatch.setattr(verify, "CRITERIA", [failing])
    report = tmp_path / "report.json"
    code = cli.main(["verify", "--n-range", "3..4", "--out", str(report)])
    capsys.readouterr()
    assert code == 2
    doc = json.loads(report.read_text())
    assert doc["payload"][0]["passed"] is False


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "quiver.json"
    code = cli.main(["quiver", "--n", "6", "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["kind"] == "quiver" and doc["n"] == 6
