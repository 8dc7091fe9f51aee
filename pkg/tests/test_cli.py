"""Command-line interface: exit codes, manifests, determinism, formats."""

import json
import os

import pytest

from nsdcolor.cli import main
from nsdcolor.pipeline import STAGES


def run_cli(argv):
    return main(argv)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def test_solve_single_edge_frozen_row(tmp_path):
    out = tmp_path / "rows.csv"
    code = run_cli(["solve", "--family", "complete", "--n", "2",
                    "--seed", "0", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: {")
    assert lines[1] == "graph6,n,delta,chi_total,chi_sigma_total,status"
    assert lines[2] == "A_,2,1,3,3,ok"
    manifest = json.loads(lines[0].split("# manifest: ", 1)[1])
    assert manifest["subcommand"] == "solve"
    assert manifest["seed"] == 0
    assert manifest["timestamp"] == "unset"


def test_solve_reads_graph6_file_and_skips_manifest_line(tmp_path):
    src = tmp_path / "graphs.g6"
    src.write_text("# manifest: {}\nA_\nBw\n\n")
    out = tmp_path / "rows.csv"
    assert run_cli(["solve", "--input", str(src), "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[2:]
    assert [r.split(",")[0] for r in rows] == ["A_", "Bw"]


def test_solve_budget_exhaustion_exit_code(tmp_path):
    out = tmp_path / "rows.csv"
    code = run_cli(["solve", "--family", "complete", "--n", "5",
                    "--budget", "10", "--out", str(out)])
    assert code == 4
    row = out.read_text().splitlines()[2]
    assert row.endswith("budget_exhausted")
    assert "5-" in row  # bracketed range, not a fake exact answer


def test_solve_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["solve", "--family", "random_gnp", "--n", "7", "--p", "0.5",
            "--count", "3", "--seed", "11"]
    assert run_cli(argv + ["--out", str(a)]) == 0
    assert run_cli(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_rejects_missing_input():
    assert run_cli(["solve", "--input", "/nonexistent/x.g6"]) == 1


def test_solve_rejects_bad_graph6(tmp_path):
    src = tmp_path / "bad.g6"
    src.write_text("A_g\n")  # trailing garbage
    assert run_cli(["solve", "--input", str(src)]) == 1


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def star_cert(tmp_path_factory):
    """One successful construct run (the big star), reused by several tests."""
    out = tmp_path_factory.mktemp("star") / "cert.json"
    code = run_cli(["construct", "--family", "complete_bipartite",
                    "--a", "1", "--b", "10000", "--seed", "1", "--out", str(out)])
    return code, out


def test_construct_success_exit_zero(star_cert):
    code, out = star_cert
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"manifest", "certificate", "stats"}
    assert doc["stats"]["outcome"] == "success"
    assert doc["certificate"]["seed"] == 1
    assert doc["stats"]["max_color"] == 163976


def test_construct_failure_exit_encodes_stage(tmp_path):
    out = tmp_path / "cert.json"
    code = run_cli(["construct", "--graph6", "C~", "--seed", "0",
                    "--out", str(out)])  # K4
    assert code == 10 + STAGES.index("certify") == 17
    doc = json.loads(out.read_text())
    assert doc["certificate"] is None
    assert doc["stats"]["outcome"] == "failed:certify"


def test_construct_prepare_failure_exit(tmp_path):
    out = tmp_path / "cert.json"
    code = run_cli(["construct", "--graph6", "A_", "--seed", "0",
                    "--out", str(out)])  # K2: degree scale too small
    assert code == 10 + STAGES.index("prepare") == 10


def test_construct_deterministic_and_timings_optional(tmp_path):
    a, b, t = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "t.json"
    argv = ["construct", "--family", "random_gnp", "--n", "16", "--p", "0.5",
            "--seed", "5"]
    run_cli(argv + ["--out", str(a)])
    run_cli(argv + ["--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
    run_cli(argv + ["--timings", "--out", str(t)])
    doc = json.loads(t.read_text())
    assert "timings" in doc["stats"]
    base = json.loads(a.read_text())
    assert {k: v for k, v in doc["stats"].items() if k != "timings"} == base["stats"]


def test_construct_out_stats_side_file(tmp_path):
    out, stats = tmp_path / "c.json", tmp_path / "s.json"
    run_cli(["construct", "--graph6", "C~", "--seed", "0",
             "--out", str(out), "--out-stats", str(stats)])
    side = json.loads(stats.read_text())
    whole = json.loads(out.read_text())
    assert set(side) == {"manifest", "stats"}
    assert side["stats"] == whole["stats"]
    assert side["manifest"] == whole["manifest"]


def test_construct_requires_some_input():
    assert run_cli(["construct", "--seed", "0"]) == 1
    # an explicit graph6 string wins over family flags
    assert run_cli(["construct", "--graph6", "C~", "--family", "complete",
                    "--n", "4", "--seed", "0"]) == 17


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_accepts_solver_witness(tmp_path):
    # build an exact witness through the solver CLI path instead: K4 needs 5
    from nsdcolor.coloring import to_certificate
    from nsdcolor.graphs import generate_family
    from nsdcolor.solver import find_nsd_total

    g = generate_family("complete", {"n": 4}, seed=0)
    tc = find_nsd_total(g, 5)
    cert = to_certificate(tc, g)
    cert["graph6"] = "C~"
    path = tmp_path / "w.json"
    path.write_text(json.dumps(cert))
    assert run_cli(["verify", "--certificate", str(path)]) == 0


def test_verify_detects_tampering(tmp_path, capsys):
    from nsdcolor.coloring import to_certificate
    from nsdcolor.graphs import generate_family
    from nsdcolor.solver import find_nsd_total

    g = generate_family("complete", {"n": 4}, seed=0)
    tc = find_nsd_total(g, 5)
    cert = to_certificate(tc, g)
    cert["graph6"] = "C~"
    cert["vertex_colors"][0] = cert["vertex_colors"][1]  # break properness
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cert))
    assert run_cli(["verify", "--certificate", str(path)]) == 5


def test_verify_wrapped_construct_output(star_cert):
    # verify unwraps {"manifest", "certificate", "stats"} documents directly
    _, out = star_cert
    assert run_cli(["verify", "--certificate", str(out)]) == 0


def test_verify_rejects_graph_mismatch(tmp_path):
    from nsdcolor.coloring import to_certificate
    from nsdcolor.graphs import generate_family
    from nsdcolor.solver import find_nsd_total

    g = generate_family("complete", {"n": 4}, seed=0)
    tc = find_nsd_total(g, 5)
    cert = to_certificate(tc, g)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cert))
    # C5 has 5 vertices: the coloring cannot cover it
    assert run_cli(["verify", "--certificate", str(path),
                    "--graph6", "Dhc"]) in (1, 5)


def test_verify_bad_json(tmp_path):
    path = tmp_path / "nope.json"
    path.write_text("{not json")
    assert run_cli(["verify", "--certificate", str(path)]) == 1


# ---------------------------------------------------------------------------
# lemma-stats
# ---------------------------------------------------------------------------


def test_lemma_stats_csv_shape(tmp_path):
    out = tmp_path / "stats.csv"
    code = run_cli(["lemma-stats", "--family", "random_gnp", "--n", "30",
                    "--p", "0.5", "--trials", "20", "--seed", "2",
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert lines[1] == "property,trials,trials_violated,rate,mean_entries,chernoff_ref,lll_ok"
    assert len(lines) == 6  # manifest + header + one row per property
    for row in lines[2:]:
        fields = row.split(",")
        assert len(fields) == 7
        assert fields[1] == "20"
        assert 0.0 <= float(fields[3]) <= 1.0
    # random draws on desk-scale graphs essentially never violate
    assert all(row.split(",")[2] == "0" for row in lines[2:])


def test_lemma_stats_scale_validation():
    assert run_cli(["lemma-stats", "--family", "complete", "--n", "6",
                    "--scale", "3"]) == 1  # degree 5 exceeds scale 3


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def test_families_listing(tmp_path, capsys):
    assert run_cli(["families"]) == 0
    listing = capsys.readouterr().out
    for kind in ("complete", "cycle", "path", "complete_bipartite",
                 "random_gnp", "random_regular"):
        assert kind in listing


def test_families_emission_roundtrip(tmp_path):
    out = tmp_path / "graphs.g6"
    code = run_cli(["families", "--family", "random_gnp", "--n", "8",
                    "--p", "0.4", "--count", "3", "--seed", "7",
                    "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# manifest: ")
    assert len(lines) == 4
    # emitted graphs feed straight back into solve
    rows = tmp_path / "rows.csv"
    assert run_cli(["solve", "--input", str(out), "--out", str(rows)]) == 0
    assert len(rows.read_text().splitlines()) == 5


def test_families_unknown_kind():
    # argparse rejects out-of-list choices before the command runs
    with pytest.raises(SystemExit) as exc:
        run_cli(["families", "--family", "moebius", "--n", "5"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# seeds
# ---------------------------------------------------------------------------


def test_seed_env_fallback(tmp_path, monkeypatch):
    out_env, out_flag = tmp_path / "env.csv", tmp_path / "flag.csv"
    monkeypatch.setenv("NSD_SEED", "33")
    run_cli(["solve", "--family", "random_gnp", "--n", "7", "--p", "0.5",
             "--out", str(out_env)])
    monkeypatch.delenv("NSD_SEED")
    run_cli(["solve", "--family", "random_gnp", "--n", "7", "--p", "0.5",
             "--seed", "33", "--out", str(out_flag)])
    assert out_env.read_bytes() == out_flag.read_bytes()


def test_seed_flag_beats_env(tmp_path, monkeypatch):
    out = tmp_path / "o.csv"
    monkeypatch.setenv("NSD_SEED", "99")
    run_cli(["solve", "--family", "complete", "--n", "2", "--seed", "0",
             "--out", str(out)])
    manifest = json.loads(out.read_text().splitlines()[0].split("# manifest: ", 1)[1])
    assert manifest["seed"] == 0
