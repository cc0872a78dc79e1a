import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nmfcomm.bench import deterministic_payload
from nmfcomm.graph import to_edge_list_text

REPO = Path(__file__).resolve().parent.parent


def run_cli(args, cwd, extra_env=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = str(REPO / "src")
    env.update(extra_env or {})
    return subprocess.run(
        [sys.executable, "-m", "nmfcomm", *args],
        capture_output=True, text=True, cwd=cwd, env=env,
    )


@pytest.fixture
def clique_file(tmp_path, two_cliques):
    path = tmp_path / "two_cliques.edges"
    path.write_text(to_edge_list_text(two_cliques))
    return path


@pytest.fixture
def bridge_file(tmp_path, bridged_cliques):
    path = tmp_path / "bridge.edges"
    path.write_text(to_edge_list_text(bridged_cliques))
    return path


class TestDetect:
    def test_deterministic_output(self, tmp_path, clique_file):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        r1 = run_cli(["detect", str(clique_file), "--seed", "7", "-o", str(out1)], tmp_path)
        r2 = run_cli(["detect", str(clique_file), "--seed", "7", "-o", str(out2)], tmp_path)
        assert r1.returncode == 0 and r2.returncode == 0
        p1 = deterministic_payload(json.loads(out1.read_text()))
        p2 = deterministic_payload(json.loads(out2.read_text()))
        assert p1 == p2

    def test_missing_file_exits_1(self, tmp_path):
        r = run_cli(["detect", "missing.edges"], tmp_path)
        assert r.returncode == 1
        assert r.stderr.startswith("nmfcomm: error:")
        assert r.stderr.count("\n") == 1

    def test_malformed_file_exits_1(self, tmp_path):
        bad = tmp_path / "bad.edges"
        bad.write_text("0 x\n")
        r = run_cli(["detect", str(bad)], tmp_path)
        assert r.returncode == 1
        assert "parse" in r.stderr

    def test_restarts_find_two_communities(self, tmp_path, clique_file):
        out = tmp_path / "r.json"
        r = run_cli(
            ["detect", str(clique_file), "--restarts", "20", "--seed", "0",
             "-o", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["best_run"]["k_effective"] == 2
        assert doc["best_run"]["q"] == pytest.approx(0.5, abs=1e-9)
        assert doc["aggregates"]["best_run_index"] == doc["best_run"]["index"]
        labels = doc["best_run"]["labels"]
        assert len(labels) == 6
        # nodes 0,1,2 together; 3,4,5 together
        assert len({labels[str(i)] for i in (0, 1, 2)}) == 1
        assert len({labels[str(i)] for i in (3, 4, 5)}) == 1

    def test_original_ids_restored(self, tmp_path):
        shifted = tmp_path / "shifted.edges"
        shifted.write_text("10 20\n20 30\n30 10\n")
        out = tmp_path / "s.json"
        r = run_cli(["detect", str(shifted), "-o", str(out)], tmp_path)
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["best_run"]["nodes"] == [10, 20, 30]
        assert set(doc["best_run"]["labels"]) == {"10", "20", "30"}

    def test_reference_partition_scores_nmi(self, tmp_path, clique_file):
        ref = tmp_path / "ref.part"
        ref.write_text("0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n")
        out = tmp_path / "ref.json"
        r = run_cli(
            ["detect", str(clique_file), "--restarts", "5", "--reference",
             str(ref), "-o", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["aggregates"]["nmi_mean"] > 0.5

    def test_default_output_dir_env(self, tmp_path, clique_file):
        outdir = tmp_path / "reports"
        r = run_cli(
            ["detect", str(clique_file)], tmp_path,
            extra_env={"NMFCOMM_OUTPUT_DIR": str(outdir)},
        )
        assert r.returncode == 0
        assert (outdir / "two_cliques.detect.json").exists()

    def test_stdout_is_empty(self, tmp_path, clique_file):
        out = tmp_path / "o.json"
        r = run_cli(["detect", str(clique_file), "-o", str(out)], tmp_path)
        assert r.stdout == ""


class TestBenchNg:
    def test_grid_shape_and_determinism(self, tmp_path):
        o1, o2 = tmp_path / "s1.json", tmp_path / "s2.json"
        args = ["bench", "ng", "--kout", "0,2,4", "--realizations", "2",
                "--seed", "1", "--n", "32", "--c", "4", "--k-mean", "6"]
        r1 = run_cli([*args, "-o", str(o1)], tmp_path)
        r2 = run_cli([*args, "-o", str(o2)], tmp_path)
        assert r1.returncode == 0 and r2.returncode == 0
        d1, d2 = json.loads(o1.read_text()), json.loads(o2.read_text())
        assert [c["k_out"] for c in d1["cells"]] == [0.0, 2.0, 4.0]
        assert deterministic_payload(d1) == deterministic_payload(d2)

    def test_invalid_kout_exits_1(self, tmp_path):
        r = run_cli(["bench", "ng", "--kout", "99", "--realizations", "1"], tmp_path)
        assert r.returncode == 1
        assert "parameter" in r.stderr

    def test_non_numeric_kout_exits_1(self, tmp_path):
        r = run_cli(["bench", "ng", "--kout", "a,b"], tmp_path)
        assert r.returncode == 1

    def test_csv_format(self, tmp_path):
        out = tmp_path / "sweep.csv"
        r = run_cli(
            ["bench", "ng", "--kout", "0,2", "--realizations", "2", "--seed", "3",
             "--n", "32", "--c", "4", "--k-mean", "6", "--format", "csv",
             "-o", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0].startswith("k_out,realization,")
        assert len(lines) == 5


class TestMetrics:
    def test_nmi_self_is_exactly_one_line(self, tmp_path):
        part = tmp_path / "p.a"
        part.write_text("0 0\n1 0\n2 1\n3 1\n")
        r = run_cli(["metrics", "nmi", str(part), str(part)], tmp_path)
        assert r.returncode == 0
        assert r.stdout == "1.000000\n"

    def test_nmi_arbitrary_ids(self, tmp_path):
        pa = tmp_path / "a.part"
        pb = tmp_path / "b.part"
        pa.write_text("10 0\n20 0\n30 1\n40 1\n")
        pb.write_text("40 5\n30 5\n20 9\n10 9\n")
        r = run_cli(["metrics", "nmi", str(pa), str(pb)], tmp_path)
        assert r.returncode == 0
        assert r.stdout == "1.000000\n"

    def test_modularity_bridge_golden(self, tmp_path, bridge_file):
        part = tmp_path / "bridge.part"
        part.write_text("0 0\n1 0\n2 0\n3 1\n4 1\n5 1\n")
        r = run_cli(["metrics", "modularity", str(bridge_file), str(part)], tmp_path)
        assert r.returncode == 0
        assert r.stdout == "0.357143\n"

    def test_missing_file_exits_1(self, tmp_path):
        r = run_cli(["metrics", "nmi", "no.a", "no.b"], tmp_path)
        assert r.returncode == 1
        assert r.stderr.startswith("nmfcomm: error:")

    def test_mismatched_node_sets_exit_1(self, tmp_path):
        pa, pb = tmp_path / "a", tmp_path / "b"
        pa.write_text("0 0\n1 1\n")
        pb.write_text("0 0\n2 1\n")
        r = run_cli(["metrics", "nmi", str(pa), str(pb)], tmp_path)
        assert r.returncode == 1
        assert "validation" in r.stderr


class TestUsage:
    def test_unknown_flag_exits_1(self, tmp_path):
        r = run_cli(["detect", "--nope"], tmp_path)
        assert r.returncode == 1

    def test_no_command_exits_1(self, tmp_path):
        r = run_cli([], tmp_path)
        assert r.returncode == 1


class TestSolverFlags:
    def test_strength_diagonal_option(self, tmp_path, clique_file):
        out = tmp_path / "diag.json"
        r = run_cli(
            ["detect", str(clique_file), "--diagonal", "strength",
             "--restarts", "5", "-o", str(out)],
            tmp_path,
        )
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["meta"]["diagonal"] == "strength"
        assert doc["best_run"]["k_effective"] == 2

    def test_full_k_flag(self, tmp_path, clique_file):
        out = tmp_path / "fullk.json"
        r = run_cli(["detect", str(clique_file), "--full-k", "-o", str(out)], tmp_path)
        assert r.returncode == 0
        doc = json.loads(out.read_text())
        assert doc["meta"]["config"]["k_max"] == 6

    def test_workers_flag_matches_sequential(self, tmp_path, clique_file):
        outs = []
        for workers in ("1", "3"):
            out = tmp_path / f"w{workers}.json"
            r = run_cli(
                ["detect", str(clique_file), "--restarts", "6", "--seed", "2",
                 "--workers", workers, "-o", str(out)],
                tmp_path,
            )
            assert r.returncode == 0
            outs.append(deterministic_payload(json.loads(out.read_text())))
        assert outs[0] == outs[1]

    def test_numerical_failure_maps_to_exit_2(self, monkeypatch, tmp_path, clique_file):
        import nmfcomm.cli as cli_mod
        from nmfcomm.errors import NumericalError

        def boom(*args, **kwargs):
            raise NumericalError("forced failure", iteration=3)

        monkeypatch.setattr(cli_mod.bench, "restart_experiment", boom)
        with pytest.raises(SystemExit) as exc:
            cli_mod.main(["detect", str(clique_file)])
        assert exc.value.code == 2
