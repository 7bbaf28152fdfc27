import json

import pytest

from socialhk import cli


def run(argv):
    return cli.main(argv)


def read(path):
    with open(path) as fh:
        return fh.read()


class TestSimulateCommand:
    def test_four_path_outputs(self, tmp_path, capsys):
        out = str(tmp_path)
        code = run([
            "--out", out, "simulate", "--graph", "path:4",
            "--x0", "four-path:delta=0.25", "--R", "1", "--max-steps", "40",
            "--eps", "0.01",
        ])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["merge_times"] == [2]
        assert summary["lock_k"] == 2
        events = [json.loads(line) for line in read(f"{out}/events.jsonl").splitlines()]
        assert {"k": 2, "kind": "merge", "i": 3, "j": 4,
                "component_a": [1, 2, 3], "component_b": [4]} in events
        header, first = read(f"{out}/trajectory.csv").splitlines()[:2]
        assert header == "k,x_1,x_2,x_3,x_4"
        assert first == "0,-1.0,0.0,1.0,-0.75"
        energy_lines = read(f"{out}/energy.csv").splitlines()
        assert energy_lines[0] == "k,E,E_act"
        assert energy_lines[1] == "0,12.0,4.0"

    def test_reruns_are_byte_identical(self, tmp_path, capsys):
        args = [
            "simulate", "--graph", "path:4", "--x0", "narrow-spread:center=0,width=0.5",
            "--R", "1", "--max-steps", "30",
        ]
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        assert run(["--seed", "7", "--out", out1] + args) == 0
        capsys.readouterr()
        assert run(["--seed", "7", "--out", out2] + args) == 0
        capsys.readouterr()
        for name in ("trajectory.csv", "events.jsonl", "energy.csv"):
            assert read(f"{out1}/{name}") == read(f"{out2}/{name}")

    def test_json_format(self, tmp_path, capsys):
        out = str(tmp_path)
        assert run([
            "--out", out, "--format", "json", "simulate", "--graph", "path:3",
            "--x0", "0.0,0.3,0.6", "--max-steps", "10",
        ]) == 0
        rows = json.loads(read(f"{out}/trajectory.json"))
        assert rows[0]["x_2"] == "0.3"

    def test_graph_file_roundtrip(self, tmp_path, capsys):
        gpath = tmp_path / "g.json"
        gpath.write_text('{"n": 3, "edges": [[1, 2], [2, 3]]}')
        assert run([
            "--out", str(tmp_path), "simulate", "--graph", str(gpath),
            "--x0", "0.0,0.3,0.6", "--max-steps", "5",
        ]) == 0

    def test_sampler_requires_seed(self, capsys):
        code = run(["simulate", "--graph", "path:3", "--x0", "narrow-spread:center=0,width=0.5"])
        assert code == 1


class TestOtherCommands:
    def test_spectra(self, capsys):
        assert run(["spectra", "--graph", "rpartite:1,2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["eigenvalues_by_abs"][0] == pytest.approx(1.0, abs=1e-9)
        assert out["spectrum_checks"]["has_positive_secondary"]
        assert all(out["rpartite_basis_checks"].values())

    def test_bounds(self, capsys):
        assert run(["bounds", "--graph", "path:4", "--eps", "0.01", "--R", "1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["phi"] == pytest.approx(0.2)
        kinds = {b["kind"] for b in out["bounds"]}
        assert kinds == {"ConductanceLower", "ConditionalUpper", "LinkBreakBudget", "Lambda2Diameter"}

    def test_check_merge(self, capsys):
        assert run(["check-merge", "--graph", "path:4", "--vp", "1,2,3", "--vq", "4"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["sufficient"]["kind"] == "sufficient_holds"
        assert out["necessary"]["kind"] == "necessary_holds"
        assert out["boundary_edges"] == [[3, 4]]

    def test_check_merge_multipartite_fails(self, capsys):
        assert run(["check-merge", "--graph", "rpartite:2,2", "--vp", "1,3", "--vq", "2,4"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["sufficient"]["kind"] == "sufficient_fails"
        assert out["necessary"]["kind"] == "necessary_fails"

    def test_construct(self, tmp_path, capsys):
        out = str(tmp_path)
        assert run([
            "--out", out, "construct", "--graph", "path:4",
            "--vp", "1,2,3", "--vq", "4", "--delta", "0.0625", "--R", "1",
        ]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["predicted_merge_time"] == 3
        saved = json.loads(read(f"{out}/x0.json"))
        assert [float(v) for v in saved["opinions"]] == [0.5, 0.0, -0.5, 0.9375]

    def test_sweep(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "graph": "path:4", "R": 1.0,
            "deltas": [0.25, 0.0625, 0.00390625],
            "eps": [0.01], "max_steps": 300,
        }))
        out = str(tmp_path)
        assert run(["--out", out, "sweep", "--config", str(cfg)]) == 0
        import csv as csvmod

        with open(f"{out}/sweep.csv") as fh:
            rows = list(csvmod.DictReader(fh))
        assert [int(r["first_merge"]) for r in rows] == [2, 4, 8]
        assert [int(r["predicted_merge"]) for r in rows] == [2, 4, 8]
        # audit trail: every row echoes the full resolved config and bounds
        echo = json.loads(rows[0]["config"])
        assert echo["graph"] == "path:4" and echo["delta"] == 0.25
        assert float(rows[0]["bound_break_budget"]) == 2048.0
        assert float(rows[0]["bound_conductance_floor"]) > 0
        assert rows[0]["partial"] == "False"

    def test_sweep_seeds(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "graph": "star:4", "R": 1.0, "seeds": [3, 4],
            "sampler": {"mode": "narrow_spread", "center": 0.0, "width": 0.5},
            "eps": [0.01], "max_steps": 300,
        }))
        assert run(["--out", str(tmp_path), "sweep", "--config", str(cfg)]) == 0
        assert len(read(f"{tmp_path}/sweep.csv").splitlines()) == 3

    def test_sweep_reruns_byte_identical(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "graph": "path:5", "R": 1.0, "seeds": [9, 10, 11],
            "sampler": {"mode": "uniform_box", "lo": -1.0, "hi": 1.0},
            "eps": [0.01], "max_steps": 200,
        }))
        a, b = str(tmp_path / "a"), str(tmp_path / "b")
        assert run(["--out", a, "sweep", "--config", str(cfg)]) == 0
        assert run(["--out", b, "sweep", "--config", str(cfg)]) == 0
        assert read(f"{a}/sweep.csv") == read(f"{b}/sweep.csv")


class TestExitCodes:
    def test_usage(self, capsys):
        assert run(["simulate", "--graph", "path:4"]) == 1
        assert run(["simulate", "--graph", "nosuch.json", "--x0", "0,0"]) == 1
        assert run(["check-merge", "--graph", "path:4", "--vp", "1,9", "--vq", "2"]) == 1

    def test_malformed_graph_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 2, "edges": [[1, 5]]}')
        code = run(["simulate", "--graph", str(bad), "--x0", "0,0"])
        assert code == 1
        assert "out of range" in capsys.readouterr().err

    def test_budget_exhausted(self, capsys):
        code = run([
            "simulate", "--graph", "path:4", "--x0", "four-path:delta=0.25",
            "--stop-on", "termination", "--max-steps", "5",
        ])
        assert code == 3

    def test_numerical_failure(self, capsys):
        # conductance guard: exhaustive enumeration refuses n > 24
        code = run(["bounds", "--graph", "path:25", "--eps", "0.01", "--R", "1"])
        assert code == 2

    def test_seed_zero(self, capsys):
        code = run([
            "--seed", "0", "simulate", "--graph", "path:3",
            "--x0", "narrow-spread:center=0,width=0.5",
        ])
        assert code == 1
