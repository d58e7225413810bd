import pytest

from ddsopt import (builtin_problem, export, load_histories,
                    read_history_csv, records_equal, run, run_campaign,
                    write_history_csv, write_history_jsonl)
from ddsopt.harness import profile_report, run_instance
from ddsopt.benchmarks import Instance
from ddsopt.profiles import data_profile


def test_run_instance_applies_options():
    inst = Instance("f1", 4, options={"frame0": 0.5, "search": "none"})
    history = run_instance(inst, "ads", budget_groups=50)
    assert history.metadata["budget"] == 100  # 50 * (n + 1) with n = 1
    assert history.metadata["options"]["frame0"] == 0.5


def test_campaign_parallel_matches_serial(tmp_path):
    serial_dir = tmp_path / "serial"
    parallel_dir = tmp_path / "parallel"
    run_campaign("counterexamples", ("ads",), seeds=2, budget_groups=20,
                 out_dir=serial_dir)
    run_campaign("counterexamples", ("ads",), seeds=2, budget_groups=20,
                 out_dir=parallel_dir, workers=2)
    for path in sorted(serial_dir.glob("*.csv")):
        twin = parallel_dir / path.name
        assert twin.exists()
        assert path.read_text() == twin.read_text()


def test_load_histories_from_manifest(tmp_path):
    run_campaign("counterexamples", ("ads", "sdds"), seeds=1,
                 budget_groups=15, out_dir=tmp_path)
    histories = load_histories(tmp_path)
    assert len(histories) == 4
    assert all(h.metadata.get("algorithm") in ("ads", "sdds")
               for h in histories)


def test_load_histories_fallback_name_parsing(tmp_path):
    history = run("ads", builtin_problem("f2"), budget=12, seed=3)
    write_history_csv(history, tmp_path / "f2__ads__s3.csv")
    loaded = load_histories(tmp_path)
    assert len(loaded) == 1
    meta = loaded[0].metadata
    assert meta["problem"] == "f2" and meta["algorithm"] == "ads"
    assert meta["seed"] == 3


def test_load_histories_jsonl_fallback(tmp_path):
    history = run("sdds", builtin_problem("f2"), budget=12, seed=0)
    write_history_jsonl(history, tmp_path / "run.jsonl")
    loaded = load_histories(tmp_path)
    assert len(loaded) == 1 and loaded[0].metadata["algorithm"] == "sdds"


def test_load_histories_empty_dir(tmp_path):
    with pytest.raises(ValueError, match="no run histories"):
        load_histories(tmp_path)


def test_profile_report_single_algorithm_exact_path(tmp_path):
    run_campaign("counterexamples", ("ads",), seeds=2, budget_groups=20,
                 out_dir=tmp_path / "camp")
    histories = load_histories(tmp_path / "camp")
    out = tmp_path / "curve.csv"
    report = profile_report(histories, tau_acc=0.1, out_path=out)
    assert report["files"] == {"ads": str(out)}
    assert out.exists() and (tmp_path / "curve.svg").exists()


def test_export_dispatcher(tmp_path):
    history = run("ads", builtin_problem("f2"), budget=10, seed=0)
    export(history, tmp_path / "h.csv")
    export(history, tmp_path / "h.jsonl")
    export(history, tmp_path / "h.svg")
    assert records_equal(read_history_csv(tmp_path / "h.csv").records,
                         history.records)
    curve = data_profile([2], [1], alphas=[1.0, 2.0], tau_acc=0.5)
    export(curve, tmp_path / "c.csv")
    export(curve, tmp_path / "c.svg", fmt="svg")
    assert (tmp_path / "c.csv").read_text().startswith("alpha,fraction")
    with pytest.raises(ValueError, match="cannot export"):
        export(curve, tmp_path / "c.jsonl")
    with pytest.raises(ValueError, match="cannot export"):
        export(object(), tmp_path / "x.csv")
