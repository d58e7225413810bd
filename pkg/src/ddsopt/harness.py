"""Campaign orchestration: run suites, persist histories, aggregate profiles."""

import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .benchmarks import Instance, suite
from .history import (RunHistory, read_history_csv, read_history_jsonl,
                      write_history_csv, write_history_jsonl)
from .profiles import ProfileCurve, compute_profiles, write_profile_csv
from .solvers import run

DEFAULT_OUT_ENV = "DDSOPT_OUT_DIR"


def default_out_dir():
    return Path(os.environ.get(DEFAULT_OUT_ENV, "."))


def run_instance(instance, algorithm, budget_groups, search=None,
                 base_options=None):
    """Run one algorithm on one instance with a budget of
    ``budget_groups * (n + 1)`` evaluations."""
    problem = instance.make_problem()
    options = dict(base_options or {})
    options.update(instance.options)
    if search is not None:
        options["search"] = search
    options.setdefault("search", "none")
    budget = int(budget_groups) * (problem.dim + 1)
    history = run(algorithm, problem, budget, instance.seed, **options)
    history.metadata["variant"] = instance.variant
    return history


def _campaign_task(args):
    instance_fields, algorithm, budget_groups, search, out_dir = args
    instance = Instance(**instance_fields)
    history = run_instance(instance, algorithm, budget_groups, search=search)
    filename = f"{instance.problem}__{algorithm}__s{instance.seed}.csv"
    write_history_csv(history, Path(out_dir) / filename)
    meta = dict(history.metadata)
    meta["file"] = filename
    meta.pop("options_hash", None)
    return meta


def run_campaign(suite_name, algorithms, seeds, budget_groups, out_dir,
                 search=None, workers=1):
    """Run a suite across algorithms and seeds, writing one CSV per run.

    Returns the campaign manifest (also written to ``manifest.json`` in
    ``out_dir``), which records per-run metadata keyed by file name.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    instances = suite(suite_name, seeds)
    tasks = [
        ({"problem": inst.problem, "seed": inst.seed, "variant": inst.variant,
          "start": inst.start, "options": inst.options},
         algorithm, budget_groups, search, str(out_dir))
        for inst in instances for algorithm in algorithms
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(_campaign_task, tasks))
    else:
        entries = [_campaign_task(task) for task in tasks]
    campaign = {"suite": suite_name, "algorithms": list(algorithms),
                "seeds": seeds, "budget_groups": budget_groups,
                "runs": entries}
    with open(out_dir / "manifest.json", "w") as handle:
        json.dump(campaign, handle, indent=2)
    return campaign


def load_histories(directory):
    """Load run histories from a campaign directory.

    Reads ``manifest.json`` when present to recover metadata for CSV files;
    otherwise scans for ``*.jsonl`` histories and falls back to parsing
    ``problem__algorithm__sSEED.csv`` file names.
    """
    directory = Path(directory)
    histories = []
    manifest_path = directory / "manifest.json"
    if manifest_path.exists():
        with open(manifest_path) as handle:
            campaign = json.load(handle)
        for entry in campaign.get("runs", []):
            meta = {k: v for k, v in entry.items() if k != "file"}
            histories.append(read_history_csv(directory / entry["file"],
                                              metadata=meta))
        return histories
    for path in sorted(directory.glob("*.jsonl")):
        histories.append(read_history_jsonl(path))
    for path in sorted(directory.glob("*.csv")):
        stem_parts = path.stem.split("__")
        meta = {}
        if len(stem_parts) == 3 and stem_parts[2].startswith("s"):
            meta = {"problem": stem_parts[0], "algorithm": stem_parts[1],
                    "seed": int(stem_parts[2][1:])}
        histories.append(read_history_csv(path, metadata=meta))
    if not histories:
        raise ValueError(f"no run histories found in {directory}")
    return histories


def profile_report(histories, tau_acc, out_path, alphas=None, render=True):
    """Write per-algorithm profile CSVs plus one figure.

    ``out_path`` names the delimited output; with several algorithms each
    curve goes to ``<stem>.<algorithm>.csv``. The figure is rendered next to
    the CSV output with an ``.svg`` suffix unless ``render`` is false.
    """
    out_path = Path(out_path)
    curves = compute_profiles(histories, tau_acc, alphas=alphas)
    if not curves:
        raise ValueError("no solvable instances to profile")
    written = {}
    if len(curves) == 1:
        algorithm, curve = next(iter(curves.items()))
        write_profile_csv(curve, out_path)
        written[algorithm] = str(out_path)
    else:
        for algorithm, curve in curves.items():
            target = out_path.with_suffix(f".{algorithm}.csv")
            write_profile_csv(curve, target)
            written[algorithm] = str(target)
    figure = None
    if render:
        from .plots import render_profiles
        figure = str(out_path.with_suffix(".svg"))
        render_profiles(curves, figure)
    return {"curves": curves, "files": written, "figure": figure}


def export(obj, path, fmt=None):
    """Write a history or a profile curve to ``path``.

    ``fmt`` is one of csv, jsonl, or svg; when omitted it is inferred from
    the file extension.
    """
    path = Path(path)
    if fmt is None:
        fmt = path.suffix.lstrip(".").lower()
    if isinstance(obj, RunHistory):
        if fmt == "csv":
            return write_history_csv(obj, path)
        if fmt == "jsonl":
            return write_history_jsonl(obj, path)
        if fmt == "svg":
            from .plots import render_history
            return render_history(obj, path)
    elif isinstance(obj, ProfileCurve):
        if fmt == "csv":
            return write_profile_csv(obj, path)
        if fmt == "svg":
            from .plots import render_profiles
            return render_profiles(obj, path)
    raise ValueError(f"cannot export {type(obj).__name__} as {fmt!r}")
