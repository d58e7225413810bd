"""Run histories: ordered evaluation records plus serialization.

Histories are written at full decimal precision (17 significant digits) so
that exported runs replay and compare bit-identically.
"""

import csv
import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

PHASES = ("initial", "search", "poll")

FLOAT_FMT = ".17g"


def _fmt(value):
    return format(float(value), FLOAT_FMT)


@dataclass
class EvalRecord:
    """One barrier evaluation inside a run."""

    eval_index: int
    iteration: int
    phase: str
    point: np.ndarray
    raw: float | None
    barrier: float
    feasible: bool
    incumbent: float
    frame: float
    excl: float


@dataclass
class IterationStats:
    """Per-iteration parameter trace (recorded with start-of-iteration values)."""

    iteration: int
    outcome: str
    frame: float
    excl: float
    n_unsuccessful: int
    evaluations: int


@dataclass
class RunHistory:
    metadata: dict
    records: list = field(default_factory=list)
    iterations: list = field(default_factory=list)

    @property
    def dim(self):
        if self.records:
            return self.records[0].point.size
        return self.metadata.get("n")

    def best_value(self):
        if not self.records:
            return None
        return self.records[-1].incumbent

    def incumbent_trace(self):
        """Best feasible value after each evaluation, as an array."""
        return np.array([r.incumbent for r in self.records])

    def trial_points(self):
        """Evaluated points in evaluation order, shape (N, n)."""
        return np.array([r.point for r in self.records])


def options_hash(options):
    payload = json.dumps(options, sort_keys=True, default=str)
    return hashlib.md5(payload.encode()).hexdigest()


def records_equal(a, b):
    """Bitwise equality of two record lists."""
    if len(a) != len(b):
        return False
    for ra, rb in zip(a, b):
        if (ra.eval_index != rb.eval_index or ra.iteration != rb.iteration
                or ra.phase != rb.phase or ra.raw != rb.raw
                or ra.barrier != rb.barrier or ra.feasible != rb.feasible
                or ra.incumbent != rb.incumbent or ra.frame != rb.frame
                or ra.excl != rb.excl
                or not np.array_equal(ra.point, rb.point)):
            return False
    return True


def history_header(dim):
    coords = [f"x{i + 1}" for i in range(dim)]
    return (["eval", "iter", "phase"] + coords
            + ["f_raw", "f_barrier", "feasible", "f_incumbent",
               "delta_frame", "delta_excl"])


def write_history_csv(history, path):
    dim = history.dim
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(history_header(dim))
        for r in history.records:
            row = [r.eval_index, r.iteration, r.phase]
            row += [_fmt(v) for v in r.point]
            row.append("" if r.raw is None else _fmt(r.raw))
            row += [_fmt(r.barrier), int(r.feasible), _fmt(r.incumbent),
                    _fmt(r.frame), _fmt(r.excl)]
            writer.writerow(row)
    return path


def read_history_csv(path, metadata=None):
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        dim = len(header) - 9
        if dim < 1 or header != history_header(dim):
            raise ValueError(f"{path}: not a run-history CSV")
        records = []
        for row in reader:
            point = np.array([float(v) for v in row[3:3 + dim]])
            raw = None if row[3 + dim] == "" else float(row[3 + dim])
            records.append(EvalRecord(
                eval_index=int(row[0]), iteration=int(row[1]), phase=row[2],
                point=point, raw=raw, barrier=float(row[4 + dim]),
                feasible=bool(int(row[5 + dim])), incumbent=float(row[6 + dim]),
                frame=float(row[7 + dim]), excl=float(row[8 + dim]),
            ))
    meta = dict(metadata or {})
    meta.setdefault("n", dim)
    return RunHistory(metadata=meta, records=records)


def write_history_jsonl(history, path):
    with open(path, "w") as handle:
        handle.write(json.dumps({"type": "metadata", **history.metadata}) + "\n")
        for r in history.records:
            handle.write(json.dumps({
                "type": "record", "eval": r.eval_index, "iter": r.iteration,
                "phase": r.phase, "x": [float(v) for v in r.point],
                "f_raw": r.raw, "f_barrier": r.barrier,
                "feasible": r.feasible, "f_incumbent": r.incumbent,
                "delta_frame": r.frame, "delta_excl": r.excl,
            }) + "\n")
        for it in history.iterations:
            handle.write(json.dumps({
                "type": "iteration", "iter": it.iteration,
                "outcome": it.outcome, "delta_frame": it.frame,
                "delta_excl": it.excl, "n_unsuccessful": it.n_unsuccessful,
                "evaluations": it.evaluations,
            }) + "\n")
    return path


def read_history_jsonl(path):
    metadata = {}
    records = []
    iterations = []
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            kind = obj.pop("type", None)
            if kind == "metadata":
                metadata = obj
            elif kind == "record":
                records.append(EvalRecord(
                    eval_index=obj["eval"], iteration=obj["iter"],
                    phase=obj["phase"], point=np.array(obj["x"], dtype=float),
                    raw=obj["f_raw"], barrier=obj["f_barrier"],
                    feasible=obj["feasible"], incumbent=obj["f_incumbent"],
                    frame=obj["delta_frame"], excl=obj["delta_excl"],
                ))
            elif kind == "iteration":
                iterations.append(IterationStats(
                    iteration=obj["iter"], outcome=obj["outcome"],
                    frame=obj["delta_frame"], excl=obj["delta_excl"],
                    n_unsuccessful=obj["n_unsuccessful"],
                    evaluations=obj["evaluations"],
                ))
            else:
                raise ValueError(f"{path}: unknown line type {kind!r}")
    return RunHistory(metadata=metadata, records=records, iterations=iterations)
