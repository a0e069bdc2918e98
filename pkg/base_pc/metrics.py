"""Run telemetry files and summaries of BASE-PC experiments."""

import csv
import json
import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
import numpy as np
import pandas as pd
from .adaptation import IterationRecord


logger = logging.getLogger(__name__)


# the column order of every run log
COLUMNS = (
    "iter",
    "n_samples",
    "n_basis",
    "cv_rrmse",
    "ref_rrmse",
    "delta_star",
    "wall_time",
)


# the first field of the row closing a log whose run failed
ABORTED = "aborted"


# columns holding integers, all others hold floats
_INTEGER_COLUMNS = ("iter", "n_samples", "n_basis")


@dataclass
class RunLog:
    """
    The telemetry of one run.

    Args:
        config (dict): the JSON-ready configuration snapshot
        records (list): the IterationRecord of every iteration, in order
        surrogate (dict): the summary of the final surrogate, if any

    """

    config: dict
    records: list = field(default_factory=list)
    surrogate: dict = None


def snapshot_path(path):
    """Return the path of the JSON snapshot kept next to a CSV log."""
    return Path(path).with_suffix(".json")


def _format(value):
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _row(record):
    return [_format(getattr(record, column)) for column in COLUMNS]


def _parse(column, text):
    if text == "":
        return None
    if column in _INTEGER_COLUMNS:
        return int(text)
    return float(text)


def _write_snapshot(path, config, surrogate=None):
    with open(snapshot_path(path), "w") as handle:
        json.dump({"config": config, "surrogate": surrogate}, handle, indent=2)


def write_csv(log, path):
    """
    Write a run log as CSV with its JSON configuration snapshot alongside.

    Floats are written as their shortest round-trip representation.
    """
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(COLUMNS)
        for record in log.records:
            writer.writerow(_row(record))
    _write_snapshot(path, log.config, log.surrogate)


def read_csv(path):
    """
    Read the records of a CSV run log.

    Args:
        path (str): the CSV file

    Returns:
        the list of IterationRecord, stopping at an aborted marker row

    """
    records = []
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError("unexpected header {}".format(header))
        for row in reader:
            if row and row[0] == ABORTED:
                break
            values = {c: _parse(c, text) for c, text in zip(COLUMNS, row)}
            records.append(IterationRecord(**values))
    return records


def read_log(path):
    """Read a CSV run log and its snapshot into a RunLog."""
    with open(snapshot_path(path)) as handle:
        snapshot = json.load(handle)
    return RunLog(snapshot["config"], read_csv(path), snapshot.get("surrogate"))


class MetricsSink:
    """
    An append-only CSV run log, safe to write from several threads.

    Args:
        path (str): the CSV file to create
        config (dict): the configuration snapshot written alongside

    """

    def __init__(self, path, config):
        self.path = Path(path)
        self.config = config
        self._lock = threading.Lock()
        self._handle = open(self.path, "w", newline="")
        self._writer = csv.writer(self._handle)
        self._writer.writerow(COLUMNS)
        self._handle.flush()
        _write_snapshot(self.path, config)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        if exc_type is not None and not self._handle.closed:
            self.abort(str(exc_value))
        self.close()

    def write(self, record):
        """Append one IterationRecord."""
        with self._lock:
            self._writer.writerow(_row(record))
            self._handle.flush()

    def abort(self, message=""):
        """Close the log with the aborted marker row."""
        with self._lock:
            if self._handle.closed:
                return
            self._writer.writerow([ABORTED, message] + [""] * (len(COLUMNS) - 2))
            self._handle.close()
        logger.warning("run log %s aborted: %s", self.path, message)

    def close(self, surrogate=None):
        """Close the log, storing the final surrogate summary if given."""
        with self._lock:
            if not self._handle.closed:
                self._handle.close()
        if surrogate is not None:
            _write_snapshot(self.path, self.config, surrogate)


def mc_moments(qoi, n, rng):
    """
    Estimate the mean and variance of a QoI by plain Monte Carlo.

    Args:
        qoi (QoiSpec): the quantity of interest
        n (int): the number of draws, at least 2
        rng (np.random.Generator): the random stream

    Returns:
        a tuple (mean, unbiased variance)

    """
    if n < 2:
        raise ValueError("n must be at least 2")
    values = qoi(qoi.sample(n, rng))
    return float(np.mean(values)), float(np.var(values, ddof=1))


def correlation(xs, ys):
    """
    Return the Pearson correlation of log10 values of positive pairs.

    Pairs with a non-positive entry are dropped.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape:
        raise ValueError("xs and ys must have the same length")
    keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    if np.count_nonzero(keep) < 2:
        raise ValueError("correlation needs at least two positive pairs")
    log_x = np.log10(xs[keep])
    log_y = np.log10(ys[keep])
    if np.ptp(log_x) == 0 or np.ptp(log_y) == 0:
        raise ValueError("correlation needs variation in both series")
    return float(np.corrcoef(log_x, log_y)[0, 1])


def _frame(name, records):
    frame = pd.DataFrame(
        {
            "n_samples": [r.n_samples for r in records],
            "n_basis_" + name: [r.n_basis for r in records],
            "cv_rrmse_" + name: [r.cv_rrmse for r in records],
            "ref_rrmse_"
            + name: [np.nan if r.ref_rrmse is None else r.ref_rrmse for r in records],
        }
    )
    frame["n_samples"] = frame["n_samples"].astype("int64")
    return frame.sort_values("n_samples", kind="stable").reset_index(drop=True)


def summary_table(logs):
    """
    Join the records of several methods on the nearest sample count.

    Args:
        logs (dict): method name -> list of IterationRecord, at least two

    Returns:
        a pandas DataFrame keyed by the first method's sample counts with
        the basis size and errors of every method

    """
    if len(logs) < 2:
        raise ValueError("a summary needs at least two methods")
    frames = [_frame(name, records) for name, records in logs.items()]
    table = frames[0]
    for frame in frames[1:]:
        table = pd.merge_asof(table, frame, on="n_samples", direction="nearest")
    return table


# explicitly define the outward facing API of this module
__all__ = [
    RunLog.__name__,
    MetricsSink.__name__,
    write_csv.__name__,
    read_csv.__name__,
    read_log.__name__,
    mc_moments.__name__,
    correlation.__name__,
    summary_table.__name__,
]
