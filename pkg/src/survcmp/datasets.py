"""CSV ingestion and the bundled two-group tongue-cancer dataset.

The bundled file records time to death (weeks) for 80 tongue-cancer
patients split by tumor DNA profile: aneuploid (type 1, 52 patients) and
diploid (type 2, 28 patients); delta is 1 for an observed death and 0 for
censoring.
"""

from __future__ import annotations

import csv
from importlib import resources

import numpy as np

from .survival import Sample

__all__ = ["tongue_path", "ingest_csv", "load_tongue", "HORIZON_POLICIES"]

# what to do with recorded times beyond the analysis window [0, k]:
#   censor: administratively censored at k (the subject was under
#           observation and alive at the window end)
#   event:  an event at k (survival past the window counts as reaching
#           the truncated endpoint)
HORIZON_POLICIES = ("censor", "event")


def tongue_path():
    """Filesystem path of the bundled dataset."""
    return resources.files("survcmp.data").joinpath("tongue.csv")


def _apply_policy(time: float, event: bool, k: float, policy: str) -> tuple[float, bool]:
    if time > k:
        return k, policy == "event"
    return time, event


def ingest_csv(path, k: float, time_col: str = "time", status_col: str = "delta",
               group_col: str = "type", event_value: str = "1",
               censored_value: str = "0", beyond_horizon: str = "censor",
               ) -> tuple[Sample, Sample]:
    """Read a two-group CSV into a pair of Samples keyed by sorted label.

    The status column must contain only ``event_value`` and
    ``censored_value``.  Rows with time beyond k are rewritten per
    ``beyond_horizon`` (see :data:`HORIZON_POLICIES`).  Errors carry the
    1-based file row number (header = row 1).
    """
    if beyond_horizon not in HORIZON_POLICIES:
        raise ValueError(f"beyond_horizon must be one of {HORIZON_POLICIES}")
    k = float(k)
    if not np.isfinite(k) or k <= 0:
        raise ValueError("invalid horizon")

    by_group: dict[str, list[tuple[float, bool]]] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in (time_col, status_col, group_col):
            if col not in header:
                raise ValueError(f"missing column {col!r}")
        for row_no, row in enumerate(reader, start=2):
            raw_time = (row[time_col] or "").strip()
            try:
                time = float(raw_time)
            except ValueError:
                raise ValueError(f"row {row_no}: non-numeric time {raw_time!r}") from None
            if not np.isfinite(time) or time <= 0:
                raise ValueError(f"row {row_no}: time must be positive, got {raw_time!r}")
            status = (row[status_col] or "").strip()
            if status == event_value:
                event = True
            elif status == censored_value:
                event = False
            else:
                raise ValueError(f"row {row_no}: invalid status code {status!r}")
            group = (row[group_col] or "").strip()
            by_group.setdefault(group, []).append(_apply_policy(time, event, k, beyond_horizon))

    if len(by_group) != 2:
        raise ValueError(f"expected exactly 2 groups, found {len(by_group)}")
    labels = sorted(by_group, key=_label_key)
    samples = []
    for label in labels:
        rows = by_group[label]
        times = np.array([t for t, _ in rows])
        events = np.array([e for _, e in rows])
        samples.append(Sample(times, events, k))
    return samples[0], samples[1]


def _label_key(label: str):
    try:
        return (0, float(label), label)
    except ValueError:
        return (1, 0.0, label)


def load_tongue(k: float = 200.0, beyond_horizon: str = "censor") -> tuple[Sample, Sample]:
    """The bundled dataset as (aneuploid, diploid) Samples on [0, k]."""
    with resources.as_file(tongue_path()) as path:
        return ingest_csv(path, k=k, beyond_horizon=beyond_horizon)
