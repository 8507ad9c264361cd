"""Sparse observations of a partially known matrix, with split tags."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DuplicateEntryError, InvalidInputError

__all__ = ["ObservationSet", "TRAIN", "VAL", "TEST", "SPLIT_NAMES"]

TRAIN, VAL, TEST = 0, 1, 2
SPLIT_NAMES = {TRAIN: "train", VAL: "val", TEST: "test"}
_SPLIT_CODES = {v: k for k, v in SPLIT_NAMES.items()}


@dataclass
class ObservationSet:
    """(row, col, value) entries of a rows x cols matrix, tagged train/val/test."""

    rows: int
    cols: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray
    split: np.ndarray = field(default=None)

    def __post_init__(self):
        self.row_idx = np.asarray(self.row_idx, dtype=np.int64)
        self.col_idx = np.asarray(self.col_idx, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=float)
        if self.split is None:
            self.split = np.full(self.row_idx.size, TRAIN, dtype=np.int8)
        else:
            self.split = np.asarray(self.split, dtype=np.int8)
        n = self.row_idx.size
        if not (self.col_idx.size == self.values.size == self.split.size == n):
            raise InvalidInputError("observation arrays have mismatched lengths")
        if not np.all(np.isfinite(self.values)):
            raise InvalidInputError("observation values contain non-finite entries")
        if n:
            if self.row_idx.min() < 0 or self.row_idx.max() >= self.rows:
                raise DataError(f"row index out of range for {self.rows} rows")
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.cols:
                raise DataError(f"col index out of range for {self.cols} cols")
            keys = self.row_idx * self.cols + self.col_idx
            if np.unique(keys).size != n:
                raise DuplicateEntryError("duplicate (row, col) observation")
        if not np.all(np.isin(self.split, (TRAIN, VAL, TEST))):
            raise DataError("split tags must be train/val/test")

    def __len__(self) -> int:
        return self.row_idx.size

    def subset(self, split: int) -> "ObservationSet":
        m = self.split == split
        return ObservationSet(
            rows=self.rows,
            cols=self.cols,
            row_idx=self.row_idx[m],
            col_idx=self.col_idx[m],
            values=self.values[m],
            split=self.split[m],
        )

    def counts(self) -> dict:
        return {name: int((self.split == code).sum()) for code, name in SPLIT_NAMES.items()}

    def to_dense(self, fill: float = 0.0) -> np.ndarray:
        out = np.full((self.rows, self.cols), fill)
        out[self.row_idx, self.col_idx] = self.values
        return out

    def mask(self, split: int | None = None) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=bool)
        if split is None:
            out[self.row_idx, self.col_idx] = True
        else:
            m = self.split == split
            out[self.row_idx[m], self.col_idx[m]] = True
        return out

    def save(self, path) -> None:
        """Exact round-trip serialization (floats via repr)."""
        payload = {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [
                [int(i), int(j), float(v), SPLIT_NAMES[int(s)]]
                for i, j, v, s in zip(self.row_idx, self.col_idx, self.values, self.split)
            ],
        }
        with open(path, "w") as fh:
            json.dump(payload, fh)

    @classmethod
    def load(cls, path) -> "ObservationSet":
        with open(path) as fh:
            payload = json.load(fh)
        try:
            entries = payload["entries"]
            rows, cols = int(payload["rows"]), int(payload["cols"])
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed observation file {path}: {exc}") from exc
        if entries:
            ri, ci, vals, sp = zip(*[(e[0], e[1], e[2], _SPLIT_CODES[e[3]]) for e in entries])
        else:
            ri = ci = vals = sp = ()
        return cls(
            rows=rows,
            cols=cols,
            row_idx=np.array(ri, dtype=np.int64),
            col_idx=np.array(ci, dtype=np.int64),
            values=np.array(vals, dtype=float),
            split=np.array(sp, dtype=np.int8),
        )
