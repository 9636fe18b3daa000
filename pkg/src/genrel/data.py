"""Observation model and the cross-fitting fold split.

A :class:`Dataset` holds the union of the two trait samples.  Each row is one
unit with a predictor vector and up to two trait values; ``t_y``/``t_z`` record
which of them were observed.  Unobserved trait cells are stored as 0 so that
``y`` is literally ``T_y * Y``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from genrel._rng import generator
from genrel.errors import (
    EmptyDataset,
    MismatchedPlan,
    NoTraitObserved,
    NonFiniteValue,
    RaggedRows,
    TooFewObservations,
)

_tokens = itertools.count(1)


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Dataset:
    """Predictors plus two optionally observed traits.

    Use :func:`build_dataset` for row-wise input or :meth:`from_arrays` for
    column-wise input; both validate.  ``row_ids`` map rows back to the parent
    dataset after :meth:`subset`, and ``token`` identifies the parent, which is
    what fold-leakage checks compare.
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    t_y: np.ndarray
    t_z: np.ndarray
    row_ids: np.ndarray
    token: int = field(default=0)

    @classmethod
    def from_arrays(cls, x, y, z, t_y=None, t_z=None):
        """Validate and wrap column arrays.

        ``y``/``z`` may contain NaN for unobserved cells when the indicator is
        omitted; an explicit indicator takes precedence and the masked values
        are ignored.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[0] == 0:
            raise EmptyDataset("predictor matrix must be 2-d with at least one row")
        n, p = x.shape
        if p < 1:
            raise RaggedRows("predictor vectors must have length >= 1")
        y = np.asarray(y, dtype=float).reshape(-1)
        z = np.asarray(z, dtype=float).reshape(-1)
        if y.shape[0] != n or z.shape[0] != n:
            raise RaggedRows("trait columns must have one entry per row")
        t_y = ~np.isnan(y) if t_y is None else np.asarray(t_y).astype(bool).reshape(-1)
        t_z = ~np.isnan(z) if t_z is None else np.asarray(t_z).astype(bool).reshape(-1)
        if t_y.shape[0] != n or t_z.shape[0] != n:
            raise RaggedRows("indicator columns must have one entry per row")

        neither = np.flatnonzero(~(t_y | t_z))
        if neither.size:
            raise NoTraitObserved(int(neither[0]))
        bad = np.argwhere(~np.isfinite(x))
        if bad.size:
            raise NonFiniteValue(int(bad[0, 0]), f"x{bad[0, 1] + 1}")
        for name, v, t in (("y", y, t_y), ("z", z, t_z)):
            bad = np.flatnonzero(t & ~np.isfinite(v))
            if bad.size:
                raise NonFiniteValue(int(bad[0]), name)
        if not t_y.any() or not t_z.any():
            raise EmptyDataset("each trait needs at least one observed row")

        return cls(
            x=_frozen(x, float),
            y=_frozen(np.where(t_y, y, 0.0), float),
            z=_frozen(np.where(t_z, z, 0.0), float),
            t_y=_frozen(t_y, bool),
            t_z=_frozen(t_z, bool),
            row_ids=_frozen(np.arange(n), np.int64),
            token=next(_tokens),
        )

    @property
    def n_rows(self):
        return self.x.shape[0]

    @property
    def p(self):
        return self.x.shape[1]

    @property
    def n_y(self):
        return int(self.t_y.sum())

    @property
    def n_z(self):
        return int(self.t_z.sum())

    @property
    def n_0(self):
        return int((self.t_y & self.t_z).sum())

    def subset(self, rows):
        rows = np.asarray(rows)
        return Dataset(
            x=_frozen(self.x[rows], float),
            y=_frozen(self.y[rows], float),
            z=_frozen(self.z[rows], float),
            t_y=_frozen(self.t_y[rows], bool),
            t_z=_frozen(self.t_z[rows], bool),
            row_ids=_frozen(self.row_ids[rows], np.int64),
            token=self.token,
        )

    def swap_traits(self):
        """Same units with the roles of y and z exchanged."""
        return Dataset(self.x, self.z, self.y, self.t_z, self.t_y, self.row_ids, self.token)


def build_dataset(rows):
    """Build a :class:`Dataset` from ``(x, y, z)`` triples; ``None`` marks a missing trait."""
    rows = list(rows)
    if not rows:
        raise EmptyDataset("no rows")
    p = None
    xs, ys, zs = [], [], []
    for i, (xv, yv, zv) in enumerate(rows):
        xv = np.asarray(xv, dtype=float).reshape(-1)
        if p is None:
            p = xv.shape[0]
            if p < 1:
                raise RaggedRows("predictor vectors must have length >= 1")
        elif xv.shape[0] != p:
            raise RaggedRows(f"row {i} has {xv.shape[0]} predictors, expected {p}")
        if yv is None and zv is None:
            raise NoTraitObserved(i)
        xs.append(xv)
        ys.append(np.nan if yv is None else float(yv))
        zs.append(np.nan if zv is None else float(zv))
    t_y = np.array([r[1] is not None for r in rows])
    t_z = np.array([r[2] is not None for r in rows])
    return Dataset.from_arrays(np.vstack(xs), ys, zs, t_y, t_z)


@dataclass(frozen=True, eq=False)
class FoldPlan:
    """Unit-level two-way split; ``assignment[i]`` is 1 or 2."""

    assignment: np.ndarray
    seed: int
    token: int

    def rows(self, fold):
        return np.flatnonzero(self.assignment == fold)


def make_fold_plan(d, seed):
    """Seeded, stratified, unit-level split of ``d`` into two folds.

    Rows are stratified by observation pattern (both traits, y only, z only)
    and each stratum is halved.  An odd "both" stratum gives its extra unit to
    fold 1; an odd single-trait stratum gives its extra unit to whichever fold
    is short of that trait so far (fold 1 on ties), which keeps n_y, n_z and
    n_0 each within one of balanced.  One permutation of all rows drives every
    stratum, so exchanging the two traits yields the same plan.
    """
    if d.n_y < 2 or d.n_z < 2:
        raise TooFewObservations(f"need N_y >= 2 and N_z >= 2, got {d.n_y} and {d.n_z}")
    order = generator(seed).permutation(d.n_rows)
    both = d.t_y & d.t_z
    strata = (both, d.t_y & ~d.t_z, d.t_z & ~d.t_y)

    assignment = np.zeros(d.n_rows, dtype=np.int8)
    for k, mask in enumerate(strata):
        members = order[mask[order]]
        half, extra = divmod(members.size, 2)
        first = half
        if extra:
            if k == 0:
                first += 1
            else:
                trait = d.t_y if k == 1 else d.t_z
                n1 = int((trait & (assignment == 1)).sum())
                n2 = int((trait & (assignment == 2)).sum())
                if n1 <= n2:
                    first += 1
        assignment[members[:first]] = 1
        assignment[members[first:]] = 2
    assignment.setflags(write=False)
    return FoldPlan(assignment=assignment, seed=int(seed), token=d.token)


@dataclass(frozen=True)
class FoldCounts:
    n_y: int
    n_z: int
    n_0: int
    n: int


@dataclass(frozen=True)
class SampleCounts:
    folds: tuple
    N_y: int
    N_z: int
    N_0: int
    N: int

    @property
    def balanced(self):
        """True when both folds hold identical (n_y, n_z, n_0)."""
        a, b = self.folds
        return (a.n_y, a.n_z, a.n_0) == (b.n_y, b.n_z, b.n_0)

    def as_dict(self):
        return {
            "N_y": self.N_y, "N_z": self.N_z, "N_0": self.N_0, "N": self.N,
            "folds": [vars(f).copy() for f in self.folds],
            "balanced": self.balanced,
        }


def _fold_counts(t_y, t_z):
    n_y, n_z, n_0 = int(t_y.sum()), int(t_z.sum()), int((t_y & t_z).sum())
    return FoldCounts(n_y, n_z, n_0, n_y + n_z - n_0)


def counts(d, f):
    if f.assignment.shape[0] != d.n_rows or f.token != d.token:
        raise MismatchedPlan("fold plan was built for a different dataset")
    folds = tuple(_fold_counts(d.t_y[f.assignment == k], d.t_z[f.assignment == k])
                  for k in (1, 2))
    return SampleCounts(folds=folds, N_y=d.n_y, N_z=d.n_z, N_0=d.n_0, N=d.n_rows)
