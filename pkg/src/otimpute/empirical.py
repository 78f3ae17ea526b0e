"""Weighted empirical measures on the line, with ECDF and quantile access.

Atoms are kept sorted and deduplicated; the quantile is the left-continuous
generalized inverse, so the quantile-matched map between two measures is well
defined on atoms.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .errors import CSVFormatError, DomainError, EstimationError

_WEIGHT_TOL = 1e-12


class EmpiricalMeasure:
    """Probability measure with finitely many weighted atoms on the real line.

    Immutable after construction: duplicate atom values are merged (weights
    summed), atoms end up strictly increasing, weights positive and summing
    to one within 1e-12.
    """

    __slots__ = ("atoms", "weights", "_cum")

    def __init__(self, atoms, weights):
        atoms = np.asarray(atoms, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if atoms.ndim != 1 or atoms.shape != weights.shape:
            raise DomainError("atoms and weights must be 1-d arrays of equal length")
        if atoms.size == 0:
            raise DomainError("a measure needs at least one atom")
        if not np.all(np.isfinite(atoms)):
            raise DomainError("atom values must be finite")
        if not np.all(np.isfinite(weights)):
            raise DomainError("weights must be finite")
        order = np.argsort(atoms, kind="stable")
        atoms = atoms[order]
        weights = weights[order]
        uniq, inverse = np.unique(atoms, return_inverse=True)
        merged = np.zeros(uniq.size)
        np.add.at(merged, inverse, weights)
        if np.any(merged <= 0.0):
            raise DomainError("every merged atom weight must be positive")
        total = merged.sum()
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise DomainError(f"weights must sum to 1 within {_WEIGHT_TOL}, got {total!r}")
        cum = np.cumsum(merged)
        cum[-1] = 1.0  # absorb roundoff so quantile(1.0) is always defined
        for arr in (uniq, merged, cum):
            arr.flags.writeable = False
        object.__setattr__(self, "atoms", uniq)
        object.__setattr__(self, "weights", merged)
        object.__setattr__(self, "_cum", cum)

    def __setattr__(self, name, value):
        raise AttributeError("EmpiricalMeasure is immutable")

    def __len__(self) -> int:
        return self.atoms.size

    def __repr__(self) -> str:
        return f"EmpiricalMeasure({self.atoms.size} atoms on [{self.atoms[0]:g}, {self.atoms[-1]:g}])"

    @classmethod
    def from_samples(cls, values) -> "EmpiricalMeasure":
        """Uniform measure over raw draws (duplicates merged afterwards)."""
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            raise EstimationError("cannot build a measure from zero samples")
        return cls(values, np.full(values.size, 1.0 / values.size))

    def ecdf(self, y):
        """P(X <= y): right-continuous, 0 below the support, 1 at the top atom."""
        y = np.asarray(y, dtype=float)
        idx = np.searchsorted(self.atoms, y, side="right")
        out = np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if out.ndim == 0 else out

    def quantile(self, u):
        """Left-continuous generalized inverse: smallest atom with ecdf >= u."""
        u = np.asarray(u, dtype=float)
        if np.any(u <= 0.0) or np.any(u > 1.0):
            raise DomainError("quantile level must lie in (0, 1]")
        idx = np.searchsorted(self._cum, u, side="left")
        out = self.atoms[idx]
        return float(out) if out.ndim == 0 else out

    def quantile_index(self, u) -> int:
        """Index of the atom returned by :meth:`quantile`."""
        u = float(u)
        if not 0.0 < u <= 1.0:
            raise DomainError("quantile level must lie in (0, 1]")
        return int(np.searchsorted(self._cum, u, side="left"))

    def mean(self) -> float:
        return float(self.weights @ self.atoms)

    def variance(self) -> float:
        m = self.mean()
        return float(self.weights @ (self.atoms - m) ** 2)


@dataclass(frozen=True)
class ObservedDataset:
    """Observed (outcome, treatment[, covariate label]) records."""

    outcomes: np.ndarray
    treatments: np.ndarray
    covariates: tuple | None = None

    def __post_init__(self):
        outcomes = np.asarray(self.outcomes, dtype=float)
        treatments = np.asarray(self.treatments, dtype=int)
        if outcomes.ndim != 1 or outcomes.shape != treatments.shape:
            raise DomainError("outcomes and treatments must be 1-d and equally long")
        if not np.all(np.isfinite(outcomes)):
            raise DomainError("outcomes must be finite")
        if not np.all((treatments == 0) | (treatments == 1)):
            raise DomainError("treatments must be 0/1 flags")
        covariates = self.covariates
        if covariates is not None:
            covariates = tuple(str(x) for x in covariates)
            if len(covariates) != outcomes.size:
                raise DomainError("covariates must match the number of outcomes")
        outcomes.flags.writeable = False
        treatments.flags.writeable = False
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "treatments", treatments)
        object.__setattr__(self, "covariates", covariates)

    def __len__(self) -> int:
        return self.outcomes.size


def split_by_treatment(data: ObservedDataset) -> tuple[EmpiricalMeasure, EmpiricalMeasure]:
    """Arm-wise empirical measures (control first), uniform before dedup."""
    control = data.outcomes[data.treatments == 0]
    treated = data.outcomes[data.treatments == 1]
    if control.size == 0:
        raise EstimationError("control arm is empty")
    if treated.size == 0:
        raise EstimationError("treated arm is empty")
    return EmpiricalMeasure.from_samples(control), EmpiricalMeasure.from_samples(treated)


def read_observed_csv(path) -> ObservedDataset:
    """Parse a `y,t[,x]` CSV; malformed rows raise with their line number."""
    outcomes: list[float] = []
    treatments: list[int] = []
    covariates: list[str] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CSVFormatError("empty file: expected header y,t[,x]", row=1) from None
        header = [h.strip() for h in header]
        if header not in (["y", "t"], ["y", "t", "x"]):
            raise CSVFormatError(f"bad header {header!r}: expected y,t or y,t,x", row=1)
        has_x = len(header) == 3
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise CSVFormatError(
                    f"row {line_no}: expected {len(header)} fields, got {len(row)}", row=line_no
                )
            y_raw, t_raw = row[0].strip(), row[1].strip()
            try:
                y = float(y_raw)
            except ValueError:
                raise CSVFormatError(f"row {line_no}: outcome {y_raw!r} is not a number", row=line_no) from None
            if not np.isfinite(y):
                raise CSVFormatError(f"row {line_no}: outcome must be finite", row=line_no)
            if t_raw not in ("0", "1"):
                raise CSVFormatError(f"row {line_no}: treatment {t_raw!r} is not 0 or 1", row=line_no)
            if has_x and row[2].strip() == "":
                raise CSVFormatError(f"row {line_no}: missing covariate label", row=line_no)
            outcomes.append(y)
            treatments.append(int(t_raw))
            if has_x:
                covariates.append(row[2].strip())
    if not outcomes:
        raise CSVFormatError("no data rows", row=2)
    return ObservedDataset(outcomes, treatments, covariates if has_x else None)
