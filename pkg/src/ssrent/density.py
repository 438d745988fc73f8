"""Sparse density operators over Fock labels."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .fock import DROP_TOL, BasisLabel, ModeLayout, PureState

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-9
PSD_TOL = 1e-9

Entry = tuple[BasisLabel, BasisLabel]


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Operator stored as a map ``(row label, column label) -> complex``.

    Construction does not enforce positivity so that partial transposes can
    reuse the type; call :meth:`validate` for the full state invariants.
    """

    layout: ModeLayout
    entries: Mapping[Entry, complex]

    @classmethod
    def from_entries(cls, layout: ModeLayout, entries: Mapping[Entry, complex]) -> "DensityOperator":
        clean = {k: complex(v) for k, v in sorted(entries.items()) if abs(v) > DROP_TOL}
        return cls(layout, MappingProxyType(clean))

    @classmethod
    def from_pure(cls, psi: PureState) -> "DensityOperator":
        items = list(psi.amps.items())
        return cls.from_entries(psi.layout, {(x, y): ax * ay.conjugate() for x, ax in items for y, ay in items})

    def labels(self) -> list[BasisLabel]:
        return sorted({x for x, _ in self.entries} | {y for _, y in self.entries})

    def trace(self) -> complex:
        return complex(sum(v for (x, y), v in self.entries.items() if x == y))

    def entry(self, x: BasisLabel, y: BasisLabel) -> complex:
        return self.entries.get((x, y), 0j)

    def to_dense(self, labels: list[BasisLabel] | None = None) -> tuple[list[BasisLabel], np.ndarray]:
        labels = self.labels() if labels is None else labels
        index = {lab: i for i, lab in enumerate(labels)}
        mat = np.zeros((len(labels), len(labels)), dtype=complex)
        for (x, y), v in self.entries.items():
            if x in index and y in index:
                mat[index[x], index[y]] = v
        return labels, mat

    def eigenvalues(self) -> np.ndarray:
        _, mat = self.to_dense()
        if mat.size == 0:
            return np.zeros(0)
        return np.linalg.eigvalsh((mat + mat.conj().T) / 2)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return all(abs(v - self.entry(y, x).conjugate()) <= tol for (x, y), v in self.entries.items())

    def validate(self) -> None:
        if not self.is_hermitian():
            raise ValueError("operator is not Hermitian")
        tr = self.trace()
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"trace {tr} differs from 1")
        ev = self.eigenvalues()
        if ev.size and ev[0] < -PSD_TOL:
            raise ValueError(f"negative eigenvalue {ev[0]:.3e}")

    def max_abs_diff(self, other: "DensityOperator") -> float:
        keys = set(self.entries) | set(other.entries)
        return max((abs(self.entries.get(k, 0j) - other.entries.get(k, 0j)) for k in keys), default=0.0)
