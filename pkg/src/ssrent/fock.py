"""Sparse Fock-basis representation of bipartite multimode pure states.

A state is a finite map from occupation-number labels to complex amplitudes.
Nothing is ever expanded over a truncated Fock space; dense matrices are only
built over the distinct sub-labels that actually occur in a state's support.

Copies of a state are laid out party-wise: ``tensor(psi, phi)`` appends phi's
Alice modes after psi's Alice modes and likewise for Bob, so an n-copy state
keeps a clean A:B cut.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import EmptyStateError, LayoutError

DROP_TOL = 1e-12
RANK_TOL = 1e-9
NORM_TOL = 1e-9

Occupation = tuple[int, ...]
LocalKet = Mapping[Occupation, complex]


class Party(str, Enum):
    A = "A"
    B = "B"


@dataclass(frozen=True)
class ModeLayout:
    alice_modes: int
    bob_modes: int

    def __post_init__(self):
        for name in ("alice_modes", "bob_modes"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise LayoutError(f"{name} must be a positive integer, got {value!r}")

    def modes(self, party: Party | str) -> int:
        return self.alice_modes if Party(party) is Party.A else self.bob_modes

    def __add__(self, other: "ModeLayout") -> "ModeLayout":
        return ModeLayout(self.alice_modes + other.alice_modes, self.bob_modes + other.bob_modes)


class BasisLabel(NamedTuple):
    """Occupation numbers of Alice's modes followed by Bob's modes."""

    alice: Occupation
    bob: Occupation

    def side(self, party: Party | str) -> Occupation:
        return self.alice if Party(party) is Party.A else self.bob

    def __str__(self) -> str:
        return f"|{','.join(map(str, self.alice))};{','.join(map(str, self.bob))}>"


def label(alice: Iterable[int], bob: Iterable[int]) -> BasisLabel:
    return BasisLabel(tuple(int(n) for n in alice), tuple(int(n) for n in bob))


def _check_label(layout: ModeLayout, lab: BasisLabel) -> BasisLabel:
    lab = label(*lab)
    if len(lab.alice) != layout.alice_modes or len(lab.bob) != layout.bob_modes:
        raise LayoutError(
            f"label {lab} has {len(lab.alice)}+{len(lab.bob)} modes, layout expects "
            f"{layout.alice_modes}+{layout.bob_modes}"
        )
    if any(n < 0 for n in lab.alice + lab.bob):
        raise LayoutError(f"negative occupation in {lab}")
    return lab


@dataclass(frozen=True, eq=False)
class PureState:
    """Immutable sparse ket. Build with :func:`make_ket` or :func:`from_amplitudes`."""

    layout: ModeLayout
    amps: Mapping[BasisLabel, complex]

    @property
    def norm_sq(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amps.values()))

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)

    @property
    def normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) <= NORM_TOL

    @property
    def is_zero(self) -> bool:
        return not self.amps

    def support(self) -> list[BasisLabel]:
        return sorted(self.amps)

    def amplitude(self, lab: BasisLabel) -> complex:
        return self.amps.get(label(*lab), 0j)

    def normalize(self) -> "PureState":
        if self.is_zero:
            raise EmptyStateError("cannot normalize the zero state")
        n = self.norm
        return from_amplitudes(self.layout, {k: v / n for k, v in self.amps.items()})

    def scaled(self, factor: complex) -> "PureState":
        return from_amplitudes(self.layout, {k: v * factor for k, v in self.amps.items()})

    def __add__(self, other: "PureState") -> "PureState":
        if other.layout != self.layout:
            raise LayoutError("cannot add states with different layouts")
        acc = dict(self.amps)
        for k, v in other.amps.items():
            acc[k] = acc.get(k, 0j) + v
        return from_amplitudes(self.layout, acc)

    def __repr__(self) -> str:
        terms = " + ".join(f"({a:.6g}){k}" for k, a in sorted(self.amps.items()))
        return f"PureState({self.layout.alice_modes}+{self.layout.bob_modes}: {terms or '0'})"


def from_amplitudes(layout: ModeLayout, amps: Mapping[BasisLabel, complex]) -> PureState:
    """Wrap an amplitude map, dropping entries below :data:`DROP_TOL`. Zero states allowed."""
    clean = {}
    for k in sorted(amps):
        v = complex(amps[k])
        if abs(v) > DROP_TOL:
            clean[_check_label(layout, k)] = v
    return PureState(layout, MappingProxyType(clean))


def zero_state(layout: ModeLayout) -> PureState:
    return PureState(layout, MappingProxyType({}))


def make_ket(layout: ModeLayout, terms: Iterable[tuple[complex, BasisLabel]]) -> PureState:
    """Superpose ``(amplitude, label)`` terms; duplicates are summed, result is not normalized."""
    acc: dict[BasisLabel, complex] = {}
    for amp, lab in terms:
        lab = _check_label(layout, lab)
        acc[lab] = acc.get(lab, 0j) + complex(amp)
    psi = from_amplitudes(layout, acc)
    if psi.is_zero:
        raise EmptyStateError("superposition has no nonzero amplitude")
    return psi


def product_state(alice: LocalKet, bob: LocalKet) -> PureState:
    """|a>_A |b>_B from two local kets given as occupation -> amplitude maps."""
    if not alice or not bob:
        raise EmptyStateError("product factors must be nonzero")
    na = {len(k) for k in alice}
    nb = {len(k) for k in bob}
    if len(na) != 1 or len(nb) != 1:
        raise LayoutError("local ket mixes occupation tuples of different lengths")
    layout = ModeLayout(na.pop(), nb.pop())
    return from_amplitudes(
        layout,
        {BasisLabel(tuple(ka), tuple(kb)): va * vb for ka, va in alice.items() for kb, vb in bob.items()},
    )


def tensor(psi: PureState, phi: PureState) -> PureState:
    """Party-wise tensor product (A modes of psi, then A modes of phi; same for B)."""
    out = {}
    for k1, a1 in psi.amps.items():
        for k2, a2 in phi.amps.items():
            out[BasisLabel(k1.alice + k2.alice, k1.bob + k2.bob)] = a1 * a2
    return from_amplitudes(psi.layout + phi.layout, out)


def tensor_power(psi: PureState, n: int) -> PureState:
    if n < 1:
        raise ValueError("copy count must be >= 1")
    out = psi
    for _ in range(n - 1):
        out = tensor(out, psi)
    return out


def inner(psi: PureState, phi: PureState) -> complex:
    """<psi|phi>."""
    if psi.layout != phi.layout:
        raise LayoutError("inner product of states with different layouts")
    return complex(sum(a.conjugate() * phi.amps[k] for k, a in psi.amps.items() if k in phi.amps))


def fidelity(psi: PureState, phi: PureState) -> float:
    """|<psi|phi>|^2 for normalized states; phase-insensitive."""
    return abs(inner(psi.normalize(), phi.normalize())) ** 2


def coefficient_matrix(psi: PureState) -> tuple[list[Occupation], list[Occupation], np.ndarray]:
    """The A:B coefficient matrix restricted to the support's sub-labels."""
    rows = sorted({k.alice for k in psi.amps})
    cols = sorted({k.bob for k in psi.amps})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: j for j, c in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for k, a in psi.amps.items():
        mat[ri[k.alice], ci[k.bob]] = a
    return rows, cols, mat


def schmidt_coefficients(psi: PureState) -> np.ndarray:
    """Singular values of the coefficient matrix, descending."""
    if psi.is_zero:
        raise EmptyStateError("Schmidt decomposition of the zero state")
    _, _, mat = coefficient_matrix(psi)
    return np.linalg.svd(mat, compute_uv=False)


def schmidt_rank(psi: PureState, tol: float = RANK_TOL) -> int:
    s = schmidt_coefficients(psi)
    return int(np.count_nonzero(s > tol * s[0]))


def is_product(psi: PureState, tol: float = RANK_TOL) -> bool:
    return schmidt_rank(psi, tol) == 1


def project(psi: PureState, keep: Callable[[BasisLabel], bool]) -> tuple[PureState, float]:
    """Keep the labels satisfying ``keep``; returns the unnormalized part and its weight."""
    part = from_amplitudes(psi.layout, {k: a for k, a in psi.amps.items() if keep(k)})
    return part, _weight(part, psi)


def _weight(part: PureState, whole: PureState) -> float:
    total = whole.norm_sq
    if total == 0.0:
        return 0.0
    return min(1.0, part.norm_sq / total)


def local_tensor(*kets: LocalKet) -> dict[Occupation, complex]:
    """Tensor product of local kets, concatenating occupation tuples."""
    out: dict[Occupation, complex] = {(): 1.0 + 0j}
    for ket in kets:
        out = {k1 + tuple(k2): a1 * a2 for k1, a1 in out.items() for k2, a2 in ket.items()}
    return out


def basis_ket(occ: Sequence[int]) -> dict[Occupation, complex]:
    return {tuple(int(n) for n in occ): 1.0 + 0j}


def project_local(
    psi: PureState,
    party: Party | str,
    modes: Sequence[int],
    kets: Sequence[LocalKet],
) -> tuple[PureState, float]:
    """Apply sum_k |k><k| on the given modes of one party.

    ``kets`` must be orthonormal vectors over occupation tuples of length
    ``len(modes)``. Returns the unnormalized projected state and the weight
    it carries relative to ``psi``.
    """
    party = Party(party)
    modes = list(modes)
    # <k| contracted on the projected modes, grouped by the untouched remainder
    grouped: dict[tuple[int, tuple], complex] = {}
    for lab, amp in psi.amps.items():
        occ = lab.side(party)
        sub = tuple(occ[m] for m in modes)
        rest = list(occ)
        for m in modes:
            rest[m] = -1
        key_rest = (tuple(rest), lab.bob if party is Party.A else lab.alice)
        for idx, ket in enumerate(kets):
            c = ket.get(sub)
            if c:
                key = (idx, key_rest)
                grouped[key] = grouped.get(key, 0j) + complex(c).conjugate() * amp
    out: dict[BasisLabel, complex] = {}
    for (idx, (occ, other)), v in grouped.items():
        for sub, c in kets[idx].items():
            new = list(occ)
            for m, n in zip(modes, sub):
                new[m] = n
            lab = BasisLabel(tuple(new), other) if party is Party.A else BasisLabel(other, tuple(new))
            out[lab] = out.get(lab, 0j) + v * c
    part = from_amplitudes(psi.layout, out)
    return part, _weight(part, psi)


def copy_modes(layout: ModeLayout, party: Party | str, copy: int) -> list[int]:
    """Mode indices of ``copy`` (0-based) inside an n-copy layout of ``layout``."""
    n = layout.modes(party)
    return list(range(copy * n, (copy + 1) * n))


def permute_modes(psi: PureState, party: Party | str, perm: Sequence[int]) -> PureState:
    """Relabel one party's modes: new mode i carries old mode ``perm[i]``."""
    party = Party(party)
    out = {}
    for lab, amp in psi.amps.items():
        occ = lab.side(party)
        new = tuple(occ[p] for p in perm)
        out[BasisLabel(new, lab.bob) if party is Party.A else BasisLabel(lab.alice, new)] = amp
    return from_amplitudes(psi.layout, out)
