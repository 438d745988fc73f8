"""Density-operator verification layer.

This deliberately avoids the pure-state route used by :mod:`ssrent.classify`:
sector blocks are handled as density matrices, entanglement of a pure block
is read off the purity of its reduced state, and every verdict is repeated
with the partial-transpose test on 2x2 compressions.
"""

from __future__ import annotations

import itertools

import numpy as np

from .density import DensityOperator
from .errors import ConsistencyError, DomainError
from .fock import BasisLabel, Party
from .ssr import TOTAL_NUMBER, ChargeRule, SectorKey, sector_of

ORACLE_TOL = 1e-10


def partial_transpose(rho: DensityOperator, party: Party | str = Party.A) -> DensityOperator:
    """Swap the chosen party's row and column sub-labels in every entry."""
    party = Party(party)
    out = {}
    for (x, y), v in rho.entries.items():
        if party is Party.A:
            key = (BasisLabel(y.alice, x.bob), BasisLabel(x.alice, y.bob))
        else:
            key = (BasisLabel(x.alice, y.bob), BasisLabel(y.alice, x.bob))
        out[key] = v
    return DensityOperator.from_entries(rho.layout, out)


def min_pt_eigenvalue(rho: DensityOperator, party: Party | str = Party.A) -> float:
    ev = partial_transpose(rho, party).eigenvalues()
    # labels absent from the support contribute zero eigenvalues
    return float(min(ev.min(), 0.0)) if ev.size else 0.0


def is_ppt(rho: DensityOperator, tol: float = 1e-9) -> bool:
    return min_pt_eigenvalue(rho) >= -tol


def _blocks(rho: DensityOperator, rule: ChargeRule) -> dict[SectorKey, DensityOperator]:
    groups: dict[SectorKey, dict] = {}
    for (x, y), v in rho.entries.items():
        kx, ky = sector_of(x, rule), sector_of(y, rule)
        if kx != ky:
            if abs(v) > ORACLE_TOL:
                raise DomainError(f"operator has coherence between sectors {kx} and {ky}")
            continue
        groups.setdefault(kx, {})[(x, y)] = v
    return {k: DensityOperator.from_entries(rho.layout, groups[k]) for k in sorted(groups)}


def _reduced_alice(block: np.ndarray, labels: list[BasisLabel]) -> np.ndarray:
    alices = sorted({lab.alice for lab in labels})
    ai = {a: i for i, a in enumerate(alices)}
    red = np.zeros((len(alices), len(alices)), dtype=complex)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            if x.bob == y.bob:
                red[ai[x.alice], ai[y.alice]] += block[i, j]
    return red


def _compressions_npt(block: DensityOperator) -> bool:
    """True iff some 2x2 compression onto pairs of Fock labels has a negative partial transpose."""
    labels = block.labels()
    alices = sorted({lab.alice for lab in labels})
    bobs = sorted({lab.bob for lab in labels})
    for a_pair in itertools.combinations(alices, 2):
        for b_pair in itertools.combinations(bobs, 2):
            keep = [BasisLabel(a, b) for a in a_pair for b in b_pair]
            sub = {(x, y): block.entry(x, y) for x in keep for y in keep}
            comp = DensityOperator.from_entries(block.layout, sub)
            tr = comp.trace().real
            if tr <= ORACLE_TOL:
                continue
            if min_pt_eigenvalue(comp) < -ORACLE_TOL * tr:
                return True
    return False


def twirled_one_distillable(rho_blockdiag: DensityOperator, rule: ChargeRule = TOTAL_NUMBER) -> bool:
    """Decide 1-distillability of a sector-block-diagonal state (such as a twirled pure state).

    Each sector block is normalized; a rank-one block is entangled iff its
    reduced state is mixed. Blocks of higher rank are only decided when they
    live on at most 2x3 local labels, where PPT is exact.
    """
    verdict = False
    for key, block in _blocks(rho_blockdiag, rule).items():
        tr = block.trace().real
        if tr <= ORACLE_TOL:
            continue
        labels, mat = block.to_dense()
        mat = mat / tr
        purity = float(np.real(np.trace(mat @ mat)))
        npt = _compressions_npt(block)
        if purity > 1 - ORACLE_TOL:
            red = _reduced_alice(mat, labels)
            entangled = 1 - float(np.real(np.trace(red @ red))) > ORACLE_TOL
            if entangled != npt:
                raise ConsistencyError(
                    f"sector {tuple(key)}: purity test says entangled={entangled}, "
                    f"2x2 PPT compressions say {npt}"
                )
        else:
            dims = sorted((len({l.alice for l in labels}), len({l.bob for l in labels})))
            if dims[0] > 2 or dims[1] > 3:
                raise DomainError(
                    f"sector {tuple(key)} is a mixed block of local size {dims}; undecidable here"
                )
            entangled = not is_ppt(DensityOperator.from_entries(block.layout, {k: v / tr for k, v in block.entries.items()}))
        verdict = verdict or entangled
    return verdict
