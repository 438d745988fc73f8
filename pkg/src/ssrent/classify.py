"""Entanglement classes of pure bipartite states under an Abelian SSR.

A single copy is 1-distillable exactly when one of its charge-sector blocks
is a non-product state: a locally invariant 2x2 subspace must sit inside one
sector pair (n, m), and a sector block of Schmidt rank >= 2 always contains a
2x2 compression of rank 2. n-distillability is the same test on the
party-wise n-fold tensor power. Every non-product state is distillable with
at most three copies, so a scan that gets past three signals a bug.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConsistencyError, DomainError, EmptyStateError, ResourceLimitError
from .fock import RANK_TOL, BasisLabel, PureState, is_product, tensor_power
from .ssr import TOTAL_NUMBER, ChargeRule, SectorKey, is_locally_invariant, occupation_charge, sector_blocks

DEFAULT_MAX_COPIES = 4
THEOREM_MAX_COPIES = 3


class EntClass(str, Enum):
    LP = "LP"
    BLP = "BLP"
    ONE_DISTILLABLE = "OneDistillable"
    BOUND_ONE_D = "BoundOneD"


@dataclass(frozen=True)
class ClassificationReport:
    is_product: bool
    is_locally_invariant: bool
    ent_class: EntClass
    distillation_number: int | None = None
    witness: SectorKey | None = None
    witness_copies: int | None = None

    def __post_init__(self):
        c = self.ent_class
        ok = (
            (c is EntClass.LP) == (self.is_product and self.is_locally_invariant)
            and (c is EntClass.BLP) == (self.is_product and not self.is_locally_invariant)
            and (c is EntClass.ONE_DISTILLABLE) == (self.distillation_number == 1)
            and (c is EntClass.BOUND_ONE_D)
            == (not self.is_product and self.distillation_number is not None and self.distillation_number >= 2)
            and (self.distillation_number is None) == self.is_product
        )
        if not ok:
            raise ConsistencyError(f"inconsistent classification report: {self}")


def _require_state(psi: PureState) -> None:
    if psi.is_zero:
        raise EmptyStateError("cannot classify the zero state")


def is_one_distillable(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> tuple[bool, SectorKey | None]:
    """Return (verdict, first non-product sector in lexicographic order)."""
    _require_state(psi)
    for key, block in sector_blocks(psi, rule).items():
        if not is_product(block):
            return True, key
    return False, None


def invariant_subspace_witness(
    psi: PureState, rule: ChargeRule = TOTAL_NUMBER, tol: float = RANK_TOL
) -> tuple[tuple[BasisLabel, BasisLabel], tuple[tuple, tuple]] | None:
    """Search pairs of equal-charge Fock labels on each side for a rank-2 2x2 compression.

    Returns ``((a1, a2), (b1, b2))`` as occupation tuples, or None. Independent
    of the sector-block SVD and used to cross-check it.
    """
    _require_state(psi)
    alices = sorted({k.alice for k in psi.amps})
    bobs = sorted({k.bob for k in psi.amps})
    scale = max(abs(a) for a in psi.amps.values()) ** 2
    for a1, a2 in itertools.combinations(alices, 2):
        if occupation_charge(a1, rule) != occupation_charge(a2, rule):
            continue
        for b1, b2 in itertools.combinations(bobs, 2):
            if occupation_charge(b1, rule) != occupation_charge(b2, rule):
                continue
            c = np.array(
                [[psi.amplitude((a, b)) for b in (b1, b2)] for a in (a1, a2)]
            )
            if abs(np.linalg.det(c)) > tol * scale:
                return (a1, a2), (b1, b2)
    return None


def is_n_distillable(
    psi: PureState,
    n: int,
    rule: ChargeRule = TOTAL_NUMBER,
    max_copies: int = DEFAULT_MAX_COPIES,
) -> tuple[bool, SectorKey | None]:
    if n < 1:
        raise ValueError("copy count must be >= 1")
    if n > max_copies:
        raise ResourceLimitError(f"{n} copies requested, limit is {max_copies}")
    _require_state(psi)
    return is_one_distillable(tensor_power(psi, n), rule)


def _scan(psi: PureState, rule: ChargeRule, max_copies: int) -> tuple[int, SectorKey]:
    for n in range(1, max_copies + 1):
        ok, key = is_n_distillable(psi, n, rule, max_copies)
        if ok:
            if n > THEOREM_MAX_COPIES:
                raise ConsistencyError(f"state first distills with {n} copies; at most 3 should suffice")
            return n, key
    if max_copies < THEOREM_MAX_COPIES:
        raise ResourceLimitError(f"no distilling sector within {max_copies} copies; raise the copy limit")
    raise ConsistencyError(f"non-product state not distillable with {max_copies} copies")


def distillation_number(
    psi: PureState, rule: ChargeRule = TOTAL_NUMBER, max_copies: int = DEFAULT_MAX_COPIES
) -> int:
    _require_state(psi)
    if is_product(psi):
        raise DomainError("product states have no distillation number")
    return _scan(psi, rule, max_copies)[0]


def classify(
    psi: PureState, rule: ChargeRule = TOTAL_NUMBER, max_copies: int = DEFAULT_MAX_COPIES
) -> ClassificationReport:
    _require_state(psi)
    prod = is_product(psi)
    inv = is_locally_invariant(psi, rule)
    if prod:
        return ClassificationReport(prod, inv, EntClass.LP if inv else EntClass.BLP)
    n, key = _scan(psi, rule, max_copies)
    cls = EntClass.ONE_DISTILLABLE if n == 1 else EntClass.BOUND_ONE_D
    return ClassificationReport(prod, inv, cls, n, key, n)


def classify_lifted(psi: PureState) -> EntClass:
    """Class once a shared reference frame lifts the rule: plain LOCC, so productness decides."""
    _require_state(psi)
    return EntClass.LP if is_product(psi) else EntClass.ONE_DISTILLABLE
