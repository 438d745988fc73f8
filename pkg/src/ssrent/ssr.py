"""Abelian superselection rules: local charges, charge sectors and twirls.

Only Abelian groups are supported. For those every irrep is one-dimensional,
so the group average over local phases reduces to a sum of sector projectors
and is evaluated exactly rather than by integrating over the group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .density import DensityOperator
from .errors import ConfigurationError, EmptyStateError
from .fock import BasisLabel, Party, PureState, from_amplitudes, project


@dataclass(frozen=True)
class ChargeRule:
    """``modulus=None`` is the U(1) total-number rule; an integer d >= 2 gives Z_d."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and (not isinstance(self.modulus, int) or self.modulus < 2):
            raise ConfigurationError(f"modulus must be an integer >= 2, got {self.modulus!r}")

    @classmethod
    def number(cls) -> "ChargeRule":
        return cls(None)

    @classmethod
    def mod(cls, d: int) -> "ChargeRule":
        return cls(d)

    @classmethod
    def parse(cls, text: str) -> "ChargeRule":
        """Parse ``number`` or ``mod:d``. Anything else (e.g. ``su2``) is rejected."""
        t = text.strip().lower()
        if t in ("number", "u1", "u(1)"):
            return cls.number()
        if t.startswith("mod:"):
            try:
                return cls.mod(int(t[4:]))
            except ValueError:
                raise ConfigurationError(f"bad modulus in rule {text!r}") from None
        raise ConfigurationError(
            f"unsupported rule {text!r}: only Abelian rules 'number' and 'mod:d' are available"
        )

    def reduce(self, total: int) -> int:
        return total if self.modulus is None else total % self.modulus

    def __str__(self) -> str:
        return "number" if self.modulus is None else f"mod:{self.modulus}"


TOTAL_NUMBER = ChargeRule.number()


class SectorKey(NamedTuple):
    alice: int
    bob: int


def local_charge(lab: BasisLabel, party: Party | str, rule: ChargeRule = TOTAL_NUMBER) -> int:
    return rule.reduce(sum(lab.side(party)))


def occupation_charge(occ: tuple[int, ...], rule: ChargeRule = TOTAL_NUMBER) -> int:
    return rule.reduce(sum(occ))


def sector_of(lab: BasisLabel, rule: ChargeRule = TOTAL_NUMBER) -> SectorKey:
    return SectorKey(local_charge(lab, Party.A, rule), local_charge(lab, Party.B, rule))


def sector_project(psi: PureState, key: SectorKey, rule: ChargeRule = TOTAL_NUMBER) -> tuple[PureState, float]:
    key = SectorKey(*key)
    return project(psi, lambda lab: sector_of(lab, rule) == key)


def sector_blocks(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> dict[SectorKey, PureState]:
    """Unnormalized sector components keyed in lexicographic order."""
    groups: dict[SectorKey, dict[BasisLabel, complex]] = {}
    for lab, amp in psi.amps.items():
        groups.setdefault(sector_of(lab, rule), {})[lab] = amp
    return {k: from_amplitudes(psi.layout, groups[k]) for k in sorted(groups)}


def sector_support(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> dict[SectorKey, float]:
    total = psi.norm_sq
    if total == 0.0:
        raise EmptyStateError("sector weights of the zero state")
    return {k: block.norm_sq / total for k, block in sector_blocks(psi, rule).items()}


def is_locally_invariant(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> bool:
    return len(sector_support(psi, rule)) == 1


def twirl_pure(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> DensityOperator:
    """Apply both local twirls to |psi><psi|: the coherences between sectors vanish."""
    entries = {}
    for block in sector_blocks(psi, rule).values():
        entries.update(DensityOperator.from_pure(block).entries)
    return DensityOperator.from_entries(psi.layout, entries)


def twirl(rho: DensityOperator, rule: ChargeRule = TOTAL_NUMBER) -> DensityOperator:
    """Local twirl of an arbitrary operator: keep entries whose row and column share a sector."""
    return DensityOperator.from_entries(
        rho.layout,
        {(x, y): v for (x, y), v in rho.entries.items() if sector_of(x, rule) == sector_of(y, rule)},
    )
