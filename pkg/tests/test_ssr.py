import math

import numpy as np
import pytest
from hypothesis import given, settings

from ssrent.density import DensityOperator
from ssrent.errors import ConfigurationError
from ssrent.fock import BasisLabel, ModeLayout, fidelity, make_ket
from ssrent.ssr import (
    TOTAL_NUMBER,
    ChargeRule,
    SectorKey,
    is_locally_invariant,
    local_charge,
    sector_project,
    sector_support,
    twirl,
    twirl_pure,
)
from ssrent.states import e_epr, psi_3d, refbit, v_epr, vacuum
from strategies import states

R2 = 1 / math.sqrt(2)


def lab(a, b):
    return BasisLabel(tuple(a), tuple(b))


def test_local_charge_examples():
    x = lab((0, 1), (1, 0))
    assert local_charge(x, "A") == 1
    assert local_charge(x, "B") == 1
    assert local_charge(lab((3,), (0,)), "A", ChargeRule.mod(2)) == 1


def test_rule_parsing():
    assert ChargeRule.parse("number") == TOTAL_NUMBER
    assert ChargeRule.parse("mod:3") == ChargeRule.mod(3)
    assert str(ChargeRule.mod(4)) == "mod:4"
    for bad in ("su2", "mod:1", "mod:x", "mod:"):
        with pytest.raises(ConfigurationError):
            ChargeRule.parse(bad)


def test_sector_project_examples():
    part, w = sector_project(v_epr(), (0, 1))
    assert w == pytest.approx(0.5)
    assert part.amplitude(((0,), (1,))) == pytest.approx(R2)
    part, w = sector_project(v_epr(), (0, 0))
    assert part.is_zero and w == 0.0
    part, w = sector_project(psi_3d(), (1, 1))
    assert dict(part.amps) == {lab((1,), (1,)): pytest.approx(-0.5)}
    assert w == pytest.approx(0.25)


def test_sector_support_examples():
    assert sector_support(v_epr()) == pytest.approx({(0, 1): 0.5, (1, 0): 0.5})
    assert sector_support(e_epr()) == pytest.approx({(1, 1): 1.0})
    assert sector_support(refbit()) == pytest.approx({(0, 0): 0.25, (0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.25})
    assert list(sector_support(refbit())) == sorted(sector_support(refbit()))


def test_local_invariance_examples():
    assert is_locally_invariant(e_epr())
    assert not is_locally_invariant(v_epr())
    assert not is_locally_invariant(refbit())


def test_twirl_examples():
    rho = twirl_pure(v_epr())
    assert dict(rho.entries) == pytest.approx(
        {(lab((0,), (1,)), lab((0,), (1,))): 0.5, (lab((1,), (0,)), lab((1,), (0,))): 0.5}
    )
    pure = DensityOperator.from_pure(e_epr())
    assert twirl_pure(e_epr()).max_abs_diff(pure) < 1e-15
    vac = twirl_pure(vacuum())
    assert dict(vac.entries) == pytest.approx({(lab((0,), (0,)), lab((0,), (0,))): 1.0})


def test_mod_rule_merges_sectors():
    # |0;0> and |2;2> share the Z_2 sector (0,0), so the coherence survives
    psi = make_ket(ModeLayout(1, 1), [(R2, ((0,), (0,))), (R2, ((2,), (2,)))])
    assert not is_locally_invariant(psi)
    assert is_locally_invariant(psi, ChargeRule.mod(2))
    assert sector_support(psi, ChargeRule.mod(2)) == pytest.approx({SectorKey(0, 0): 1.0})


@settings(max_examples=120, deadline=None)
@given(states())
def test_twirl_idempotent_and_trace_preserving(psi):
    rho = twirl_pure(psi)
    assert rho.trace() == pytest.approx(1.0, abs=1e-9)
    assert twirl(rho).max_abs_diff(rho) <= 1e-9
    full = DensityOperator.from_pure(psi)
    assert twirl(full).max_abs_diff(rho) <= 1e-9
    assert sum(sector_support(psi).values()) == pytest.approx(1.0, abs=1e-9)
    rho.validate()


@settings(max_examples=120, deadline=None)
@given(states())
def test_fixed_point_iff_rank_one(psi):
    ev = twirl_pure(psi).eigenvalues()
    rank = int(np.sum(ev > 1e-9))
    assert is_locally_invariant(psi) == (rank == 1)


@settings(max_examples=80, deadline=None)
@given(states(max_occ=2))
def test_mod_consistency_for_small_charges(psi):
    # choose d so every local charge lies in [0, d)
    d = 1 + max(max(sum(k.alice), sum(k.bob)) for k in psi.amps)
    d = max(d, 2)
    assert sector_support(psi) == pytest.approx(sector_support(psi, ChargeRule.mod(d)))
    assert twirl_pure(psi).max_abs_diff(twirl_pure(psi, ChargeRule.mod(d))) == 0.0


def test_sector_project_returns_fidelity_one_block():
    part, _ = sector_project(e_epr(), (1, 1))
    assert fidelity(part, e_epr()) == pytest.approx(1.0)
