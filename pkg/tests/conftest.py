import itertools

import numpy as np
import pytest

from ssrent.fock import BasisLabel, ModeLayout, from_amplitudes, is_product, product_state
from ssrent.states import NAMED_STATES


def _occupations(modes: int, max_occ: int) -> list[tuple[int, ...]]:
    return list(itertools.product(range(max_occ + 1), repeat=modes))


def random_state(rng, *, max_modes=2, max_occ=2, max_support=8, complex_amps=True, min_support=2, signs=False):
    """Random sparse state on <= max_modes per party with occupations <= max_occ.

    ``signs`` draws amplitudes from {+1, -1}, which produces exact
    cancellations (the 3-copy regime) far more often than Gaussian draws.
    """
    layout = ModeLayout(int(rng.integers(1, max_modes + 1)), int(rng.integers(1, max_modes + 1)))
    alice = _occupations(layout.alice_modes, max_occ)
    bob = _occupations(layout.bob_modes, max_occ)
    labels = [BasisLabel(a, b) for a in alice for b in bob]
    k = int(rng.integers(min_support, min(max_support, len(labels)) + 1))
    picked = rng.choice(len(labels), size=k, replace=False)
    amps = {}
    for i in picked:
        v = rng.choice((-1.0, 1.0)) if signs else rng.normal()
        if complex_amps and not signs:
            v = v + 1j * rng.normal()
        amps[labels[i]] = complex(v)
    return from_amplitudes(layout, amps).normalize()


def random_nonproduct(rng, **kw):
    while True:
        psi = random_state(rng, **kw)
        if not is_product(psi):
            return psi


def random_b1d(rng, *, max_modes=2, max_occ=2, max_sectors=4):
    """Non-product state whose every charge-sector block is a product (class B1-D).

    Each sector block is (Alice ket of fixed charge) x (Bob ket of fixed charge)
    with random complex coefficients, so blocks can have several labels.
    """
    while True:
        layout = ModeLayout(int(rng.integers(1, max_modes + 1)), int(rng.integers(1, max_modes + 1)))
        by_charge_a: dict[int, list] = {}
        by_charge_b: dict[int, list] = {}
        for occ in _occupations(layout.alice_modes, max_occ):
            by_charge_a.setdefault(sum(occ), []).append(occ)
        for occ in _occupations(layout.bob_modes, max_occ):
            by_charge_b.setdefault(sum(occ), []).append(occ)
        sectors = [(n, m) for n in by_charge_a for m in by_charge_b]
        k = int(rng.integers(2, min(max_sectors, len(sectors)) + 1))
        picked = [sectors[i] for i in rng.choice(len(sectors), size=k, replace=False)]
        amps = {}
        for n, m in picked:
            ka = _local_random(rng, by_charge_a[n])
            kb = _local_random(rng, by_charge_b[m])
            for lab, v in product_state(ka, kb).amps.items():
                amps[lab] = v
        psi = from_amplitudes(layout, amps)
        if not psi.is_zero and not is_product(psi):
            return psi.normalize()


def _local_random(rng, occs):
    size = int(rng.integers(1, min(2, len(occs)) + 1))
    picked = rng.choice(len(occs), size=size, replace=False)
    return {occs[i]: complex(rng.normal(), rng.normal()) for i in picked}


def regression_states():
    return {name: make() for name, make in NAMED_STATES.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



def mixed_nonproduct(rng, i: int):
    """Cycle through Gaussian, sign-valued and single-mode sign-valued draws."""
    if i % 3 == 0:
        return random_nonproduct(rng)
    if i % 3 == 1:
        return random_nonproduct(rng, signs=True, max_support=4)
    return random_nonproduct(rng, signs=True, max_modes=1, max_support=4)
