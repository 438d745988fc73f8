"""Named states used throughout the examples and demos (all normalized)."""

from __future__ import annotations

import math

from .fock import ModeLayout, PureState, make_ket, product_state

R2 = 1 / math.sqrt(2)
ONE_ONE = ModeLayout(1, 1)


def plus(sign: int = 1) -> dict:
    """Single-mode (|0> + sign|1>)/sqrt2."""
    return {(0,): R2, (1,): sign * R2}


def vacuum() -> PureState:
    return make_ket(ONE_ONE, [(1, ((0,), (0,)))])


def v_epr() -> PureState:
    """Two-mode single-photon state (|0>|1> + |1>|0>)/sqrt2."""
    return make_ket(ONE_ONE, [(R2, ((0,), (1,))), (R2, ((1,), (0,)))])


def e_epr() -> PureState:
    """Dual-rail state (|01>|10> + |10>|01>)/sqrt2, one photon per party."""
    return make_ket(ModeLayout(2, 2), [(R2, ((0, 1), (1, 0))), (R2, ((1, 0), (0, 1)))])


def refbit(sign_a: int = 1, sign_b: int = 1) -> PureState:
    """|+>|+> (or |->|-> with signs -1)."""
    return product_state(plus(sign_a), plus(sign_b))


def psi_2d_prime() -> PureState:
    """(|01>_A|0>_B + |10>_A|1>_B)/sqrt2."""
    return make_ket(ModeLayout(2, 1), [(R2, ((0, 1), (0,))), (R2, ((1, 0), (1,)))])


def psi_2d_double_prime() -> PureState:
    """(|01>_A|+>_B + |10>_A|->_B)/sqrt2."""
    h = 0.5
    return make_ket(
        ModeLayout(2, 1),
        [(h, ((0, 1), (0,))), (h, ((0, 1), (1,))), (h, ((1, 0), (0,))), (-h, ((1, 0), (1,)))],
    )


def psi_2d_triple_prime() -> PureState:
    return v_epr()


def psi_3d() -> PureState:
    """(|0>_A|+>_B + |1>_A|->_B)/sqrt2."""
    h = 0.5
    return make_ket(
        ONE_ONE,
        [(h, ((0,), (0,))), (h, ((0,), (1,))), (h, ((1,), (0,))), (-h, ((1,), (1,)))],
    )


NAMED_STATES = {
    "v-epr": v_epr,
    "e-epr": e_epr,
    "refbit++": lambda: refbit(1, 1),
    "refbit--": lambda: refbit(-1, -1),
    "psi2d'": psi_2d_prime,
    "psi2d''": psi_2d_double_prime,
    "psi2d'''": psi_2d_triple_prime,
    "psi3d": psi_3d,
    "vacuum": vacuum,
}
