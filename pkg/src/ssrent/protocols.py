"""Constructive activation and distillation under an Abelian SSR.

Every protocol is simulated on the actual multi-copy Fock state with local
projections; outcome probabilities are enumerated, never sampled. Copies use
the party-wise layout of :func:`ssrent.fock.tensor`, so in an n-copy state
copy k of Alice occupies modes ``copy_modes(layout, "A", k)``.

Local 2x2 subspaces are drawn from pairs of Fock labels in the state's
support. When both labels on one side carry the same charge, any rotation
inside their span is still a basis of charge eigenstates; Protocol B uses
that freedom when the label basis gives a vanishing symmetric amplitude.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .classify import is_one_distillable
from .errors import ConsistencyError, CutoffTooSmallError, DomainError
from .fock import (
    RANK_TOL,
    LocalKet,
    ModeLayout,
    Occupation,
    Party,
    PureState,
    basis_ket,
    copy_modes,
    from_amplitudes,
    inner,
    is_product,
    local_tensor,
    product_state,
    project,
    project_local,
    tensor,
    tensor_power,
)
from .ssr import TOTAL_NUMBER, ChargeRule, SectorKey, is_locally_invariant, local_charge, occupation_charge, sector_blocks, sector_project

DEFAULT_CUTOFF = 10
DEFAULT_MAX_LOSS = 1e-6
PROB_TOL = 1e-9


@dataclass(frozen=True)
class SubspaceChoice:
    """Orthonormal charge eigenstates spanning a local 2-dimensional subspace of one copy."""

    party: Party
    ket1: dict
    ket2: dict

    def charges(self, rule: ChargeRule = TOTAL_NUMBER) -> tuple[int, int]:
        return _ket_charge(self.ket1, rule), _ket_charge(self.ket2, rule)

    def kets(self) -> tuple[dict, dict]:
        return self.ket1, self.ket2

    def is_label_basis(self) -> bool:
        return len(self.ket1) == 1 and len(self.ket2) == 1


@dataclass(frozen=True)
class ProtocolStep:
    name: str
    probability: float
    sector: SectorKey | None = None
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ProtocolOutcome:
    success: bool
    probability: float
    output: PureState | None
    transcript: tuple[ProtocolStep, ...] = ()
    reason: str | None = None
    choice: tuple[SubspaceChoice, SubspaceChoice] | None = None
    details: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LemmaSubspace:
    """Label pairs on each side whose 2x2 compression of the state has rank two."""

    alice: tuple[Occupation, Occupation]
    bob: tuple[Occupation, Occupation]
    coeffs: np.ndarray

    def choice(self) -> tuple[SubspaceChoice, SubspaceChoice]:
        return (
            SubspaceChoice(Party.A, basis_ket(self.alice[0]), basis_ket(self.alice[1])),
            SubspaceChoice(Party.B, basis_ket(self.bob[0]), basis_ket(self.bob[1])),
        )


def _ket_charge(ket: LocalKet, rule: ChargeRule) -> int:
    charges = {occupation_charge(occ, rule) for occ in ket}
    if len(charges) != 1:
        raise DomainError(f"local ket {ket} is not a charge eigenstate")
    return charges.pop()


def _finish(steps: list[ProtocolStep]) -> float:
    return float(math.prod(s.probability for s in steps))


def lemma_subspaces(psi: PureState, tol: float = RANK_TOL) -> Iterator[LemmaSubspace]:
    """Label-pair subspaces, in lexicographic order, on which the state stays non-product."""
    alices = sorted({k.alice for k in psi.amps})
    bobs = sorted({k.bob for k in psi.amps})
    for a_pair in itertools.combinations(alices, 2):
        for b_pair in itertools.combinations(bobs, 2):
            c = np.array([[psi.amplitude((a, b)) for b in b_pair] for a in a_pair])
            s = np.linalg.svd(c, compute_uv=False)
            if s[0] > 0 and s[1] > tol * s[0]:
                yield LemmaSubspace(a_pair, b_pair, c)


def _project_copy(state: PureState, layout: ModeLayout, copy: int, choice: tuple[SubspaceChoice, SubspaceChoice]):
    a, b = choice
    state, pa = project_local(state, Party.A, copy_modes(layout, Party.A, copy), a.kets())
    state, pb = project_local(state, Party.B, copy_modes(layout, Party.B, copy), b.kets())
    return state, pa * pb


def _pair_kets(choice: SubspaceChoice) -> list[dict]:
    """Basis of the invariant subspace span{|k1>|k2>, |k2>|k1>} across two copies."""
    return [local_tensor(choice.ket1, choice.ket2), local_tensor(choice.ket2, choice.ket1)]


def _good_output(out: PureState, rule: ChargeRule) -> bool:
    return not out.is_zero and not is_product(out) and is_locally_invariant(out, rule)


# --- activation ---------------------------------------------------------


def build_activator(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> tuple[PureState, tuple[SubspaceChoice, SubspaceChoice]]:
    """Product state (|n>+|n'>)(|m>+|m'>) built on the first rank-two label subspace of psi."""
    if psi.is_zero or is_product(psi):
        raise DomainError("activation needs a non-product state")
    if is_one_distillable(psi, rule)[0]:
        raise DomainError("state is already 1-distillable; nothing to activate")
    sub = next(lemma_subspaces(psi), None)
    if sub is None:
        raise ConsistencyError("non-product state without a rank-two label subspace")
    r = 1 / math.sqrt(2)
    chi = product_state(
        {sub.alice[0]: r, sub.alice[1]: r},
        {sub.bob[0]: r, sub.bob[1]: r},
    )
    return chi, sub.choice()


def verify_activation(
    psi: PureState,
    chi: PureState,
    rule: ChargeRule = TOTAL_NUMBER,
    choice: tuple[SubspaceChoice, SubspaceChoice] | None = None,
) -> tuple[bool, ProtocolOutcome]:
    """Measure local charge on psi (x) chi and post-select an entangled invariant outcome.

    With ``choice`` the target is the construction's sector (n+n', m+m')
    followed by projection onto span{|n>|n'>, |n'>|n>} (x) span{|m>|m'>, |m'>|m>}.
    Without it, the first sector (lexicographic) whose block is non-product
    is kept.
    """
    joint = tensor(psi.normalize(), chi.normalize())
    steps: list[ProtocolStep] = []
    if choice is not None:
        if chi.layout != psi.layout:
            raise DomainError("activator layout must match the state's layout for a subspace choice")
        a, b = choice
        na, na2 = a.charges(rule)
        mb, mb2 = b.charges(rule)
        key = SectorKey(rule.reduce(na + na2), rule.reduce(mb + mb2))
        out, p = sector_project(joint, key, rule)
        steps.append(ProtocolStep("qnd-postselect", p, key))
        if not out.is_zero:
            out, pa = project_local(out, Party.A, range(joint.layout.alice_modes), _pair_kets(a))
            out, pb = project_local(out, Party.B, range(joint.layout.bob_modes), _pair_kets(b))
            steps.append(ProtocolStep("subspace-projection", pa * pb, key))
    else:
        out = None
        for key, block in sector_blocks(joint, rule).items():
            if not is_product(block):
                out = block
                steps.append(ProtocolStep("qnd-postselect", block.norm_sq, key))
                break
        if out is None:
            steps.append(ProtocolStep("qnd-postselect", 0.0, None, {"note": "no entangled sector"}))
            return False, ProtocolOutcome(False, 0.0, None, tuple(steps), "no sector of psi (x) chi is entangled")
    prob = _finish(steps)
    if out.is_zero:
        return False, ProtocolOutcome(False, prob, None, tuple(steps), "post-selected projection is empty", choice)
    out = out.normalize()
    ok = _good_output(out, rule)
    reason = None if ok else "post-selected state is product or not locally invariant"
    return ok, ProtocolOutcome(ok, prob, out, tuple(steps), reason, choice)


# --- distillation protocol A (three copies) -----------------------------


def _nonzero(v: complex, scale: float) -> bool:
    return abs(v) > RANK_TOL * scale


def protocol_a_candidates(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> Iterator[tuple[LemmaSubspace, int, int]]:
    """Subspaces meeting Protocol A's condition, with the first good row and column.

    A row of the 2x2 compression is a Bob residual <n|psi>; it fails to be
    locally invariant when both its entries are nonzero and Bob's labels
    differ in charge. Columns likewise on Alice's side.
    """
    for sub in lemma_subspaces(psi):
        n1, n2 = (occupation_charge(o, rule) for o in sub.alice)
        m1, m2 = (occupation_charge(o, rule) for o in sub.bob)
        if n1 == n2 or m1 == m2:
            continue
        c = sub.coeffs
        scale = float(np.abs(c).max())
        rows = [i for i in range(2) if _nonzero(c[i, 0], scale) and _nonzero(c[i, 1], scale)]
        cols = [j for j in range(2) if _nonzero(c[0, j], scale) and _nonzero(c[1, j], scale)]
        if rows and cols:
            yield sub, rows[0], cols[0]


def protocol_A(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> ProtocolOutcome:
    if psi.is_zero or is_product(psi):
        raise DomainError("distillation needs a non-product state")
    psi = psi.normalize()
    found = next(protocol_a_candidates(psi, rule), None)
    if found is None:
        return ProtocolOutcome(False, 0.0, None, (), "condition unsatisfiable")
    sub, i, j = found
    choice = sub.choice()
    a, b = choice
    c = sub.coeffs
    layout = psi.layout
    steps: list[ProtocolStep] = []

    state = tensor_power(psi, 3)
    p0 = 1.0
    for k in range(3):
        state, p = _project_copy(state, layout, k, choice)
        p0 *= p
    steps.append(ProtocolStep("project-copies", p0, None, {"copies": 3}))

    state, p1 = project_local(state, Party.A, copy_modes(layout, Party.A, 0), [a.kets()[i]])
    steps.append(ProtocolStep("alice-measures-copy1", p1, None, {"outcome": i}))
    state, p2 = project_local(state, Party.B, copy_modes(layout, Party.B, 1), [b.kets()[j]])
    steps.append(ProtocolStep("bob-measures-copy2", p2, None, {"outcome": j}))

    # copies 1 and 2 now leave Alice's copy-2 modes in column j and Bob's
    # copy-1 modes in row i of the compression: a product, non-invariant state
    chi = product_state(
        {sub.alice[0]: c[0, j], sub.alice[1]: c[1, j]},
        {sub.bob[0]: c[i, 0], sub.bob[1]: c[i, 1]},
    ).normalize()
    if is_locally_invariant(chi, rule):
        raise ConsistencyError("Protocol A produced a locally invariant activator")

    a_modes = copy_modes(layout, Party.A, 2) + copy_modes(layout, Party.A, 1)
    b_modes = copy_modes(layout, Party.B, 2) + copy_modes(layout, Party.B, 0)
    state, pa = project_local(state, Party.A, a_modes, _pair_kets(a))
    state, pb = project_local(state, Party.B, b_modes, _pair_kets(b))
    p3 = pa * pb
    steps.append(ProtocolStep("activate-copy3", p3, None))

    psi3, _ = project(psi, lambda lab: lab.alice in sub.alice and lab.bob in sub.bob)
    ok_act, act = verify_activation(psi3, chi, rule, choice)
    if abs(act.probability - p3) > PROB_TOL or not ok_act:
        raise ConsistencyError(
            f"activation of copy 3 disagrees with the 3-copy simulation ({act.probability} vs {p3})"
        )

    prob = _finish(steps)
    details = {"activator": chi, "row": i, "column": j}
    if state.is_zero:
        return ProtocolOutcome(False, prob, None, tuple(steps), "activation projection is empty", choice, details)
    out = state.normalize()
    ok = _good_output(out, rule)
    return ProtocolOutcome(ok, prob, out, tuple(steps), None if ok else "output not entangled", choice, details)


# --- distillation protocol B (two copies) -------------------------------


def _lambdas_from_coeffs(c: np.ndarray) -> tuple[complex, complex]:
    """Unnormalized (lambda+, lambda-) for unnormalized |S+-> = |n n'> +- |n' n>."""
    x = c[0, 0] * c[1, 1]
    y = c[0, 1] * c[1, 0]
    return (x + y) / 2, (x - y) / 2


def _rotated(keys: Sequence[Occupation], q: np.ndarray) -> tuple[dict, dict]:
    return tuple({keys[i]: complex(q[i, k]) for i in range(2) if abs(q[i, k]) > 0} for k in range(2))


def protocol_b_choices(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> Iterator[tuple[tuple[SubspaceChoice, SubspaceChoice], np.ndarray]]:
    """Every Lemma subspace in label order, each in its best available eigenbasis.

    The label basis is kept unless it makes lambda+ vanish and one side's
    labels share a charge, in which case that side is rotated so the
    compression becomes triangular (lambda+ = lambda- = det/2 then).
    """
    for sub in lemma_subspaces(psi):
        c = sub.coeffs
        lp, lm = _lambdas_from_coeffs(c)
        if abs(lp) > RANK_TOL * abs(lm):
            yield sub.choice(), c
            continue
        a_free = occupation_charge(sub.alice[0], rule) == occupation_charge(sub.alice[1], rule)
        b_free = occupation_charge(sub.bob[0], rule) == occupation_charge(sub.bob[1], rule)
        if a_free:
            q, _ = np.linalg.qr(c)
            ka = _rotated(sub.alice, q)
            yield (SubspaceChoice(Party.A, *ka), SubspaceChoice(Party.B, basis_ket(sub.bob[0]), basis_ket(sub.bob[1]))), q.conj().T @ c
        elif b_free:
            q, _ = np.linalg.qr(c.T)
            kb = _rotated(sub.bob, q)
            yield (SubspaceChoice(Party.A, basis_ket(sub.alice[0]), basis_ket(sub.alice[1])), SubspaceChoice(Party.B, *kb)), c @ q.conj()
        else:
            yield sub.choice(), c


def _s_states(layout2: ModeLayout, choice: tuple[SubspaceChoice, SubspaceChoice]) -> tuple[PureState, PureState]:
    a, b = choice
    r = 1 / math.sqrt(2)
    out = []
    for sign in (1, -1):
        sa = {}
        for k, v in local_tensor(a.ket1, a.ket2).items():
            sa[k] = sa.get(k, 0) + r * v
        for k, v in local_tensor(a.ket2, a.ket1).items():
            sa[k] = sa.get(k, 0) + sign * r * v
        sb = {}
        for k, v in local_tensor(b.ket1, b.ket2).items():
            sb[k] = sb.get(k, 0) + r * v
        for k, v in local_tensor(b.ket2, b.ket1).items():
            sb[k] = sb.get(k, 0) + sign * r * v
        s = product_state(sa, sb)
        if s.layout != layout2:
            raise ConsistencyError("S-state layout mismatch")
        out.append(s)
    return out[0], out[1]


def protocol_B(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> ProtocolOutcome:
    if psi.is_zero or is_product(psi):
        raise DomainError("distillation needs a non-product state")
    psi = psi.normalize()
    tried = []
    picked = None
    for choice, c in protocol_b_choices(psi, rule):
        lp, lm = _lambdas_from_coeffs(c)
        # lambda- is det/2, bounded below by the rank tolerance of the subspace
        if abs(lm) <= 1e-3 * RANK_TOL * float(np.linalg.norm(c, 2)) ** 2:
            raise ConsistencyError("lambda- vanished on a rank-two subspace")
        tried.append({"lambda_plus": lp, "lambda_minus": lm})
        if abs(lp) > RANK_TOL * abs(lm):
            picked = (choice, c, lp, lm)
            break
    if picked is None:
        return ProtocolOutcome(
            False, 0.0, None, (), "lambda+ vanishes for every admissible choice", None, {"attempts": tried}
        )
    choice, c, lp_raw, lm_raw = picked
    a, b = choice
    layout = psi.layout
    steps: list[ProtocolStep] = []

    state = tensor(psi, psi)
    p0 = 1.0
    for k in range(2):
        state, p = _project_copy(state, layout, k, choice)
        p0 *= p
    steps.append(ProtocolStep("project-copies", p0, None, {"copies": 2}))

    n1, n2 = a.charges(rule)
    m1, m2 = b.charges(rule)
    key = SectorKey(rule.reduce(n1 + n2), rule.reduce(m1 + m2))
    state, pa = project_local(state, Party.A, range(state.layout.alice_modes), _pair_kets(a))
    state, pb = project_local(state, Party.B, range(state.layout.bob_modes), _pair_kets(b))
    steps.append(ProtocolStep("pair-subspace-projection", pa * pb, key))
    prob = _finish(steps)
    if state.is_zero:
        raise ConsistencyError("Protocol B projection empty despite nonzero lambda")
    out = state.normalize()

    s_plus, s_minus = _s_states(out.layout, choice)
    lam_p = inner(s_plus, out)
    lam_m = inner(s_minus, out)
    if abs(lam_m) <= RANK_TOL:
        raise ConsistencyError("lambda- vanished in the simulated output")
    if abs(abs(lam_p) ** 2 + abs(lam_m) ** 2 - 1) > 1e-9:
        raise ConsistencyError("output leaks outside span{|S+S+>, |S-S->}")
    ok = abs(lam_p) > RANK_TOL and _good_output(out, rule)
    details = {
        "lambda_plus": lam_p,
        "lambda_minus": lam_m,
        "lambda_plus_unnormalized": lp_raw,
        "lambda_minus_unnormalized": lm_raw,
        "attempts": tried,
    }
    return ProtocolOutcome(ok, prob, out, tuple(steps), None if ok else "output not entangled", choice, details)


def distill_auto(psi: PureState, rule: ChargeRule = TOTAL_NUMBER) -> ProtocolOutcome:
    """Protocol A first, then Protocol B."""
    out = protocol_A(psi, rule)
    return out if out.success else protocol_B(psi, rule)


# --- measurement and optical states -------------------------------------


def qnd_measure(psi: PureState, party: Party | str, rule: ChargeRule = TOTAL_NUMBER) -> list[tuple[int, float, PureState]]:
    """All outcomes of a nondemolition measurement of one party's local charge."""
    party = Party(party)
    psi = psi.normalize()
    charges = sorted({local_charge(lab, party, rule) for lab in psi.amps})
    out = []
    for q in charges:
        part, p = project(psi, lambda lab, q=q: local_charge(lab, party, rule) == q)
        out.append((q, p, part.normalize()))
    return out


@dataclass(frozen=True)
class Truncated:
    """A Fock-truncated state plus the weight (1 - kept) lost before renormalization."""

    state: object
    loss: float


def _truncate(amps: dict, cutoff: int, max_loss: float | None) -> tuple[dict, float]:
    kept = math.fsum(abs(v) ** 2 for v in amps.values())
    loss = max(0.0, 1.0 - kept)
    if max_loss is not None and loss > max_loss:
        raise CutoffTooSmallError(f"cutoff {cutoff} discards weight {loss:.3e} > {max_loss:.1e}", loss)
    norm = math.sqrt(kept)
    return {k: v / norm for k, v in amps.items()}, loss


def make_coherent(
    amplitude: complex, cutoff: int = DEFAULT_CUTOFF, max_loss: float | None = DEFAULT_MAX_LOSS
) -> Truncated:
    """Single-mode |alpha> truncated to n <= cutoff; ``state`` is a local ket {(n,): amp}."""
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    alpha = complex(amplitude)
    pre = math.exp(-abs(alpha) ** 2 / 2)
    amps = {}
    for n in range(cutoff + 1):
        v = pre * alpha**n / math.sqrt(math.factorial(n))
        if abs(v) > 0:
            amps[(n,)] = v
    ket, loss = _truncate(amps, cutoff, max_loss)
    return Truncated(ket, loss)


def coherent_pair(
    amplitude: complex, cutoff: int = DEFAULT_CUTOFF, max_loss: float | None = DEFAULT_MAX_LOSS
) -> Truncated:
    """|alpha>_A |alpha>_B; the reported loss is that of the two-mode product."""
    single = make_coherent(amplitude, cutoff, None)
    loss = 1.0 - (1.0 - single.loss) ** 2
    if max_loss is not None and loss > max_loss:
        raise CutoffTooSmallError(f"cutoff {cutoff} discards weight {loss:.3e} > {max_loss:.1e}", loss)
    return Truncated(product_state(single.state, single.state), loss)


def make_two_mode_squeezed(
    gamma: float, cutoff: int = DEFAULT_CUTOFF, max_loss: float | None = DEFAULT_MAX_LOSS
) -> Truncated:
    """sqrt(1-g^2) sum_n g^n |n>_A |n>_B truncated to n <= cutoff."""
    if not 0.0 <= gamma < 1.0:
        raise DomainError("squeezing parameter must lie in [0, 1)")
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    pre = math.sqrt(1 - gamma**2)
    amps = {}
    for n in range(cutoff + 1):
        v = pre * gamma**n
        if v > 0:
            amps[((n,), (n,))] = v
    amps, loss = _truncate(amps, cutoff, max_loss)
    return Truncated(from_amplitudes(ModeLayout(1, 1), amps), loss)
