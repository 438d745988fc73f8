"""Quantum-optics scenarios: activation by refbits and coherent states,
two-copy distillation of the single-photon state, and the refbit gap."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .classify import classify, classify_lifted
from .fock import PureState, fidelity, schmidt_coefficients, tensor
from .protocols import (
    DEFAULT_CUTOFF,
    DEFAULT_MAX_LOSS,
    ProtocolOutcome,
    coherent_pair,
    make_coherent,
    make_two_mode_squeezed,
    protocol_B,
    verify_activation,
)
from .ssr import TOTAL_NUMBER, ChargeRule, sector_support
from .states import e_epr, refbit, v_epr

DEMOS = ("veper-activation", "veper-2copy", "coherent-activation", "squeezed-activation", "refbit-gap")


@dataclass
class DemoResult:
    name: str
    narrative: list[str]
    result: dict
    outcome: ProtocolOutcome | None = None
    sampled: dict | None = None
    params: dict = field(default_factory=dict)


def _sample(joint: PureState, rule: ChargeRule, seed: int) -> dict:
    """Draw one joint charge outcome; narrative only, never used by the verdicts."""
    weights = sector_support(joint, rule)
    keys = list(weights)
    rng = np.random.default_rng(seed)
    k = keys[rng.choice(len(keys), p=np.array([weights[x] for x in keys]) / sum(weights.values()))]
    return {"seed": seed, "sector": list(k), "probability": weights[k]}


def _activation_result(ok: bool, out: ProtocolOutcome, target: PureState | None) -> dict:
    res = {"success": ok, "probability": out.probability}
    if out.output is not None:
        res["output_schmidt"] = schmidt_coefficients(out.output)
        if target is not None and out.output.layout == target.layout:
            res["fidelity_to_e_epr"] = fidelity(out.output, target)
    return res


def run_demo(
    name: str,
    *,
    rule: ChargeRule = TOTAL_NUMBER,
    cutoff: int = DEFAULT_CUTOFF,
    alpha: float = 1.0,
    gamma: float = 0.5,
    max_loss: float | None = DEFAULT_MAX_LOSS,
    seed: int | None = None,
) -> DemoResult:
    if name not in DEMOS:
        raise ValueError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")

    if name == "veper-activation":
        psi, chi = v_epr(), refbit()
        ok, out = verify_activation(psi, chi, rule)
        res = _activation_result(ok, out, e_epr())
        text = [
            "single-photon state (|0>|1> + |1>|0>)/sqrt2 with refbit |+>|+>",
            f"both parties measure local photon number; kept sector {list(out.transcript[0].sector or [])}",
            f"probability {out.probability:.6g}; output fidelity with dual-rail EPR {res.get('fidelity_to_e_epr', 0):.12f}",
        ]
        sampled = _sample(tensor(psi, chi), rule, seed) if seed is not None else None
        return DemoResult(name, text, res, out, sampled)

    if name == "veper-2copy":
        psi = v_epr()
        out = protocol_B(psi, rule)
        res = {
            "success": out.success,
            "probability": out.probability,
            "fidelity_to_e_epr": fidelity(out.output, e_epr()) if out.output is not None else 0.0,
            "lambda_plus": out.details.get("lambda_plus"),
            "lambda_minus": out.details.get("lambda_minus"),
        }
        text = [
            "two copies of (|0>|1> + |1>|0>)/sqrt2; post-select one photon per party",
            f"probability {out.probability:.6g}; fidelity with dual-rail EPR {res['fidelity_to_e_epr']:.12f}",
        ]
        sampled = _sample(tensor(psi, psi), rule, seed) if seed is not None else None
        return DemoResult(name, text, res, out, sampled)

    if name == "coherent-activation":
        single = make_coherent(alpha, cutoff, None)
        pair = coherent_pair(alpha, cutoff, max_loss)
        psi = v_epr()
        ok, out = verify_activation(psi, pair.state, rule)
        res = _activation_result(ok, out, e_epr())
        res["truncation_loss"] = pair.loss
        res["truncation_loss_per_mode"] = single.loss
        # the kept sector only uses n <= 1, so renormalization is the sole
        # source of error in the reported probability
        res["probability_truncation_error"] = out.probability * pair.loss
        text = [
            f"single-photon state with coherent local oscillators |a>|a>, a={alpha}, cutoff n<={cutoff}",
            f"truncation loss {pair.loss:.3e} (per mode {single.loss:.3e})",
            f"probability {out.probability:.6g}; fidelity with dual-rail EPR {res.get('fidelity_to_e_epr', 0):.12f}",
        ]
        sampled = _sample(tensor(psi, pair.state), rule, seed) if seed is not None else None
        return DemoResult(name, text, res, out, sampled, {"alpha": alpha, "cutoff": cutoff})

    if name == "squeezed-activation":
        sq = make_two_mode_squeezed(gamma, cutoff, max_loss)
        pair = coherent_pair(alpha, cutoff, max_loss)
        ok, out = verify_activation(sq.state, pair.state, rule)
        res = _activation_result(ok, out, None)
        res["truncation_loss"] = 1 - (1 - sq.loss) * (1 - pair.loss)
        res["squeezed_class"] = classify(sq.state, rule).ent_class.value
        text = [
            f"two-mode squeezed state g={gamma} with coherent pair a={alpha}, cutoff n<={cutoff}",
            f"squeezed state alone: {res['squeezed_class']}",
            f"activation {'succeeds' if ok else 'fails'} with probability {out.probability:.6g}",
        ]
        sampled = _sample(tensor(sq.state, pair.state), rule, seed) if seed is not None else None
        return DemoResult(name, text, res, out, sampled, {"alpha": alpha, "gamma": gamma, "cutoff": cutoff})

    rows = {}
    for label, st in (("|+>|+>", refbit(1, 1)), ("|->|->", refbit(-1, -1)), ("v-epr", v_epr())):
        rows[label] = {"restricted": classify(st, rule).ent_class.value, "lifted": classify_lifted(st).value}
    text = [f"{k}: {v['restricted']} under the rule, {v['lifted']} with a shared reference" for k, v in rows.items()]
    return DemoResult(name, text, rows)
