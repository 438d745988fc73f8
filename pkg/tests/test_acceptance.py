"""Acceptance gate: one check per criterion, each printing a PASS/FAIL line.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` for
the summary alone.
"""

import io
import json
import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from conftest import mixed_nonproduct, random_b1d, random_nonproduct, random_state, regression_states  # noqa: E402
from corpus import ROUND_TRIP  # noqa: E402

from ssrent import cli  # noqa: E402
from ssrent.classify import EntClass, classify, is_n_distillable, is_one_distillable  # noqa: E402
from ssrent.demos import run_demo  # noqa: E402
from ssrent.density import DensityOperator  # noqa: E402
from ssrent.errors import ConsistencyError  # noqa: E402
from ssrent.expr import parse_expression, render  # noqa: E402
from ssrent.fock import ModeLayout, fidelity, make_ket  # noqa: E402
from ssrent.oracle import is_ppt, min_pt_eigenvalue, twirled_one_distillable  # noqa: E402
from ssrent.protocols import build_activator, protocol_A, protocol_B, verify_activation  # noqa: E402
from ssrent.ssr import sector_support, twirl, twirl_pure  # noqa: E402
from ssrent.states import (  # noqa: E402
    e_epr,
    psi_2d_double_prime,
    psi_2d_prime,
    psi_2d_triple_prime,
    psi_3d,
    refbit,
    v_epr,
)

TOL = 1e-9
SEED = 20240611


def _rng(offset: int):
    return np.random.default_rng(SEED + offset)


def criterion_1():
    fails = []
    rep = classify(v_epr())
    if rep.ent_class is not EntClass.BOUND_ONE_D or rep.distillation_number != 2:
        fails.append("V-EPR")
    if classify(e_epr()).ent_class is not EntClass.ONE_DISTILLABLE:
        fails.append("E-EPR")
    for s in (1, -1):
        if classify(refbit(s, s)).ent_class is not EntClass.BLP:
            fails.append(f"refbit {s:+d}")
    if classify(make_ket(ModeLayout(1, 1), [(1, ((0,), (1,)))])).ent_class is not EntClass.LP:
        fails.append("|0;1>")
    for name, st in (("psi2d'", psi_2d_prime()), ("psi2d''", psi_2d_double_prime()), ("psi2d'''", psi_2d_triple_prime())):
        r = classify(st)
        if r.distillation_number != 2 or r.is_locally_invariant:
            fails.append(name)
    r = classify(psi_3d())
    if r.distillation_number != 3 or is_n_distillable(psi_3d(), 2)[0]:
        fails.append("psi3d")
    return not fails, "all reference states classified" if not fails else f"mismatch: {fails}"


def criterion_2():
    ok, out = verify_activation(v_epr(), refbit())
    f = fidelity(out.output, e_epr()) if out.output is not None else 0.0
    good = ok and f >= 1 - TOL and abs(out.probability - 0.25) <= TOL
    return good, f"success={ok} fidelity={f:.12f} probability={out.probability:.12f}"


def criterion_3():
    out = protocol_B(v_epr())
    f = fidelity(out.output, e_epr()) if out.output is not None else 0.0
    lp, lm = abs(out.details["lambda_plus"]), abs(out.details["lambda_minus"])
    r = 1 / math.sqrt(2)
    good = out.success and f >= 1 - TOL and abs(out.probability - 0.5) <= TOL and abs(lp - r) <= TOL and abs(lm - r) <= TOL
    return good, f"fidelity={f:.12f} probability={out.probability:.12f} |l+|={lp:.12f} |l-|={lm:.12f}"


def criterion_4():
    rng = _rng(4)
    numbers, errors, violations = [], 0, 0
    for i in range(200):
        psi = mixed_nonproduct(rng, i)
        try:
            n = classify(psi).distillation_number
            numbers.append(n)
            if not protocol_A(psi).success and not protocol_B(psi).success:
                violations += 1
        except ConsistencyError:
            errors += 1
    counts = {k: numbers.count(k) for k in (1, 2, 3)}
    good = len(numbers) == 200 and set(numbers) <= {1, 2, 3} and errors == 0 and violations == 0
    return good, f"200 states, numbers {counts}, consistency errors {errors}, A-fails-and-B-fails {violations}"


def criterion_5():
    rng = _rng(5)
    bad_chi = bad_act = bad_lambda = 0
    for _ in range(100):
        psi = random_b1d(rng)
        chi, choice = build_activator(psi)
        if classify(chi).ent_class is not EntClass.BLP:
            bad_chi += 1
        if not verify_activation(psi, chi, choice=choice)[0]:
            bad_act += 1
        out = protocol_B(psi)
        lams = [abs(t["lambda_minus"]) for t in out.details["attempts"]]
        if "lambda_minus" in out.details:
            lams.append(abs(out.details["lambda_minus"]))
        if not lams or min(lams) <= 1e-9:
            bad_lambda += 1
    good = bad_chi == bad_act == bad_lambda == 0
    return good, f"100 B1-D states: chi not BLP {bad_chi}, activation failed {bad_act}, |l-| <= 1e-9 {bad_lambda}"


def criterion_6():
    disagreements = 0
    states = list(regression_states().values())
    rng = _rng(6)
    states += [random_b1d(rng) if i % 3 == 0 else random_nonproduct(rng) for i in range(120)]
    for psi in states:
        if twirled_one_distillable(twirl_pure(psi)) != is_one_distillable(psi)[0]:
            disagreements += 1
    return disagreements == 0, f"{len(states)} states, {disagreements} disagreements"


def criterion_7():
    ev = min_pt_eigenvalue(DensityOperator.from_pure(e_epr()))
    e_ppt = is_ppt(DensityOperator.from_pure(e_epr()))
    v_ppt = is_ppt(twirl_pure(v_epr()))
    good = not e_ppt and abs(ev + 0.5) <= TOL and v_ppt
    return good, f"E-EPR ppt={e_ppt} min eigenvalue={ev:.12f}; twirled V-EPR ppt={v_ppt}"


def criterion_8():
    rng = _rng(8)
    worst = 0.0
    for _ in range(120):
        psi = random_state(rng, min_support=1)
        rho = twirl_pure(psi)
        worst = max(
            worst,
            twirl(rho).max_abs_diff(rho),
            abs(rho.trace() - 1),
            abs(sum(sector_support(psi).values()) - 1),
        )
    return worst <= TOL, f"120 states, worst deviation {worst:.2e}"


def criterion_9():
    demo = run_demo("coherent-activation", alpha=1.0, cutoff=8, max_loss=None)
    res = demo.result
    f = res.get("fidelity_to_e_epr", 0.0)
    loss = res["truncation_loss"]
    good = res["success"] and f >= 1 - TOL and loss < 1e-6
    return good, (
        f"success={res['success']} fidelity={f:.12f} truncation loss={loss:.3e} "
        f"(per mode {res['truncation_loss_per_mode']:.3e}; bound 1e-6)"
    )


def _cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return cli.main(list(argv), stdin=io.StringIO(""), stdout=out, stderr=err), out.getvalue()


def criterion_10():
    rt_fail = []
    for text in ROUND_TRIP:
        a = parse_expression(text)
        b = parse_expression(render(a))
        keys = set(a.amps) | set(b.amps)
        if a.layout != b.layout or any(abs(a.amplitude(k) - b.amplitude(k)) > 1e-12 for k in keys):
            rt_fail.append(text)
    v = "1/sqrt2 |0;1> + 1/sqrt2 |1;0>"
    runs = {_cli("classify", v, "--json")[1] for _ in range(3)}
    runs2 = {_cli("distill", v, "--json")[1] for _ in range(3)}
    stable = len(runs) == 1 and len(runs2) == 1 and json.loads(runs.pop())["schema"] == "ssr-ent/1"

    codes = {
        _cli("classify", v)[0],
        _cli("classify", "|0;0")[0],
        _cli("activate", "|0,1;1,0> + |1,0;0,1>")[0],
    }
    original = cli.classify

    def broken(*a, **k):
        raise ConsistencyError("forced")

    cli.classify = broken
    try:
        codes.add(_cli("classify", v)[0])
    finally:
        cli.classify = original
    good = not rt_fail and len(ROUND_TRIP) >= 30 and stable and codes == {0, 2, 3, 4}
    return good, f"round trip {len(ROUND_TRIP) - len(rt_fail)}/{len(ROUND_TRIP)}, byte-stable={stable}, exit codes {sorted(codes)}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def _report(i: int, ok: bool, detail: str) -> str:
    return f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("index", range(1, len(CRITERIA) + 1))
def test_criterion(index, capsys):
    ok, detail = CRITERIA[index - 1]()
    line = _report(index, ok, detail)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [(i, *c()) for i, c in enumerate(CRITERIA, start=1)]
    for i, ok, detail in results:
        print(_report(i, ok, detail))
    sys.exit(0 if all(ok for _, ok, _ in results) else 1)
