"""Command-line entry point ``ssr-ent``.

Exit codes: 0 success (including a protocol that reports failure), 2 bad
input (syntax, mode counts, zero state, unsupported rule), 3 internal
consistency failure, 4 domain error (wrong class for the command, copy or
truncation limits).
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .classify import DEFAULT_MAX_COPIES, classify, classify_lifted
from .demos import DEMOS, run_demo
from .errors import ConfigurationError, ConsistencyError, DomainError, EmptyStateError, LayoutError, ParseError
from .expr import parse_expression, parse_state, render
from .fock import is_product, schmidt_coefficients
from .oracle import is_ppt, min_pt_eigenvalue, twirled_one_distillable
from .protocols import DEFAULT_CUTOFF, DEFAULT_MAX_LOSS, build_activator, distill_auto, protocol_A, protocol_B, verify_activation
from .report import ReportDocument, classification_json, outcome_json, state_json
from .ssr import ChargeRule, is_locally_invariant, sector_support, twirl_pure

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY, EXIT_DOMAIN = 0, 2, 3, 4


class _InputError(Exception):
    pass


def _read(text: str, stdin) -> str:
    return stdin.read() if text == "-" else text


def _state(text: str, stdin):
    raw = _read(text, stdin)
    try:
        unnormalized = parse_expression(raw)
        psi = parse_state(raw)
    except (ParseError, EmptyStateError, LayoutError) as exc:
        raise _InputError(str(exc)) from exc
    return raw.strip(), psi, unnormalized.norm


def _rule(text: str) -> ChargeRule:
    try:
        return ChargeRule.parse(text)
    except ConfigurationError as exc:
        raise _InputError(str(exc)) from exc


def _emit(args, doc: ReportDocument, lines: list[str], out) -> None:
    if args.json:
        out.write(doc.to_json())
    else:
        out.write("\n".join(lines) + "\n")


def _input_echo(text: str, psi, norm: float) -> dict:
    return {"text": text, "input_norm": norm, "state": state_json(psi)}


def cmd_classify(args, stdin, out) -> int:
    rule = _rule(args.rule)
    text, psi, norm = _state(args.state, stdin)
    rep = classify(psi, rule, args.max_copies)
    result = classification_json(rep)
    result["lifted_class"] = classify_lifted(psi).value
    result["schmidt_coefficients"] = schmidt_coefficients(psi)
    result["sector_weights"] = [{"sector": list(k), "weight": w} for k, w in sector_support(psi, rule).items()]
    doc = ReportDocument.build("classify", _input_echo(text, psi, norm), str(rule), result)
    lines = [
        f"state: {render(psi)}",
        f"class: {rep.ent_class.value}",
        f"distillation number: {rep.distillation_number if rep.distillation_number is not None else '-'}",
        f"witness: {tuple(rep.witness) if rep.witness else '-'}"
        + (f" on {rep.witness_copies} copies" if rep.witness else ""),
        f"with shared reference frame: {result['lifted_class']}",
    ]
    _emit(args, doc, lines, out)
    return EXIT_OK


def cmd_activate(args, stdin, out) -> int:
    rule = _rule(args.rule)
    text, psi, norm = _state(args.state, stdin)
    if is_product(psi):
        raise DomainError("state is a product state; nothing to activate")
    rep = classify(psi, rule, args.max_copies)
    if rep.distillation_number == 1:
        raise DomainError("state is already 1-distillable; nothing to activate")
    if args.activator is None:
        chi, choice = build_activator(psi, rule)
        ok, outcome = verify_activation(psi, chi, rule, choice)
        chi_text = None
    else:
        chi_text, chi, _ = _state(args.activator, stdin)
        ok, outcome = verify_activation(psi, chi, rule)
    result = {
        "activator": state_json(chi),
        "activator_text": chi_text if chi_text is not None else render(chi),
        "activator_class": classify(chi, rule, args.max_copies).ent_class.value,
        "success": ok,
        "probability": outcome.probability,
        "output": outcome.output,
    }
    doc = ReportDocument.build("activate", _input_echo(text, psi, norm), str(rule), result, [outcome_json(outcome)])
    lines = [
        f"state: {render(psi)}",
        f"activator: {result['activator_text']} ({result['activator_class']})",
        f"activation: {'success' if ok else 'failure'}" + ("" if ok else f" ({outcome.reason})"),
        f"probability: {outcome.probability:.12g}",
    ]
    if outcome.output is not None:
        lines.append(f"output: {_safe_render(outcome.output)}")
    _emit(args, doc, lines, out)
    return EXIT_OK


def _safe_render(psi) -> str:
    try:
        return render(psi)
    except ValueError:
        return repr(psi)


def _cfmt(z: complex) -> str:
    return f"{z.real:.12g}" if abs(z.imag) < 1e-15 else f"{z.real:.12g}{z.imag:+.12g}j"


def cmd_distill(args, stdin, out) -> int:
    rule = _rule(args.rule)
    text, psi, norm = _state(args.state, stdin)
    run = {"A": protocol_A, "B": protocol_B, "auto": distill_auto}[args.protocol]
    outcome = run(psi, rule)
    result = {
        "protocol": args.protocol,
        "success": outcome.success,
        "probability": outcome.probability,
        "reason": outcome.reason,
        "output": outcome.output,
    }
    for key in ("lambda_plus", "lambda_minus"):
        if key in outcome.details:
            result[key] = outcome.details[key]
    doc = ReportDocument.build("distill", _input_echo(text, psi, norm), str(rule), result, [outcome_json(outcome)])
    lines = [
        f"state: {render(psi)}",
        f"protocol {args.protocol}: {'success' if outcome.success else 'failure'}"
        + ("" if outcome.success else f" ({outcome.reason})"),
        f"probability: {outcome.probability:.12g}",
    ]
    if outcome.output is not None:
        lines.append(f"output: {_safe_render(outcome.output)}")
    if "lambda_plus" in outcome.details:
        lp, lm = (complex(outcome.details[k]) for k in ("lambda_plus", "lambda_minus"))
        lines.append(f"lambda+: {_cfmt(lp)}  lambda-: {_cfmt(lm)}")
    _emit(args, doc, lines, out)
    return EXIT_OK


def cmd_twirl(args, stdin, out) -> int:
    rule = _rule(args.rule)
    text, psi, norm = _state(args.state, stdin)
    rho = twirl_pure(psi, rule)
    result = {
        "sector_weights": [{"sector": list(k), "weight": w} for k, w in sector_support(psi, rule).items()],
        "locally_invariant": is_locally_invariant(psi, rule),
        "entries": [
            {"row": str(x), "col": str(y), **{"re": v.real, "im": v.imag}} for (x, y), v in rho.entries.items()
        ],
        "min_partial_transpose_eigenvalue": min_pt_eigenvalue(rho),
        "ppt": is_ppt(rho),
        "twirled_one_distillable": twirled_one_distillable(rho, rule),
    }
    doc = ReportDocument.build("twirl", _input_echo(text, psi, norm), str(rule), result)
    lines = [f"state: {render(psi)}"]
    lines += [f"sector {tuple(s['sector'])}: weight {s['weight']:.12g}" for s in result["sector_weights"]]
    lines.append(f"min eigenvalue of partial transpose: {result['min_partial_transpose_eigenvalue']:.12g}")
    lines.append(f"twirled state 1-distillable: {result['twirled_one_distillable']}")
    _emit(args, doc, lines, out)
    return EXIT_OK


def cmd_demo(args, stdin, out) -> int:
    rule = _rule(args.rule)
    demo = run_demo(
        args.name,
        rule=rule,
        cutoff=args.cutoff,
        alpha=args.alpha,
        gamma=args.gamma,
        max_loss=None if args.max_loss < 0 else args.max_loss,
        seed=args.seed,
    )
    result = dict(demo.result)
    if demo.sampled is not None:
        result["sampled"] = demo.sampled
    transcripts = [outcome_json(demo.outcome)] if demo.outcome is not None else []
    doc = ReportDocument.build("demo", {"name": demo.name, **demo.params}, str(rule), result, transcripts)
    lines = [f"demo: {demo.name}"] + [f"  {t}" for t in demo.narrative]
    if demo.sampled is not None:
        lines.append(f"  sampled outcome (seed {demo.sampled['seed']}): sector {tuple(demo.sampled['sector'])}")
    _emit(args, doc, lines, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ssr-ent", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--rule", default="number", help="'number' (U(1), default) or 'mod:d'")
        sp.add_argument("--json", action="store_true", help="emit an ssr-ent/1 JSON report")
        sp.add_argument("--max-copies", type=int, default=DEFAULT_MAX_COPIES)

    sp = sub.add_parser("classify", help="entanglement class and distillation number")
    sp.add_argument("state", help="state expression, or '-' for stdin")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("activate", help="activate a bound state with a product state")
    sp.add_argument("state")
    sp.add_argument("activator", nargs="?", default=None)
    common(sp)
    sp.set_defaults(func=cmd_activate)

    sp = sub.add_parser("distill", help="run a multi-copy distillation protocol")
    sp.add_argument("state")
    sp.add_argument("--protocol", choices=("A", "B", "auto"), default="auto")
    common(sp)
    sp.set_defaults(func=cmd_distill)

    sp = sub.add_parser("twirl", help="twirled density operator and separability checks")
    sp.add_argument("state")
    common(sp)
    sp.set_defaults(func=cmd_twirl)

    sp = sub.add_parser("demo", help="quantum-optics scenarios")
    sp.add_argument("name", choices=DEMOS)
    sp.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="Fock cutoff (n <= cutoff)")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--gamma", type=float, default=0.5)
    sp.add_argument("--max-loss", type=float, default=DEFAULT_MAX_LOSS, help="negative disables the bound")
    sp.add_argument("--seed", type=int, default=None, help="sample one measurement outcome for the narrative")
    common(sp)
    sp.set_defaults(func=cmd_demo)
    return p


def _fail(args, code: int, kind: str, message: str, out, err) -> int:
    err.write(f"error: {message}\n")
    if getattr(args, "json", False):
        doc = ReportDocument.build(args.command, {}, getattr(args, "rule", "number"), {"error": {"kind": kind, "message": message}})
        out.write(doc.to_json())
    return code


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, stdin, out)
    except _InputError as exc:
        return _fail(args, EXIT_INPUT, "input", str(exc), out, err)
    except ConsistencyError as exc:
        return _fail(args, EXIT_CONSISTENCY, "consistency", str(exc), out, err)
    except DomainError as exc:
        return _fail(args, EXIT_DOMAIN, "domain", str(exc), out, err)


if __name__ == "__main__":
    sys.exit(main())
