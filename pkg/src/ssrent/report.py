"""Machine-readable reports (schema ``ssr-ent/1``).

Floats are rounded to 12 significant digits and negative zero is folded to
zero before serialization, so identical inputs give byte-identical JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__
from .classify import ClassificationReport
from .fock import PureState
from .protocols import ProtocolOutcome, SubspaceChoice

SCHEMA = "ssr-ent/1"
SIG_DIGITS = 12


def num(x: float) -> float:
    v = float(f"{float(x):.{SIG_DIGITS}g}")
    return 0.0 if v == 0 else v


def cnum(z: complex) -> dict:
    z = complex(z)
    return {"re": num(z.real), "im": num(z.imag)}


def plain(obj: Any) -> Any:
    """Convert numbers and containers to JSON-ready values with fixed precision."""
    if isinstance(obj, (bool, type(None), str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return cnum(obj)
    if isinstance(obj, PureState):
        return state_json(obj)
    if isinstance(obj, SubspaceChoice):
        return choice_json(obj)
    if isinstance(obj, np.ndarray):
        return [plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def state_json(psi: PureState) -> dict:
    return {
        "layout": [psi.layout.alice_modes, psi.layout.bob_modes],
        "terms": [
            {"alice": list(k.alice), "bob": list(k.bob), **cnum(a)} for k, a in sorted(psi.amps.items())
        ],
    }


def _local_ket_json(ket: dict) -> list:
    return [{"occ": list(k), **cnum(v)} for k, v in sorted(ket.items())]


def choice_json(choice: SubspaceChoice) -> dict:
    return {"party": choice.party.value, "ket1": _local_ket_json(choice.ket1), "ket2": _local_ket_json(choice.ket2)}


def classification_json(rep: ClassificationReport) -> dict:
    return {
        "class": rep.ent_class.value,
        "is_product": rep.is_product,
        "is_locally_invariant": rep.is_locally_invariant,
        "distillation_number": rep.distillation_number,
        "witness": None if rep.witness is None else {"copies": rep.witness_copies, "sector": list(rep.witness)},
    }


def outcome_json(out: ProtocolOutcome) -> dict:
    return plain(
        {
            "success": out.success,
            "probability": out.probability,
            "reason": out.reason,
            "choice": list(out.choice) if out.choice else None,
            "output": out.output,
            "transcript": [
                {
                    "step": s.name,
                    "probability": s.probability,
                    "sector": None if s.sector is None else list(s.sector),
                    "detail": s.detail,
                }
                for s in out.transcript
            ],
            "details": out.details,
        }
    )


@dataclass
class ReportDocument:
    command: str
    input: dict
    rule: str
    result: dict
    transcripts: list = field(default_factory=list)
    schema: str = SCHEMA
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "version": self.version,
            "command": self.command,
            "rule": self.rule,
            "input": plain(self.input),
            "result": plain(self.result),
            "transcripts": plain(self.transcripts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unknown report schema {d.get('schema')!r}")
        return cls(
            command=d["command"],
            input=d["input"],
            rule=d["rule"],
            result=d["result"],
            transcripts=d["transcripts"],
            schema=d["schema"],
            version=d["version"],
        )

    @classmethod
    def build(cls, command: str, input: dict, rule: str, result: dict, transcripts: list | None = None) -> "ReportDocument":
        """Construct with every payload already reduced to fixed-precision JSON values."""
        return cls(command, plain(input), rule, plain(result), plain(transcripts or []))
