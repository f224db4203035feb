"""Outcome records produced by every checker."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any

from .padic import ResidueRing, format_rational, int_valuation, valuation


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


CLAIM_IDS = (
    "THM_MAIN",
    "EQ_1_3",
    "COR_1_3",
    "COR_1_4_A",
    "COR_1_4_B",
    "COR_1_4_C",
    "COR_1_4_D",
    "EQ_1_9",
    "BINOM_IDS",
    "LEM_TAURASO",
    "LEM_MAOPAN",
    "LEM_2_3",
    "CASE2_EXP",
    "CONJ_1_2",
    "GAMMA_SHIFT",
    "GAMMA_REFL",
    "CLAUSEN",
    "CLAUSEN_SPECIAL",
    "ORR",
    "ORR_SPECIAL",
)


@dataclass(frozen=True, order=True)
class Valuation:
    """An achieved p-adic valuation.

    ``bound`` marks a lower bound: the quantity vanished modulo ``p**value``
    and nothing finer is known.  ``value`` is ``inf`` for an exact zero.
    """

    value: int | float
    bound: bool = False

    def __str__(self) -> str:
        if self.value == math.inf:
            return "inf"
        return f">={self.value}" if self.bound else str(self.value)

    def to_json(self) -> int | str:
        if self.value == math.inf or self.bound:
            return str(self)
        return int(self.value)

    @classmethod
    def parse(cls, raw: int | str) -> Valuation:
        if isinstance(raw, int):
            return cls(raw)
        if raw == "inf":
            return cls(math.inf)
        if raw.startswith(">="):
            return cls(int(raw[2:]), bound=True)
        return cls(int(raw))


def difference_valuation(a: int, b: int, ring: ResidueRing) -> Valuation:
    """Valuation of ``a - b`` as seen in Z/p^e."""
    d = (a - b) % ring.modulus
    if d == 0:
        return Valuation(ring.e, bound=True)
    return Valuation(int_valuation(d, ring.p))


def exact_valuation(x: Fraction | int, p: int) -> Valuation:
    return Valuation(valuation(x, p))


def _encode(v: Any) -> Any:
    if isinstance(v, Fraction):
        return format_rational(v)
    return v


@dataclass(frozen=True)
class CongruenceCheck:
    claim_id: str
    p: int | None
    e: int | None
    params: dict[str, Any]
    hypothesis_met: bool
    hypothesis_reason: str
    achieved: Valuation
    required: int | float
    verdict: Verdict
    note: str = ""
    exploratory: bool = False
    elapsed: float = field(default=0.0, compare=False)

    @classmethod
    def modular(
        cls,
        claim_id: str,
        *,
        p: int | None,
        e: int | None,
        params: dict[str, Any],
        achieved: Valuation,
        required: int | float,
        gate: tuple[bool, str] = (True, ""),
        note: str = "",
        exploratory: bool = False,
    ) -> CongruenceCheck:
        met, reason = gate
        if not met:
            verdict = Verdict.SKIPPED
        elif achieved.value >= required:
            verdict = Verdict.PASS
        else:
            verdict = Verdict.FAIL
        return cls(
            claim_id=claim_id,
            p=p,
            e=e,
            params={k: _encode(v) for k, v in params.items()},
            hypothesis_met=met,
            hypothesis_reason=reason,
            achieved=achieved,
            required=required,
            verdict=verdict,
            note=note,
            exploratory=exploratory,
        )

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    @property
    def hypothesis_status(self) -> str:
        return "met" if self.hypothesis_met else f"unmet: {self.hypothesis_reason}"

    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))

    def sort_key(self) -> tuple:
        return (self.claim_id, self.p if self.p is not None else -1, self.e or 0, self.params_text())

    def to_record(self) -> dict[str, Any]:
        required = self.required
        if isinstance(required, float) and math.isinf(required):
            required = "exact"
        return {
            "claim_id": self.claim_id,
            "inputs": {"p": self.p, "e": self.e, "params": dict(self.params)},
            "hypothesis_status": self.hypothesis_status,
            "achieved_valuation": self.achieved.to_json(),
            "required_valuation": required,
            "verdict": self.verdict.value,
            "note": self.note,
            "exploratory": self.exploratory,
            "elapsed": round(self.elapsed, 6),
        }

    @classmethod
    def from_record(cls, rec: dict[str, Any]) -> CongruenceCheck:
        status = rec["hypothesis_status"]
        met = status == "met"
        required = rec["required_valuation"]
        if required == "exact":
            required = math.inf
        return cls(
            claim_id=rec["claim_id"],
            p=rec["inputs"]["p"],
            e=rec["inputs"]["e"],
            params=dict(rec["inputs"]["params"]),
            hypothesis_met=met,
            hypothesis_reason="" if met else status.removeprefix("unmet: "),
            achieved=Valuation.parse(rec["achieved_valuation"]),
            required=required,
            verdict=Verdict(rec["verdict"]),
            note=rec.get("note", ""),
            exploratory=rec.get("exploratory", False),
            elapsed=rec.get("elapsed", 0.0),
        )

    def describe(self) -> str:
        where = f"p={self.p}" + (f", e={self.e}" if self.e else "") if self.p is not None else ""
        params = ", ".join(f"{k}={v}" for k, v in self.params.items())
        head = f"{self.claim_id}[{', '.join(s for s in (where, params) if s)}]"
        measure = "v_p" if self.p is not None else "order"
        tail = f"achieved {measure} {self.achieved}, required {self.required if not math.isinf(self.required) else 'exact'}"
        if not self.hypothesis_met:
            tail = f"hypothesis unmet ({self.hypothesis_reason}); {tail}"
        if self.note:
            tail += f"; {self.note}"
        return f"{self.verdict.value.upper()}: {head}: {tail}"
