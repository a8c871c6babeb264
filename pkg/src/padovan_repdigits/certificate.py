"""Run the full pipeline and record every intermediate quantity as JSON-ready data."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .balls import RealBall, bits_to_digits, digits_to_bits, escalate
from .bounds import SEARCH_LIMIT, BoundRecord, Mode, initial_bounds
from .errors import ClosureGapError, PadovanError, PrecisionError
from .reduction import Round1Result, Round2Result, reduction_round1, reduction_round2
from .search import SolutionRecord, brute_force, closure_check

SCHEMA_VERSION = 1
EPS_DIGITS = 20

# lookahead per round: how many extra admissible convergents dp_reduce may try
LOOKAHEAD = {Mode.PAPER: (0, 1), Mode.CERTIFIED: (1, 1)}


def quantity_json(x: RealBall | Fraction | int, sig: int = EPS_DIGITS) -> dict:
    if isinstance(x, RealBall):
        return x.to_json(sig)
    return {"exact": str(Fraction(x))}


def _record_json(r: BoundRecord) -> dict:
    out = {"label": r.label, "computed": quantity_json(r.computed), "used": quantity_json(r.used)}
    if r.published is not None:
        out["published"] = str(r.published)
    return out


def round1_json(r: Round1Result, lookahead: int) -> dict:
    return {
        "M": str(r.M),
        "lookahead": lookahead,
        "per_d1": [{"d1": d1, "convergent_index": o.convergent_index, "q": str(o.q_used),
                    "epsilon": quantity_json(o.epsilon), "l1_bound": o.w_bound,
                    "skipped": list(o.skipped)}
                   for d1, o in sorted(r.outcomes.items())],
        "min_epsilon": quantity_json(r.min_epsilon),
        "l1_bound": r.l1_bound,
    }


def round2_json(r: Round2Result, lookahead: int) -> dict:
    return {
        "M": str(r.M),
        "lookahead": lookahead,
        "l1_max": r.l1_max,
        "instance_count": r.instance_count,
        "min_epsilon": quantity_json(r.min_epsilon),
        "n_bound": r.n_bound,
        "worst_instance": list(r.worst),
        "convergent_usage": {str(k): v for k, v in r.convergent_usage.items()},
        # d1, d2, l1, convergent index, epsilon lower bound, n bound
        "instances": [[d1, d2, l1, o.convergent_index,
                       quantity_json(o.epsilon, 12)["midpoint"], o.w_bound]
                      for (d1, d2, l1), o in r.outcomes.items()],
    }


@dataclass
class ProofCertificate:
    mode: str
    precision_digits: int
    search_cutoff: int
    search: list[dict]
    initial_bounds: Optional[dict] = None
    round1: Optional[dict] = None
    round2: Optional[dict] = None
    closure: bool = False
    failure: Optional[dict] = None
    version: str = __version__
    schema_version: int = SCHEMA_VERSION
    generated_at: Optional[str] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "ProofCertificate":
        data = json.loads(text)
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(**data)

    @property
    def solutions(self) -> list[SolutionRecord]:
        return [SolutionRecord.from_dict(d) for d in self.search]

    def to_text(self) -> str:
        lines = [f"mode: {self.mode}", f"precision: {self.precision_digits} digits",
                 f"search: n <= {self.search_cutoff}, {len(self.search)} solutions"]
        for s in self.search:
            lines.append(f"  P_{s['n']} = {s['value']}  "
                         f"(d1={s['d1']}, d2={s['d2']}, l1={s['l1']}, l2={s['l2']})")
        if self.initial_bounds:
            ib = self.initial_bounds
            lines.append(f"initial bounds: n < {_show(ib['n_max'])}, "
                         f"l1 + l2 < {_show(ib['l_total_max'])}")
            lines.append(f"reduction M: {ib['reduction_m']}")
        if self.round1:
            r1 = self.round1
            lines.append(f"round 1: l1 <= {r1['l1_bound']}, "
                         f"min epsilon {r1['min_epsilon']['midpoint']}")
        if self.round2:
            r2 = self.round2
            lines.append(f"round 2: {r2['instance_count']} instances, n <= {r2['n_bound']}, "
                         f"min epsilon {r2['min_epsilon']['midpoint']}")
        if self.failure:
            lines.append(f"failure: {self.failure['kind']}: {self.failure['message']}")
        lines.append(f"closed: {'yes' if self.closure else 'no'}")
        return "\n".join(lines)


def _show(q: dict) -> str:
    if "exact" in q:
        return f"{float(Fraction(q['exact'])):.6g}"
    return f"{float(q['midpoint']):.6g}"


def _pipeline(mode: Mode, prec: int, threads: int):
    ib = initial_bounds(mode, prec)
    la1, la2 = LOOKAHEAD[mode]
    r1 = reduction_round1(ib.reduction_m, prec, lookahead=la1)
    r2 = reduction_round2(r1.l1_bound, ib.reduction_m, prec, lookahead=la2, threads=threads)
    return ib, r1, r2, prec


def build_certificate(mode: Mode | str = Mode.CERTIFIED, precision_digits: int = 300,
                      threads: int = 1, n_search: int = SEARCH_LIMIT,
                      timestamp: bool = True) -> ProofCertificate:
    """search -> initial bounds -> two reduction rounds -> closure.

    Failures are recorded in ``failure`` with closure left False; nothing is
    raised for pipeline failures so the certificate always comes back.
    """
    mode = Mode(mode)
    solutions = brute_force(n_search, threads=threads)
    cert = ProofCertificate(mode.value, precision_digits, n_search,
                            [s.as_dict() for s in solutions])
    if timestamp:
        cert.generated_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    try:
        ib, r1, r2, used = escalate(lambda p: _pipeline(mode, p, threads),
                                    digits_to_bits(precision_digits))
        cert.precision_digits = max(precision_digits, bits_to_digits(used))
        cert.initial_bounds = {
            "n_max": quantity_json(ib.n_max),
            "l_total_max": quantity_json(ib.l_total_max),
            "reduction_m": str(ib.reduction_m),
            "trail": [_record_json(r) for r in ib.trail],
        }
        la1, la2 = LOOKAHEAD[mode]
        cert.round1 = round1_json(r1, la1)
        cert.round2 = round2_json(r2, la2)
        closure_check(r2.n_bound, n_search, solutions)
        cert.closure = True
    except PrecisionError as exc:
        cert.failure = {"kind": "precision", "message": str(exc)}
    except ClosureGapError as exc:
        cert.failure = {"kind": "closure-gap", "message": str(exc)}
    except PadovanError as exc:
        cert.failure = {"kind": type(exc).__name__, "message": str(exc)}
    return cert


def exit_code(cert: ProofCertificate) -> int:
    if cert.closure:
        return 0
    if cert.failure and cert.failure["kind"] == "precision":
        return 3
    return 2

