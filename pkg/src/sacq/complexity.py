"""Query, time, sample and qubit complexity of the five SAC algorithms.

Time complexity is the pair (oracle calls, non-oracle gates) for one
iteration.  Counting convention for the audit: every GateOp in a built
circuit counts once, including the X and H that prepare the target in |->;
measurements are not gates.  Sample formulas use natural logarithms.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

from sacq import circuits
from sacq.boolfn import BooleanFunction
from sacq.estimators import sample_formula


@dataclass(frozen=True)
class ComplexityRow:
    algorithm: str
    query_symbolic: str
    query: int  # oracle calls for a full n-direction run
    per_iteration_symbolic: str
    per_iteration: tuple[int, int]
    sample_symbolic: str
    sample_variant: str
    sample: float  # unrounded formula value at (t, delta, n)
    qubits_symbolic: str
    qubits: Optional[int]
    simulated: bool

    @property
    def sample_ceil(self) -> int:
        return math.ceil(self.sample)


@dataclass(frozen=True)
class _RowSpec:
    name: str
    query_sym: str
    query: Callable[[int], int]
    cost_sym: str
    cost: Callable[[int], tuple[int, int]]
    sample_sym: str
    variant: str
    qubits_sym: str
    qubits: Callable[[int], Optional[int]]
    simulated: bool


_ROWS = (
    _RowSpec("Classical", "2n", lambda n: 2 * n, "(2, 0) per sample", lambda n: (2, 0),
             "(2^n/t^2) ln(2/delta)", "CLASSICAL", "-", lambda n: None, False),
    _RowSpec("QSAC", "n", lambda n: n, "(1, 2n+4)", lambda n: (1, 2 * n + 4),
             "(1/(2t^2)) ln(2/delta)", "QSAC", "n+1", lambda n: n + 1, True),
    _RowSpec("Direct", "2n", lambda n: 2 * n, "(2, 2n+4)", lambda n: (2, 2 * n + 4),
             "((2^n-1)/(2t^2)) ln(2/delta)", "NQUBIT", "n+1", lambda n: n + 1, True),
    _RowSpec("Forrelation", "5n", lambda n: 5 * n, "(5, 4n+6)", lambda n: (5, 4 * n + 6),
             "((2^n-1)/(2t^2)) ln(2/delta)", "NQUBIT", "n+1", lambda n: n + 1, True),
    _RowSpec("Autocorrelation", "2n", lambda n: 2 * n, "(2, 5n+6)", lambda n: (2, 5 * n + 6),
             "(1/(2t^2)) ln(2/delta)", "QSAC", "2n+3", lambda n: 2 * n + 3, False),
)


def table1(n: int, t: float = 0.05, delta: float = 0.05) -> list[ComplexityRow]:
    if n < 2:
        raise ValueError("table1 needs n >= 2")
    return [
        ComplexityRow(r.name, r.query_sym, r.query(n), r.cost_sym, r.cost(n), r.sample_sym,
                      r.variant, sample_formula(r.variant, t, delta, n), r.qubits_sym,
                      r.qubits(n), r.simulated)
        for r in _ROWS
    ]


_COLUMNS = ("algorithm", "query", "query_value", "time_per_iteration", "sample_formula",
            "samples", "qubits", "qubits_value", "simulated")


def _flat(row: ComplexityRow) -> dict:
    return {
        "algorithm": row.algorithm,
        "query": row.query_symbolic,
        "query_value": row.query,
        "time_per_iteration": row.per_iteration_symbolic,
        "sample_formula": row.sample_symbolic,
        "samples": row.sample_ceil,
        "qubits": row.qubits_symbolic,
        "qubits_value": "-" if row.qubits is None else row.qubits,
        "simulated": "yes" if row.simulated else "no",
    }


def render_table(rows: list[ComplexityRow], fmt: str = "text", n: int | None = None,
                 t: float | None = None, delta: float | None = None) -> str:
    flat = [_flat(r) for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(flat)
        return buf.getvalue()
    if fmt == "json":
        return json.dumps({"n": n, "t": t, "delta": delta, "rows": flat}, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    headers = ("Algorithm", "Query", "Time/iter", "Sample formula", "Samples", "Qubits",
               "Simulated")
    body = [(r["algorithm"], f"{r['query']} = {r['query_value']}", r["time_per_iteration"],
             r["sample_formula"], str(r["samples"]),
             r["qubits"] if r["qubits"] == "-" else f"{r['qubits']} = {r['qubits_value']}",
             r["simulated"]) for r in flat]
    widths = [max(len(h), *(len(b[k]) for b in body)) for k, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
             "  ".join("-" * w for w in widths)]
    lines += ["  ".join(c.ljust(w) for c, w in zip(b, widths)).rstrip() for b in body]
    if n is not None:
        lines.append(f"(n={n}, t={t}, delta={delta}; natural log; Autocorrelation row is "
                     "analytic only, not simulated)")
    return "\n".join(lines) + "\n"


@dataclass
class AuditEntry:
    algorithm: str
    expected: tuple[int, int]
    observed: tuple[int, int]
    gates: dict[str, int]

    @property
    def match(self) -> bool:
        return self.expected == self.observed


def audit_against_simulation(f: BooleanFunction, i: int = 1) -> list[AuditEntry]:
    """Count oracle calls and gates in the built circuits and compare with table1."""
    if f.n > 12:
        raise ValueError("audit limited to n <= 12")
    expected = {r.algorithm: r.per_iteration for r in table1(max(f.n, 2))}
    out = []
    for name, alg in (("QSAC", circuits.QSAC), ("Direct", circuits.DIRECT),
                      ("Forrelation", circuits.FORRELATION)):
        c = circuits.BUILDERS[alg](f, i)
        out.append(AuditEntry(name, expected[name], (c.oracle_calls(), c.gate_count()),
                              c.gate_histogram()))
    return out
