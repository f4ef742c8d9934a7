"""The three simulable SAC circuits: QSAC, direct (Deutsch-Jozsa) and 3-fold Forrelation.

Each builder returns a :class:`Circuit`, a flat list of gates and oracle
calls over n input qubits (1..n) and one target qubit (n+1).  Evaluating a
circuit runs it on the state-vector simulator; the same op list is what
:mod:`sacq.complexity` counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from sacq import qsim
from sacq.boolfn import BooleanFunction, SizeLimitError
from sacq.qsim import CZ, GateOp, H, X

QSAC = "QSAC"
DIRECT = "DIRECT"
FORRELATION = "FORRELATION"
ALGORITHMS = (QSAC, DIRECT, FORRELATION)

MAX_CIRCUIT_N = 14


@dataclass(frozen=True)
class OracleCall:
    """A black-box query. ``phase`` oracles act on ``inputs`` only."""

    f: BooleanFunction
    inputs: tuple[int, ...]
    target: Optional[int] = None
    label: str = "U_F"

    @property
    def phase(self) -> bool:
        return self.target is None


Op = Union[GateOp, OracleCall]


@dataclass
class Circuit:
    algorithm: str
    n: int
    i: int
    ops: list[Op]
    measured: tuple[int, ...]

    @property
    def num_qubits(self) -> int:
        return self.n + 1

    @property
    def target(self) -> int:
        return self.n + 1

    def oracle_calls(self) -> int:
        return sum(isinstance(op, OracleCall) for op in self.ops)

    def gate_count(self) -> int:
        return sum(isinstance(op, GateOp) for op in self.ops)

    def gate_histogram(self) -> dict[str, int]:
        hist: dict[str, int] = {}
        for op in self.ops:
            if isinstance(op, GateOp):
                hist[op.kind] = hist.get(op.kind, 0) + 1
        return hist

    def run(self) -> qsim.QState:
        state = qsim.zero_state(self.num_qubits)
        for op in self.ops:
            if isinstance(op, GateOp):
                qsim.apply_gate(state, op)
            elif op.phase:
                qsim.apply_phase_oracle(state, op.f, op.inputs)
            else:
                qsim.apply_bit_oracle(state, op.f, op.inputs, op.target)
        state.check_norm()
        return state


@dataclass
class CircuitResult:
    algorithm: str
    i: int
    exact: np.ndarray  # distribution over the measured register
    zero_amplitude: Optional[float] = None  # <0_n|<-| amplitude for DIRECT/FORRELATION
    counts: Optional[np.ndarray] = None
    shots: Optional[int] = None
    seed: Optional[int] = None
    circuit: Optional[Circuit] = field(default=None, repr=False)

    def __post_init__(self):
        if abs(float(self.exact.sum()) - 1.0) > 1e-10:
            raise qsim.NormDriftError("measured distribution does not sum to 1")

    @property
    def p_zero(self) -> float:
        return float(self.exact[0])

    def sampled(self, shots: int, seed: int, *stream_keys: int) -> "CircuitResult":
        counts = qsim.sample_distribution(self.exact, shots, qsim.rng_stream(seed, *stream_keys))
        return CircuitResult(self.algorithm, self.i, self.exact, self.zero_amplitude,
                             counts, shots, seed, self.circuit)


def _check(f: BooleanFunction, i: int) -> None:
    if not 1 <= i <= f.n:
        raise ValueError(f"coordinate {i} outside [1, {f.n}]")
    if f.n > MAX_CIRCUIT_N:
        raise SizeLimitError(f"circuit simulation limited to n <= {MAX_CIRCUIT_N}")


def _inputs(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def _hadamards(n: int) -> list[GateOp]:
    return [H(k) for k in range(1, n + 1)]


def _prepare_minus(target: int) -> list[GateOp]:
    return [X(target), H(target)]


def _derivative_oracle(f: BooleanFunction, i: int) -> list[Op]:
    """U_g for g = Delta_{e_i} F: two U_F calls around a pair of X gates on qubit i."""
    t = f.n + 1
    call = OracleCall(f, _inputs(f.n), t)
    return [call, X(i), call, X(i)]


def build_qsac(f: BooleanFunction, i: int) -> Circuit:
    _check(f, i)
    n, t = f.n, f.n + 1
    ops: list[Op] = _prepare_minus(t) + _hadamards(n)
    ops.append(OracleCall(f, _inputs(n), t))
    ops += _hadamards(n)
    ops += [CZ(i, t), H(t)]
    return Circuit(QSAC, n, i, ops, (t,))


def build_direct(f: BooleanFunction, i: int) -> Circuit:
    _check(f, i)
    n, t = f.n, f.n + 1
    ops: list[Op] = _prepare_minus(t) + _hadamards(n)
    ops += _derivative_oracle(f, i)
    ops += _hadamards(n)
    return Circuit(DIRECT, n, i, ops, _inputs(n))


def nor_function(n: int) -> BooleanFunction:
    """H(x) = 1 exactly at x = 0_n."""
    table = np.zeros(1 << n, dtype=np.uint8)
    table[0] = 1
    return BooleanFunction(n, table)


def build_forrelation(f: BooleanFunction, i: int) -> Circuit:
    """Circuit whose |0_n> amplitude is Phi_{g,h,g}, g = Delta_{e_i} F, h = NOR."""
    _check(f, i)
    n, t = f.n, f.n + 1
    ops: list[Op] = _prepare_minus(t) + _hadamards(n)
    ops += _derivative_oracle(f, i)
    ops += _hadamards(n)
    ops.append(OracleCall(nor_function(n), _inputs(n), None, label="U_h"))
    ops += _hadamards(n)
    ops += _derivative_oracle(f, i)
    ops += _hadamards(n)
    return Circuit(FORRELATION, n, i, ops, _inputs(n))


BUILDERS = {QSAC: build_qsac, DIRECT: build_direct, FORRELATION: build_forrelation}


def _zero_amplitude(state: qsim.QState) -> float:
    """Amplitude of |0_n>|-> ; the target stays in |-> for DIRECT/FORRELATION."""
    amp = (state.amps[0] - state.amps[1]) * np.sqrt(0.5)
    return float(amp.real)


def evaluate(circuit: Circuit) -> CircuitResult:
    state = circuit.run()
    exact = qsim.probabilities(state, circuit.measured)
    amp = None if circuit.algorithm == QSAC else _zero_amplitude(state)
    return CircuitResult(circuit.algorithm, circuit.i, exact, amp, circuit=circuit)


def qsac_iteration(f: BooleanFunction, i: int) -> CircuitResult:
    """Target-qubit distribution; entry 0 is sum_{w_i=1} f^(w)^2."""
    return evaluate(build_qsac(f, i))


def direct_iteration(f: BooleanFunction, i: int) -> CircuitResult:
    """Input-register distribution; Pr[0_n] is (autocorrelation at e_i / 2^n)^2."""
    return evaluate(build_direct(f, i))


def forrelation_iteration(f: BooleanFunction, i: int) -> CircuitResult:
    return evaluate(build_forrelation(f, i))


def run_iteration(algorithm: str, f: BooleanFunction, i: int) -> CircuitResult:
    try:
        builder = BUILDERS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    return evaluate(builder(f, i))


def forrelation_bruteforce(f1: BooleanFunction, f2: BooleanFunction,
                           f3: BooleanFunction) -> float:
    """2^{-2n} sum over x1, x2, x3 of f1(x1)(-1)^{x1.x2} f2(x2)(-1)^{x2.x3} f3(x3)."""
    n = f1.n
    if f2.n != n or f3.n != n:
        raise ValueError("all three functions need the same n")
    if n > 6:
        raise SizeLimitError("brute-force Forrelation limited to n <= 6")
    x = np.arange(1 << n)
    dots = np.vectorize(lambda v: bin(v).count("1") & 1)(x[:, None] & x[None, :])
    signs = 1 - 2 * dots
    a, b, c = f1.character, f2.character, f3.character
    total = int(a @ signs @ (b[:, None] * signs) @ c)
    return total / float(1 << (2 * n))
