"""Dense state-vector simulator with Boolean-function oracles.

Qubits are numbered from 1.  Qubit 1 is the most significant bit of the
basis index, matching the truth-table convention in :mod:`sacq.boolfn`, so
an n-input oracle on qubits 1..n with target n+1 reads the table directly.

Randomness: every sampler draws from numpy's PCG64 bit generator seeded
through a ``SeedSequence``.  Independent streams for parallel work use
``SeedSequence(seed, spawn_key=keys)``; see :func:`rng_stream`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from sacq.boolfn import BooleanFunction

MAX_QUBITS = 26
PRNG_NAME = "numpy.random.PCG64 via SeedSequence(seed, spawn_key)"

_SQRT_HALF = 1.0 / np.sqrt(2.0)
_ONE_QUBIT = ("H", "X", "Z")
_TWO_QUBIT = ("CZ", "CNOT")


class NormDriftError(RuntimeError):
    pass


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind in _ONE_QUBIT:
            arity = 1
        elif self.kind in _TWO_QUBIT:
            arity = 2
        else:
            raise ValueError(f"unknown gate {self.kind!r}")
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != arity:
            raise ValueError(f"{self.kind} operands must be distinct")

    def __str__(self):
        return f"{self.kind}({','.join(map(str, self.qubits))})"


def H(q): return GateOp("H", (q,))
def X(q): return GateOp("X", (q,))
def Z(q): return GateOp("Z", (q,))
def CZ(control, target): return GateOp("CZ", (control, target))
def CNOT(control, target): return GateOp("CNOT", (control, target))


class QState:
    """Amplitude vector over ``q`` qubits. Gates mutate it in place."""

    def __init__(self, q: int, amps: np.ndarray):
        if not 1 <= q <= MAX_QUBITS:
            raise ValueError(f"qubit count {q} outside [1, {MAX_QUBITS}]")
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.shape != (1 << q,):
            raise ValueError(f"expected {1 << q} amplitudes, got {amps.shape}")
        self.q = q
        self.amps = amps

    def copy(self) -> "QState":
        return QState(self.q, self.amps.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def check_norm(self, tol: float = 1e-10) -> None:
        drift = abs(self.norm() - 1.0)
        if drift > tol:
            raise NormDriftError(f"state norm drifted by {drift:.3e}")

    def tensor(self) -> np.ndarray:
        """View of the amplitudes with one axis per qubit (axis k-1 is qubit k)."""
        return self.amps.reshape((2,) * self.q)

    def _check_qubits(self, qubits: Sequence[int]) -> None:
        for k in qubits:
            if not 1 <= k <= self.q:
                raise ValueError(f"qubit {k} outside [1, {self.q}]")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"qubit indices collide: {list(qubits)}")

    def __repr__(self):
        return f"QState(q={self.q})"


def zero_state(q: int) -> QState:
    if not 1 <= q <= MAX_QUBITS:
        raise ValueError(f"qubit count {q} outside [1, {MAX_QUBITS}]")
    amps = np.zeros(1 << q, dtype=np.complex128)
    amps[0] = 1.0
    return QState(q, amps)


def _slot(q: int, assignments: dict[int, int]):
    """Index tuple into QState.tensor() fixing the given qubits to bit values."""
    idx = [slice(None)] * q
    for k, b in assignments.items():
        idx[k - 1] = b
    return tuple(idx)


def apply_gate(state: QState, gate: GateOp) -> QState:
    state._check_qubits(gate.qubits)
    t = state.tensor()
    q = state.q
    if gate.kind == "H":
        (k,) = gate.qubits
        a0, a1 = t[_slot(q, {k: 0})].copy(), t[_slot(q, {k: 1})].copy()
        t[_slot(q, {k: 0})] = (a0 + a1) * _SQRT_HALF
        t[_slot(q, {k: 1})] = (a0 - a1) * _SQRT_HALF
    elif gate.kind == "X":
        (k,) = gate.qubits
        a0 = t[_slot(q, {k: 0})].copy()
        t[_slot(q, {k: 0})] = t[_slot(q, {k: 1})]
        t[_slot(q, {k: 1})] = a0
    elif gate.kind == "Z":
        (k,) = gate.qubits
        t[_slot(q, {k: 1})] *= -1
    elif gate.kind == "CZ":
        c, k = gate.qubits
        t[_slot(q, {c: 1, k: 1})] *= -1
    elif gate.kind == "CNOT":
        c, k = gate.qubits
        a0 = t[_slot(q, {c: 1, k: 0})].copy()
        t[_slot(q, {c: 1, k: 0})] = t[_slot(q, {c: 1, k: 1})]
        t[_slot(q, {c: 1, k: 1})] = a0
    return state


def apply_gates(state: QState, gates) -> QState:
    for g in gates:
        apply_gate(state, g)
    return state


def _register_view(state: QState, qubits: Sequence[int]) -> np.ndarray:
    """Copy of amplitudes reshaped to (2^len(qubits), rest) with the register first."""
    axes = [k - 1 for k in qubits]
    moved = np.moveaxis(state.tensor(), axes, range(len(axes)))
    return moved.reshape(1 << len(axes), -1).copy(), moved.shape, axes


def _write_back(state: QState, block: np.ndarray, shape, axes) -> None:
    restored = np.moveaxis(block.reshape(shape), range(len(axes)), axes)
    state.tensor()[...] = restored


def apply_bit_oracle(state: QState, f: BooleanFunction, inputs: Sequence[int],
                     target: int) -> QState:
    """|x>|e> -> |x>|e + F(x)>, applied as a permutation of basis amplitudes."""
    inputs = list(inputs)
    if len(inputs) != f.n:
        raise ValueError(f"oracle expects {f.n} inputs, got {len(inputs)}")
    state._check_qubits(inputs + [target])
    block, shape, axes = _register_view(state, inputs + [target])
    block = block.reshape(f.size, 2, -1)
    flip = f.table.astype(bool)
    block[flip] = block[flip][:, ::-1, :]
    _write_back(state, block, shape, axes)
    return state


def apply_phase_oracle(state: QState, f: BooleanFunction, inputs: Sequence[int]) -> QState:
    """|x> -> (-1)^F(x) |x> on the input register; no ancilla."""
    inputs = list(inputs)
    if len(inputs) != f.n:
        raise ValueError(f"oracle expects {f.n} inputs, got {len(inputs)}")
    state._check_qubits(inputs)
    block, shape, axes = _register_view(state, inputs)
    block *= f.character[:, None]
    _write_back(state, block, shape, axes)
    return state


def probabilities(state: QState, qubits: Sequence[int]) -> np.ndarray:
    """Marginal distribution of the listed qubits.

    Entry k is the probability of the outcome whose bits, read with the
    first listed qubit as the most significant, spell k.
    """
    qubits = list(qubits)
    if not qubits:
        raise ValueError("need at least one qubit to measure")
    state._check_qubits(qubits)
    p = np.abs(state.tensor()) ** 2
    rest = tuple(k for k in range(state.q) if k + 1 not in qubits)
    marg = p.sum(axis=rest) if rest else p
    kept = sorted(k - 1 for k in qubits)
    marg = np.transpose(marg, [kept.index(k - 1) for k in qubits])
    return marg.reshape(-1)


def rng_stream(seed: int, *keys: int) -> np.random.Generator:
    """PCG64 generator for ``seed``; ``keys`` select an independent child stream."""
    ss = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def sample_distribution(probs, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Outcome counts for ``shots`` i.i.d. draws.

    Uses inverse-CDF lookup of ``rng.random`` doubles, which is bit-exact
    across platforms for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.asarray(probs, dtype=np.float64)
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = rng.random(shots)
    outcomes = np.minimum(np.searchsorted(cdf, u, side="right"), probs.size - 1)
    return np.bincount(outcomes, minlength=probs.size).astype(np.int64)


def sample(state: QState, qubits: Sequence[int], shots: int, seed: int) -> np.ndarray:
    return sample_distribution(probabilities(state, qubits), shots, rng_stream(seed))


def counts_to_dict(counts: np.ndarray, width: int) -> dict[str, int]:
    return {format(k, f"0{width}b"): int(c) for k, c in enumerate(counts) if c}
