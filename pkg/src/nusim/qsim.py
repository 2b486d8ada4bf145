"""Statevector circuit engine.

Qubit ``k`` is bit ``k`` of the basis index (little-endian). Bitstrings are
printed most-significant qubit first, so for two qubits the string ``"01"``
means qubit 1 in ``|0>`` and qubit 0 in ``|1>``. All bitstring I/O goes through
:func:`bitstring_to_index` and :func:`index_to_bitstring`.

Multi-qubit gate matrices use the first listed target as the most significant
bit: ``CNOT`` on targets ``(c, t)`` is ``kron(P0, I) + kron(P1, X)``.

Random numbers come from numpy's ``PCG64`` bit generator seeded with the
integer seed the caller supplies, which reproduces bit-identically across
platforms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .linalg import EPS_UNITARY, PAULIS, SIGMA_X, SIGMA_Y, as_unitary

NORM_TOL = 1e-9
MAX_UNITARY_QUBITS = 6


class CircuitError(ValueError):
    pass


# -- bitstrings ---------------------------------------------------------------

def _check_bits(bits: str, num_qubits: int | None = None) -> None:
    if not bits or any(ch not in "01" for ch in bits):
        raise CircuitError(f"malformed bitstring {bits!r}")
    if num_qubits is not None and len(bits) != num_qubits:
        raise CircuitError(f"bitstring {bits!r} has length {len(bits)}, expected {num_qubits}")


def bitstring_to_index(bits: str, num_qubits: int | None = None) -> int:
    _check_bits(bits, num_qubits)
    return int(bits, 2)


def index_to_bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


# -- states -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StateVector:
    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=complex)
        n = amps.size.bit_length() - 1
        if amps.ndim != 1 or amps.size < 2 or 1 << n != amps.size:
            raise CircuitError(f"amplitude vector of length {amps.size} is not 2^n with n >= 1")
        if not np.all(np.isfinite(amps)):
            raise CircuitError("state contains NaN or Inf")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise CircuitError(f"state norm^2 = {norm!r} is not 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def num_qubits(self) -> int:
        return self.amps.size.bit_length() - 1

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def __repr__(self) -> str:
        return f"StateVector(num_qubits={self.num_qubits})"


def init_basis_state(num_qubits: int, bitstring: str) -> StateVector:
    """Computational basis state named by an MSB-first bitstring."""
    if num_qubits < 1:
        raise CircuitError("need at least one qubit")
    idx = bitstring_to_index(bitstring, num_qubits)
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[idx] = 1.0
    return StateVector(amps)


def probability_of(state: StateVector, bitstring: str) -> float:
    idx = bitstring_to_index(bitstring, state.num_qubits)
    return float(min(1.0, abs(state.amps[idx]) ** 2))


# -- gates --------------------------------------------------------------------

_ARITY = {
    "x": 1, "y": 1, "h": 1, "ry": 1, "rz": 1, "phase": 1, "u3": 1, "raw1q": 1,
    "cnot": 2, "swap": 2, "raw2q": 2,
    "cswap": 3, "raw3q": 3,
}
_NPARAMS = {"ry": 1, "rz": 1, "phase": 1, "u3": 3}

_FIXED = {
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "cnot": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}
_cswap = np.eye(8, dtype=complex)
_cswap[[5, 6]] = _cswap[[6, 5]]
_FIXED["cswap"] = _cswap
for _m in _FIXED.values():
    _m.setflags(write=False)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def phase_matrix(lam: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * lam)])


def u3_matrix(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s], [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]],
        dtype=complex,
    )


_PARAM_MATRIX = {"ry": ry_matrix, "rz": rz_matrix, "phase": phase_matrix, "u3": u3_matrix}


@dataclass(frozen=True, eq=False)
class GateOp:
    """One gate bound to qubit indices.

    ``kind`` is one of ``x y h ry rz phase u3 raw1q cnot swap raw2q cswap raw3q``.
    Raw kinds carry their unitary in ``matrix``; rotation kinds carry angles in
    ``params``.
    """

    kind: str
    targets: tuple[int, ...]
    params: tuple[float, ...] = ()
    matrix: np.ndarray | None = None
    label: str = ""

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in _ARITY:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        targets = tuple(int(q) for q in self.targets)
        object.__setattr__(self, "targets", targets)
        if len(targets) != _ARITY[kind]:
            raise CircuitError(f"{kind} acts on {_ARITY[kind]} qubit(s), got targets {targets}")
        if len(set(targets)) != len(targets) or min(targets) < 0:
            raise CircuitError(f"invalid targets {targets} for {kind}")
        params = tuple(float(p) for p in self.params)
        if len(params) != _NPARAMS.get(kind, 0):
            raise CircuitError(f"{kind} expects {_NPARAMS.get(kind, 0)} parameter(s), got {params}")
        object.__setattr__(self, "params", params)
        if kind.startswith("raw"):
            if self.matrix is None:
                raise CircuitError(f"{kind} needs a matrix")
            m = as_unitary(self.matrix, EPS_UNITARY)
            if m.shape[0] != 1 << len(targets):
                raise CircuitError(f"{kind} matrix has shape {m.shape}")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise CircuitError(f"{kind} does not take a matrix")

    @property
    def arity(self) -> int:
        return len(self.targets)

    def unitary(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix
        if self.kind in _FIXED:
            return _FIXED[self.kind]
        return _PARAM_MATRIX[self.kind](*self.params)

    def __repr__(self) -> str:
        name = self.label or self.kind
        args = ", ".join(f"{p:.6g}" for p in self.params)
        return f"{name}({args}){list(self.targets)}" if args else f"{name}{list(self.targets)}"


@dataclass
class Circuit:
    num_qubits: int
    ops: list[GateOp] = field(default_factory=list)
    label: str = ""

    def __post_init__(self):
        if self.num_qubits < 1:
            raise CircuitError("a circuit needs at least one qubit")
        ops, self.ops = list(self.ops), []
        for op in ops:
            self.append(op)

    def append(self, op: GateOp) -> "Circuit":
        if max(op.targets) >= self.num_qubits:
            raise CircuitError(f"{op!r} out of range for {self.num_qubits} qubits")
        self.ops.append(op)
        return self

    def extend(self, ops: Iterable[GateOp]) -> "Circuit":
        for op in ops:
            self.append(op)
        return self

    def add(self, kind: str, *targets: int, params=(), matrix=None, label: str = "") -> "Circuit":
        return self.append(GateOp(kind, targets, tuple(params), matrix, label))

    def x(self, q):
        return self.add("x", q)

    def y(self, q):
        return self.add("y", q)

    def h(self, q):
        return self.add("h", q)

    def ry(self, theta, q):
        return self.add("ry", q, params=(theta,))

    def rz(self, theta, q):
        return self.add("rz", q, params=(theta,))

    def phase(self, lam, q):
        return self.add("phase", q, params=(lam,))

    def u3(self, theta, phi, lam, q):
        return self.add("u3", q, params=(theta, phi, lam))

    def cnot(self, control, target):
        return self.add("cnot", control, target)

    def swap(self, a, b):
        return self.add("swap", a, b)

    def cswap(self, control, a, b):
        return self.add("cswap", control, a, b)

    def unitary(self, matrix, *targets, label: str = ""):
        kind = {1: "raw1q", 2: "raw2q", 3: "raw3q"}.get(len(targets))
        if kind is None:
            raise CircuitError(f"raw gates act on 1-3 qubits, got {len(targets)}")
        return self.add(kind, *targets, matrix=matrix, label=label)

    def remapped(self, mapping: Sequence[int], num_qubits: int) -> "Circuit":
        """Copy with qubit ``q`` moved to ``mapping[q]`` inside a ``num_qubits`` register."""
        ops = [GateOp(op.kind, tuple(mapping[q] for q in op.targets), op.params, op.matrix, op.label)
               for op in self.ops]
        return Circuit(num_qubits, ops, self.label)

    def count(self, kind: str) -> int:
        return sum(op.kind == kind for op in self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[GateOp]:
        return iter(self.ops)


# -- application --------------------------------------------------------------

def _apply_matrix(amps: np.ndarray, mat: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """Apply ``mat`` to ``targets`` of every state in ``amps`` (shape ``(..., 2**n)``)."""
    lead = amps.shape[:-1]
    k = len(targets)
    if k == 1:
        # (hi, 2, lo) view: matmul broadcasts the 2x2 over the other qubits
        q = targets[0]
        return (np.asarray(mat) @ amps.reshape(lead + (-1, 2, 1 << q))).reshape(amps.shape)
    psi = amps.reshape(lead + (2,) * n)
    axes = [len(lead) + n - 1 - q for q in targets]
    gate = np.asarray(mat).reshape((2,) * (2 * k))
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the batch axes after the gate axes; undo that first
    out = np.moveaxis(out, list(range(k, k + len(lead))), list(range(len(lead)))) if lead else out
    out = np.moveaxis(out, [len(lead) + i for i in range(k)], axes)
    return out.reshape(lead + (1 << n,))


def apply_gate(state: StateVector, op: GateOp) -> StateVector:
    n = state.num_qubits
    if max(op.targets) >= n:
        raise CircuitError(f"{op!r} out of range for {n} qubits")
    return StateVector(_apply_matrix(state.amps, op.unitary(), op.targets, n))


def _zero_state(n: int) -> StateVector:
    return init_basis_state(n, "0" * n)


def run_statevector(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    n = circuit.num_qubits
    initial = _zero_state(n) if initial is None else initial
    if initial.num_qubits != n:
        raise CircuitError(f"circuit has {n} qubits, state has {initial.num_qubits}")
    amps = initial.amps
    for op in circuit.ops:
        amps = _apply_matrix(amps, op.unitary(), op.targets, n)
    return StateVector(amps)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    n = circuit.num_qubits
    if n > MAX_UNITARY_QUBITS:
        raise CircuitError(f"circuit_unitary is capped at {MAX_UNITARY_QUBITS} qubits, got {n}")
    # row k of the batch is basis state k
    batch = np.eye(1 << n, dtype=complex)
    for op in circuit.ops:
        batch = _apply_matrix(batch, op.unitary(), op.targets, n)
    return batch.T.copy()


# -- sampling -----------------------------------------------------------------

@dataclass(frozen=True)
class NoiseModel:
    p_depol_1q: float = 0.0
    p_depol_2q: float = 0.0
    p_readout_flip: float = 0.0

    def __post_init__(self):
        for name in ("p_depol_1q", "p_depol_2q", "p_readout_flip"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} = {p} is outside [0, 1]")

    @property
    def has_gate_noise(self) -> bool:
        return self.p_depol_1q > 0 or self.p_depol_2q > 0


@dataclass(frozen=True)
class Counts:
    shots: int
    seed: int
    histogram: dict[str, int]

    def __post_init__(self):
        if self.shots <= 0:
            raise CircuitError("counts need at least one shot")
        if sum(self.histogram.values()) != self.shots:
            raise CircuitError("histogram does not sum to shots")

    def __getitem__(self, bits: str) -> int:
        return self.histogram.get(bits, 0)

    def frequency(self, bits: str) -> float:
        return self[bits] / self.shots

    def merge(self, other: "Counts") -> "Counts":
        hist = dict(self.histogram)
        for k, v in other.histogram.items():
            hist[k] = hist.get(k, 0) + v
        return Counts(self.shots + other.shots, self.seed, dict(sorted(hist.items())))


def _measured(qubits: Sequence[int] | None, n: int) -> list[int]:
    if qubits is None:
        return list(range(n))
    qs = sorted({int(q) for q in qubits})
    if not qs or qs[0] < 0 or qs[-1] >= n:
        raise CircuitError(f"invalid measured qubits {qubits} for {n} qubits")
    return qs


def _histogram(outcomes: np.ndarray, measured: list[int], shots: int, seed: int,
               noise: NoiseModel | None, rng: np.random.Generator) -> Counts:
    m = len(measured)
    # compress measured bits; key bit j is measured[j]
    bits = np.zeros(outcomes.shape, dtype=np.int64)
    for j, q in enumerate(measured):
        bits |= ((outcomes >> q) & 1) << j
    if noise is not None and noise.p_readout_flip > 0:
        flips = rng.random((shots, m)) < noise.p_readout_flip
        bits ^= (flips.astype(np.int64) << np.arange(m)).sum(axis=1)
    keys, freq = np.unique(bits, return_counts=True)
    hist = {index_to_bitstring(int(k), m): int(c) for k, c in zip(keys, freq)}
    return Counts(shots, seed, hist)


def sample_counts(state: StateVector, shots: int, seed: int,
                  noise: NoiseModel | None = None,
                  qubits: Sequence[int] | None = None) -> Counts:
    """Draw ``shots`` measurement outcomes from ``state``.

    ``qubits`` restricts the measurement to a subset; histogram keys are then
    MSB-first bitstrings over that subset. Only readout flips from ``noise``
    apply here.
    """
    if shots < 1:
        raise CircuitError("shots must be >= 1")
    n = state.num_qubits
    measured = _measured(qubits, n)
    rng = make_rng(seed)
    probs = state.probabilities()
    outcomes = rng.choice(probs.size, size=shots, p=probs / probs.sum())
    return _histogram(outcomes, measured, shots, seed, noise, rng)


def run_noisy(circuit: Circuit, initial: StateVector | None, shots: int,
              noise: NoiseModel, seed: int,
              qubits: Sequence[int] | None = None) -> Counts:
    """Monte-Carlo trajectory run with depolarizing and readout noise.

    Each shot evolves its own copy of the state. After every gate, with
    probability ``p_depol_1q`` (one-qubit gates) or ``p_depol_2q`` (gates on two
    or more qubits) a uniformly random non-identity Pauli string is applied to
    the gate's qubits. Each shot is then measured once and read out with
    independent bit flips. All shots are carried as one batch.
    """
    if shots < 1:
        raise CircuitError("shots must be >= 1")
    n = circuit.num_qubits
    initial = _zero_state(n) if initial is None else initial
    if initial.num_qubits != n:
        raise CircuitError(f"circuit has {n} qubits, state has {initial.num_qubits}")
    if not noise.has_gate_noise:
        return sample_counts(run_statevector(circuit, initial), shots, seed, noise, qubits)

    measured = _measured(qubits, n)
    rng = make_rng(seed)
    states = np.tile(initial.amps, (shots, 1))
    for op in circuit.ops:
        states = _apply_matrix(states, op.unitary(), op.targets, n)
        p = noise.p_depol_1q if op.arity == 1 else noise.p_depol_2q
        if p <= 0:
            continue
        hit = np.flatnonzero(rng.random(shots) < p)
        if hit.size == 0:
            continue
        k = op.arity
        codes = rng.integers(1, 4**k, size=hit.size)
        sub = states[hit]
        for j, q in enumerate(op.targets):
            digit = (codes >> (2 * (k - 1 - j))) & 3
            for pauli in (1, 2, 3):
                rows = digit == pauli
                if rows.any():
                    sub[rows] = _apply_matrix(sub[rows], PAULIS[pauli], (q,), n)
        states[hit] = sub

    cdf = np.cumsum(np.abs(states) ** 2, axis=1)
    u = rng.random(shots) * cdf[:, -1]
    outcomes = np.minimum((cdf < u[:, None]).sum(axis=1), (1 << n) - 1)
    return _histogram(outcomes, measured, shots, seed, noise, rng)
