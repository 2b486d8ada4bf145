"""Gate-level compilation of the propagators used by the neutrino circuits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import I2, SIGMA_X, SIGMA_Z, expm_hermitian
from .qsim import Circuit, CircuitError, GateOp


@dataclass(frozen=True)
class XYZCoefficients:
    """Couplings of ``h_x XX + h_y YY + h_z ZZ`` (already multiplied by time)."""

    h_x: float
    h_y: float
    h_z: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.h_x, self.h_y, self.h_z])):
            raise ValueError("XYZ coefficients must be finite")

    @property
    def equal(self) -> bool:
        return self.h_x == self.h_y == self.h_z


def equal_coupling_gates(jt: float) -> dict[str, np.ndarray]:
    """Closed-form single-qubit gates for ``exp(-i jt (XX + YY + ZZ))``.

    ``U*`` act on the CNOT control, ``V*`` on the target; ``U1 = V1 = 1``.
    """
    root2 = np.sqrt(2.0)
    return {
        "U2": 1j / root2 * (SIGMA_X + SIGMA_Z) @ expm_hermitian(SIGMA_X, jt - np.pi / 4),
        "V2": expm_hermitian(SIGMA_Z, jt),
        "U3": -1j / root2 * (SIGMA_X + SIGMA_Z),
        "V3": expm_hermitian(SIGMA_Z, -jt),
        "U4": (I2 - 1j * SIGMA_X) / root2,
        "V4": (I2 + 1j * SIGMA_X) / root2,
    }


def xyz_propagator_circuit(h: XYZCoefficients, qubit_a: int, qubit_b: int,
                           num_qubits: int | None = None) -> Circuit:
    """Three-CNOT circuit for ``exp(-i (h_x XX + h_y YY + h_z ZZ))`` on ``(a, b)``.

    Equal couplings emit the closed-form U/V gate list with every CNOT
    controlled by ``qubit_a``. Unequal couplings use the Rz/Ry canonical form,
    whose CNOTs alternate direction. Both agree with the exponential up to a
    global phase.
    """
    if qubit_a == qubit_b:
        raise CircuitError("xyz propagator needs two distinct qubits")
    n = num_qubits if num_qubits is not None else max(qubit_a, qubit_b) + 1
    c = Circuit(n, label="xyz")
    a, b = qubit_a, qubit_b
    if h.equal:
        g = equal_coupling_gates(h.h_x)
        c.cnot(a, b)
        c.unitary(g["U2"], a, label="U2").rz(2 * h.h_x, b)   # V2 = exp(-i jt Z)
        c.cnot(a, b)
        c.unitary(g["U3"], a, label="U3").rz(-2 * h.h_x, b)  # V3 = exp(+i jt Z)
        c.cnot(a, b)
        c.unitary(g["U4"], a, label="U4").unitary(g["V4"], b, label="V4")
        return c
    c.rz(np.pi / 2, b)
    c.cnot(b, a)
    c.rz(2 * h.h_z + np.pi / 2, a).ry(2 * h.h_x + np.pi / 2, b)
    c.cnot(a, b)
    c.ry(-2 * h.h_y - np.pi / 2, b)
    c.cnot(b, a)
    c.rz(-np.pi / 2, a)
    return c


def bfield_rotation_circuit(theta_nu: float, alpha: float, qubit: int,
                            num_qubits: int | None = None) -> Circuit:
    """``exp(-i alpha b.sigma)`` for ``b = (sin 2theta, 0, -cos 2theta)``.

    Rotating Z about y by ``beta = pi - 2 theta`` lands on ``b``, so the
    propagator is ``Ry(beta) Rz(2 alpha) Ry(-beta)``.
    """
    beta = np.pi - 2 * theta_nu
    n = num_qubits if num_qubits is not None else qubit + 1
    c = Circuit(n, label="bfield")
    c.ry(-beta, qubit).rz(2 * alpha, qubit).ry(beta, qubit)
    return c


def _conjugate_op(op: GateOp) -> GateOp:
    k = op.kind
    if k in ("x", "h", "cnot", "swap", "cswap", "ry"):
        # real matrices; Ry(t) = [[c, -s], [s, c]]
        return op
    if k in ("rz", "phase"):
        return GateOp(k, op.targets, (-op.params[0],), label=op.label)
    if k == "u3":
        theta, phi, lam = op.params
        return GateOp(k, op.targets, (theta, -phi, -lam), label=op.label)
    if k == "y" or k.startswith("raw"):
        kind = {1: "raw1q", 2: "raw2q", 3: "raw3q"}[op.arity]
        label = (op.label or k) + "*"
        return GateOp(kind, op.targets, matrix=op.unitary().conj(), label=label)
    raise CircuitError(f"no conjugation rule for {k!r}")


def conjugate_circuit(c: Circuit) -> Circuit:
    """Circuit whose unitary is the elementwise complex conjugate of ``c``'s."""
    return Circuit(c.num_qubits, [_conjugate_op(op) for op in c.ops], label=c.label + "*")


def spin_flip_circuit(num_qubits: int, offset: int = 0, width: int | None = None) -> Circuit:
    """Pauli-Y on qubits ``offset .. offset + num_qubits - 1``."""
    c = Circuit(width if width is not None else offset + num_qubits, label="spin-flip")
    for q in range(offset, offset + num_qubits):
        c.y(q)
    return c
