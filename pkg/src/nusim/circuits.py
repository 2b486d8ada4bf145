"""Experiment circuits: vacuum oscillation, Trotterized evolution, SWAP-test concurrence."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .decomp import (
    XYZCoefficients,
    bfield_rotation_circuit,
    conjugate_circuit,
    spin_flip_circuit,
    xyz_propagator_circuit,
)
from .neutrino import NeutrinoParams, ParamsError, coupling_matrix
from .qsim import Circuit, Counts, CircuitError

ANCILLA = 0


def default_trotter_steps(n: int) -> int:
    # the two N=2 pair terms commute, so one step is exact there
    return 1 if n <= 2 else 32


def vacuum_circuit(theta: float, phase: float) -> Circuit:
    """One-qubit flavour oscillation: to mass basis, relative phase, back to flavour basis."""
    c = Circuit(1, label="vacuum")
    c.ry(-2 * theta, 0)
    c.phase(phase, 0)
    c.ry(2 * theta, 0)
    return c


def _route_pair(c: Circuit, qa: int, qb: int, h: XYZCoefficients) -> None:
    """Apply the XYZ propagator on a linear chain, swapping ``qb`` next to ``qa`` first."""
    step = 1 if qb > qa else -1
    path = list(range(qb, qa, -step))  # qb, ..., qa + step
    swaps = list(zip(path[:-1], path[1:]))
    for s in swaps:
        c.swap(*s)
    c.extend(xyz_propagator_circuit(h, qa, qa + step, c.num_qubits).ops)
    for s in reversed(swaps):
        c.swap(*s)


def evolution_circuit(params: NeutrinoParams, t: float, trotter_steps: int | None = None,
                      hardware_swaps: bool = False,
                      pair_order: Sequence[tuple[int, int]] | None = None) -> Circuit:
    """First-order Trotter circuit preparing ``|psi(t)>`` from the flavour product state.

    Each step applies, pair by pair, the field rotation on both neutrinos with
    weight ``dt / (N - 1)`` and then the XYZ propagator with ``h = J^{pq} dt``.
    Pairs run in lexicographic order unless ``pair_order`` says otherwise.
    With ``hardware_swaps`` every non-adjacent pair is routed through SWAP
    gates on a linear qubit chain; the unitary is unchanged.
    """
    n = params.n
    if n < 2:
        raise ParamsError("evolution circuits need at least two neutrinos")
    steps = default_trotter_steps(n) if trotter_steps is None else int(trotter_steps)
    if steps < 1:
        raise ParamsError("trotter_steps must be >= 1")
    order = params.pairs if pair_order is None else [tuple(sorted(p)) for p in pair_order]
    if sorted(order) != params.pairs:
        raise ParamsError(f"pair order {order} is not a permutation of {params.pairs}")

    j = coupling_matrix(params)
    dt = t / steps
    c = Circuit(n, label=f"evolution(t={t:g}, steps={steps})")
    for pos, bit in enumerate(params.initial_bitstring):
        if bit == "1":
            c.x(n - 1 - pos)
    for _ in range(steps):
        for p, q in order:
            qa, qb = params.qubit_of(p), params.qubit_of(q)
            for qubit in (qa, qb):
                c.extend(bfield_rotation_circuit(params.theta_nu, dt / (n - 1), qubit, n).ops)
            jt = j[p - 1, q - 1] * dt
            h = XYZCoefficients(jt, jt, jt)
            if hardware_swaps and abs(qa - qb) > 1:
                _route_pair(c, qa, qb, h)
            else:
                c.extend(xyz_propagator_circuit(h, qa, qb, n).ops)
        if params.v_cc:
            for qubit in range(n):
                c.rz(params.v_cc * dt, qubit)
    return c


def concurrence_circuit(params: NeutrinoParams, t: float, trotter_steps: int | None = None,
                        spin_flip: bool = True) -> Circuit:
    """Five-qubit SWAP test between ``|psi(t)>`` and its spin-flipped partner.

    Qubit 0 is the ancilla, qubits 3 and 4 hold ``|psi>`` and qubits 1 and 2
    hold ``Y(x)Y |psi*>``. Only the ancilla is meant to be measured. With
    ``spin_flip=False`` register B receives a plain copy of ``|psi>``.
    """
    if params.n != 2:
        raise ParamsError("the concurrence circuit is built for two neutrinos")
    evo = evolution_circuit(params, t, trotter_steps)
    width = 2 * params.n + 1
    c = Circuit(width, label=f"concurrence(t={t:g})")
    c.extend(evo.remapped([3, 4], width).ops)
    if spin_flip:
        c.extend(conjugate_circuit(evo).remapped([1, 2], width).ops)
        c.extend(spin_flip_circuit(2, offset=1, width=width).ops)
    else:
        c.extend(evo.remapped([1, 2], width).ops)
    c.h(ANCILLA)
    c.cswap(ANCILLA, 3, 1)
    c.cswap(ANCILLA, 4, 2)
    c.h(ANCILLA)
    return c


def concurrence_from_p0(p0: float) -> float:
    """``sqrt(2 P(0) - 1)``, clamped to 0 when shot noise pushes ``P(0)`` below 1/2."""
    return float(np.sqrt(max(2.0 * p0 - 1.0, 0.0)))


def concurrence_stderr(p0: float, shots: int) -> float:
    """Delta-method standard error of the concurrence estimate.

    ``dC/dP = 1/C`` diverges at ``C = 0``, so the result is capped at
    ``sqrt(2 sigma_P)``, the C-scale of a one-sigma shift of ``P(0)`` from 1/2.
    """
    sigma_p = np.sqrt(max(p0 * (1 - p0), 0.0) / shots)
    c = concurrence_from_p0(p0)
    if c > 0:
        return float(min(sigma_p / c, np.sqrt(2 * sigma_p)))
    return float(np.sqrt(2 * sigma_p))


def ancilla_p0(counts: Counts) -> float:
    """Fraction of shots with the ancilla (qubit 0, last key character) in ``|0>``."""
    zeros = sum(v for k, v in counts.histogram.items() if k[-1] == "0")
    return zeros / counts.shots


def concurrence_from_counts(counts: Counts) -> float:
    if counts.shots <= 0:
        raise CircuitError("no shots recorded")
    return concurrence_from_p0(ancilla_p0(counts))
