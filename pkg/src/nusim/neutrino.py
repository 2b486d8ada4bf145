"""Collective neutrino oscillation physics: parameters, Hamiltonians, exact oracle.

The many-body Hamiltonian is dimensionless: energies are in units of the
self-interaction scale ``eta`` and times in units of ``1/eta`` (hbar = 1).

Neutrinos are labelled 1..N in flavour-string order. Neutrino ``p`` lives on
qubit ``N - p`` so that the flavour string ``"e mu"`` prints as the bitstring
``"01"``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .linalg import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, as_hermitian, eig_hermitian, kron
from .qsim import StateVector, init_basis_state

MAX_NEUTRINOS = 10
HBAR_EV_S = 6.582119569e-16
VACUUM_PHASE_COEFF = 1.27  # eV^-2 GeV km^-1 for Delta m^2 L / 4E

_FLAVOUR_BITS = {"e": "0", "μ": "1", "m": "1"}


class ParamsError(ValueError):
    pass


@dataclass(frozen=True)
class BField:
    bx: float
    by: float
    bz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz])

    def dot_sigma(self) -> np.ndarray:
        return self.bx * SIGMA_X + self.by * SIGMA_Y + self.bz * SIGMA_Z


def b_vector(theta_nu: float) -> BField:
    return BField(np.sin(2 * theta_nu), 0.0, -np.cos(2 * theta_nu))


@dataclass(frozen=True)
class NeutrinoParams:
    """Parameters of an ``n``-neutrino system.

    ``coupling_angles`` maps 1-based pairs ``(p, q)``, ``p < q``, to the angle
    between the two momenta in radians. ``v_cc`` is the charged-current
    potential in units of ``eta``. ``initial_flavours`` is a string over
    ``e`` and ``μ`` (``m`` is accepted for ``μ``).
    """

    n: int
    theta_nu: float
    coupling_angles: dict = field(default_factory=dict)
    delta_m2: float = 2e-4
    energy: float = 0.005
    v_cc: float = 0.0
    initial_flavours: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ParamsError("need at least one neutrino")
        if self.delta_m2 <= 0 or self.energy <= 0:
            raise ParamsError("delta_m2 and energy must be positive")
        angles = {}
        for key, val in dict(self.coupling_angles).items():
            p, q = sorted(int(x) for x in key)
            if not 1 <= p < q <= self.n:
                raise ParamsError(f"pair {key} is not a valid 1-based pair for n={self.n}")
            angles[(p, q)] = float(val)
        object.__setattr__(self, "coupling_angles", dict(sorted(angles.items())))
        flav = self.initial_flavours or "e" * (self.n - 1) + "μ"
        if len(flav) != self.n or any(ch not in _FLAVOUR_BITS for ch in flav):
            raise ParamsError(f"initial flavours {flav!r} must be {self.n} characters over e/μ")
        object.__setattr__(self, "initial_flavours", flav.replace("m", "μ"))

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """Neutrino pairs in lexicographic order: (1,2), (1,3), (2,3), ..."""
        return list(combinations(range(1, self.n + 1), 2))

    @property
    def initial_bitstring(self) -> str:
        return "".join(_FLAVOUR_BITS[ch] for ch in self.initial_flavours)

    @property
    def eta_ev(self) -> float:
        """Self-interaction scale ``Delta m^2 / (4 E)`` in eV."""
        return self.delta_m2 / (4 * self.energy * 1e9)

    @property
    def time_unit_s(self) -> float:
        """Physical length of one dimensionless time unit, ``hbar / eta``."""
        return HBAR_EV_S / self.eta_ev

    def qubit_of(self, p: int) -> int:
        return self.n - p


def table1_params() -> NeutrinoParams:
    """Two-neutrino parameter set used for the inversion and concurrence runs."""
    return NeutrinoParams(2, 0.195, {(1, 2): np.pi / 6}, 2e-4, 0.005, 0.0, "eμ")


def table2_params() -> NeutrinoParams:
    """Three-neutrino parameter set."""
    return NeutrinoParams(
        3, 0.195, {(1, 2): 0.0, (1, 3): np.pi / 6, (2, 3): np.pi / 6}, 2e-4, 0.005, 0.0, "eeμ"
    )


def coupling_matrix(params: NeutrinoParams) -> np.ndarray:
    """Symmetric ``J[p-1, q-1] = 1 - cos(theta^{pq})`` with zero diagonal."""
    j = np.zeros((params.n, params.n))
    for p, q in params.pairs:
        if (p, q) not in params.coupling_angles:
            raise ParamsError(f"missing coupling angle for pair {(p, q)}")
        j[p - 1, q - 1] = j[q - 1, p - 1] = 1.0 - np.cos(params.coupling_angles[(p, q)])
    return j


def _check_size(params: NeutrinoParams) -> None:
    if params.n > MAX_NEUTRINOS:
        raise ParamsError(f"dense Hamiltonian capped at {MAX_NEUTRINOS} neutrinos, got {params.n}")


def _site_op(n: int, qubit: int, op: np.ndarray) -> np.ndarray:
    return kron(*[op if q == qubit else I2 for q in reversed(range(n))])


def _dot_pair(n: int, qa: int, qb: int) -> np.ndarray:
    return sum(_site_op(n, qa, s) @ _site_op(n, qb, s) for s in (SIGMA_X, SIGMA_Y, SIGMA_Z))


def _matter_term(params: NeutrinoParams) -> np.ndarray:
    n = params.n
    if params.v_cc == 0:
        return np.zeros((1 << n, 1 << n), dtype=complex)
    return 0.5 * params.v_cc * sum(_site_op(n, q, SIGMA_Z) for q in range(n))


def pair_terms(params: NeutrinoParams) -> list[tuple[tuple[int, int], np.ndarray, np.ndarray]]:
    """Per-pair single-body and interaction pieces ``(pair, H1, H2)`` of the pairwise form."""
    _check_size(params)
    n = params.n
    bs = b_vector(params.theta_nu).dot_sigma()
    j = coupling_matrix(params)
    out = []
    for p, q in params.pairs:
        qa, qb = params.qubit_of(p), params.qubit_of(q)
        h1 = (_site_op(n, qa, bs) + _site_op(n, qb, bs)) / (n - 1)
        h2 = j[p - 1, q - 1] * _dot_pair(n, qa, qb)
        out.append(((p, q), h1, h2))
    return out


def hamiltonian_summed(params: NeutrinoParams) -> np.ndarray:
    """One-body field on every site plus the pair interactions."""
    _check_size(params)
    n = params.n
    bs = b_vector(params.theta_nu).dot_sigma()
    j = coupling_matrix(params)
    h = sum(_site_op(n, q, bs) for q in range(n))
    for p, q in params.pairs:
        h = h + j[p - 1, q - 1] * _dot_pair(n, params.qubit_of(p), params.qubit_of(q))
    return as_hermitian(h + _matter_term(params))


def hamiltonian_reduced(params: NeutrinoParams) -> np.ndarray:
    """Same operator grouped pair by pair; ``n = 1`` has no pairs and is just ``b.sigma``."""
    _check_size(params)
    if params.n == 1:
        return as_hermitian(b_vector(params.theta_nu).dot_sigma() + _matter_term(params))
    h = sum(h1 + h2 for _, h1, h2 in pair_terms(params))
    return as_hermitian(h + _matter_term(params))


class ExactEvolution:
    """Diagonalises the Hamiltonian once and evolves the initial state to any time."""

    def __init__(self, params: NeutrinoParams):
        self.params = params
        self.energies, self.vectors = eig_hermitian(hamiltonian_summed(params))
        psi0 = init_basis_state(params.n, params.initial_bitstring).amps
        self._coeffs = self.vectors.conj().T @ psi0

    def amplitudes(self, times) -> np.ndarray:
        """Array of shape ``(len(times), 2**n)``."""
        times = np.atleast_1d(np.asarray(times, dtype=float))
        phases = np.exp(-1j * np.outer(times, self.energies))
        return (phases * self._coeffs) @ self.vectors.T

    def state(self, t: float) -> StateVector:
        amps = self.amplitudes([t])[0]
        return StateVector(amps / np.linalg.norm(amps))


def evolve_exact(params: NeutrinoParams, t: float) -> StateVector:
    return ExactEvolution(params).state(t)


def inversion_target(params: NeutrinoParams) -> str:
    """Bitstring of the flavour-swapped state (the initial string reversed)."""
    bits = params.initial_bitstring
    if bits.count("0") == 0 or bits.count("1") == 0:
        raise ParamsError(
            f"inversion is undefined for the single-flavour state {params.initial_flavours!r}"
        )
    return bits[::-1]


def inversion_curve_exact(params: NeutrinoParams, times) -> np.ndarray:
    idx = int(inversion_target(params), 2)
    amps = ExactEvolution(params).amplitudes(times)
    return np.clip(np.abs(amps[:, idx]) ** 2, 0.0, 1.0)


def inversion_probability_exact(params: NeutrinoParams, t: float) -> float:
    return float(inversion_curve_exact(params, [t])[0])


def concurrence_exact(state: StateVector) -> float:
    """Pure-state concurrence ``|<psi| Y(x)Y |psi*>|`` of a two-qubit state."""
    if state.num_qubits != 2:
        raise NotImplementedError("concurrence is implemented for two-qubit states only")
    psi = state.amps
    flipped = kron(SIGMA_Y, SIGMA_Y) @ psi.conj()
    return float(min(1.0, abs(np.vdot(psi, flipped))))


def concurrence_curve_exact(params: NeutrinoParams, times) -> np.ndarray:
    if params.n != 2:
        raise NotImplementedError("concurrence is implemented for two neutrinos only")
    amps = ExactEvolution(params).amplitudes(times)
    a, b, c, d = amps.T
    return np.minimum(1.0, 2 * np.abs(a * d - b * c))


def vacuum_phase(dm2: float, length_km: float, energy_gev: float) -> float:
    """Relative phase ``2 * 1.27 dm2 L / E`` accumulated between mass states."""
    return 2 * VACUUM_PHASE_COEFF * dm2 * length_km / energy_gev


def vacuum_disappearance(theta: float, dm2: float, length_km: float, energy_gev: float) -> float:
    """Two-flavour ``P(nu_e -> nu_mu)`` with ``dm2`` in eV^2, ``L`` in km, ``E`` in GeV."""
    if energy_gev <= 0:
        raise ParamsError("energy must be positive")
    arg = VACUUM_PHASE_COEFF * dm2 * length_km / energy_gev
    return float(np.sin(2 * theta) ** 2 * np.sin(arg) ** 2)
