"""Statevector simulation of collective neutrino oscillations on small qubit registers."""
from .linalg import (
    distance_up_to_global_phase,
    eig_hermitian,
    expm_hermitian,
    kron,
)
from .qsim import (
    Circuit,
    Counts,
    GateOp,
    NoiseModel,
    StateVector,
    apply_gate,
    circuit_unitary,
    init_basis_state,
    probability_of,
    run_noisy,
    run_statevector,
    sample_counts,
)
from .decomp import (
    XYZCoefficients,
    bfield_rotation_circuit,
    conjugate_circuit,
    spin_flip_circuit,
    xyz_propagator_circuit,
)
from .neutrino import (
    NeutrinoParams,
    b_vector,
    concurrence_exact,
    coupling_matrix,
    evolve_exact,
    hamiltonian_reduced,
    hamiltonian_summed,
    inversion_probability_exact,
    table1_params,
    table2_params,
    vacuum_disappearance,
)
from .circuits import (
    concurrence_circuit,
    concurrence_from_counts,
    evolution_circuit,
    vacuum_circuit,
)

__version__ = "0.1.0"
