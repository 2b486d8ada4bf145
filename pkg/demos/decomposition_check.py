# %% [markdown]
# # Three-CNOT circuits for exp(-i (h_x XX + h_y YY + h_z ZZ))

# %%
import numpy as np

from nusim import circuit_unitary
from nusim.decomp import XYZCoefficients, xyz_propagator_circuit
from nusim.linalg import SIGMA_X, SIGMA_Y, SIGMA_Z, distance_up_to_global_phase, expm_taylor, kron


def target(hx, hy, hz):
    g = hx * kron(SIGMA_X, SIGMA_X) + hy * kron(SIGMA_Y, SIGMA_Y) + hz * kron(SIGMA_Z, SIGMA_Z)
    return expm_taylor(-1j * g)


# %% Equal couplings use the closed-form single-qubit gates.
for jt in (0.1, 0.7, 2.0):
    c = xyz_propagator_circuit(XYZCoefficients(jt, jt, jt), 1, 0)
    print(f"equal jt={jt}: {c.count('cnot')} CNOTs, distance "
          f"{distance_up_to_global_phase(circuit_unitary(c), target(jt, jt, jt)):.1e}")

# %% Arbitrary couplings go through the Rz/Ry canonical form.
rng = np.random.default_rng(0)
for h in rng.uniform(-1, 1, (3, 3)):
    c = xyz_propagator_circuit(XYZCoefficients(*h), 1, 0)
    print(f"h={np.round(h, 3)}: {c.count('cnot')} CNOTs, distance "
          f"{distance_up_to_global_phase(circuit_unitary(c), target(*h)):.1e}")
