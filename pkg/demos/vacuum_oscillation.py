# %% [markdown]
# # Two-flavour vacuum oscillation on one qubit
#
# A neutrino produced as nu_e is a superposition of two mass states. Rotating
# into the mass basis, letting the two states pick up a relative phase and
# rotating back gives the textbook disappearance probability.

# %%
import numpy as np

from nusim import probability_of, run_statevector, vacuum_circuit
from nusim.neutrino import vacuum_disappearance, vacuum_phase

theta, dm2, energy = 0.295, 2e-4, 0.005  # rad, eV^2, GeV

# %% Sweep the baseline and compare the circuit with the closed form.
for length in np.linspace(0, 125, 11):
    circ = vacuum_circuit(theta, vacuum_phase(dm2, length, energy))
    p_circ = probability_of(run_statevector(circ), "1")
    print(f"L = {length:6.1f} km   circuit {p_circ:.6f}   formula "
          f"{vacuum_disappearance(theta, dm2, length, energy):.6f}")

# %% The amplitude of the oscillation is sin^2(2 theta).
print("max disappearance:", round(np.sin(2 * theta) ** 2, 4))
