# %% [markdown]
# # Flavour inversion for two and three neutrinos
#
# Starting from ``e mu`` (or ``e e mu``) we track the probability of reaching
# the reversed flavour string. Times are in units of 1/eta.

# %%
import numpy as np

from nusim import evolution_circuit, probability_of, run_statevector
from nusim.neutrino import inversion_curve_exact, inversion_target, table1_params, table2_params

# %% Two neutrinos: the pair Hamiltonian splits into commuting pieces, so a
# single Trotter step is already exact.
two = table1_params()
ts = np.linspace(0, 20, 9)
exact = inversion_curve_exact(two, ts)
for t, p in zip(ts, exact):
    circ = evolution_circuit(two, t, trotter_steps=1)
    est = probability_of(run_statevector(circ), inversion_target(two))
    print(f"N=2 t = {t:5.2f}   exact {p:.6f}   circuit {est:.6f}")

# %% Three neutrinos: pairs no longer commute and the first-order error
# halves each time the step count doubles.
three = table2_params()
ts = np.linspace(0, 1, 21)
oracle = inversion_curve_exact(three, ts)
for steps in (8, 16, 32, 64):
    circ = [probability_of(run_statevector(evolution_circuit(three, t, steps)), "100") for t in ts]
    print(f"N=3 steps = {steps:3d}   max error {np.max(np.abs(np.array(circ) - oracle)):.2e}")
