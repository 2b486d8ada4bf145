# %% [markdown]
# # Gate and readout noise on the concurrence peaks
#
# Depolarizing errors after each gate and classical readout flips pull the
# ancilla towards a mixed outcome, which shows up as a dip in the estimated
# concurrence where the exact value is 1.

# %%
import numpy as np

from nusim import NoiseModel, concurrence_circuit, run_noisy
from nusim.circuits import concurrence_from_counts
from nusim.neutrino import table1_params

params = table1_params()
j = 1 - np.cos(np.pi / 6)
t_peak = np.pi / (8 * j)
circ = concurrence_circuit(params, t_peak)

# %%
for p2 in (0.0, 0.005, 0.01, 0.02, 0.05):
    noise = NoiseModel(p_depol_1q=p2 / 20, p_depol_2q=p2, p_readout_flip=0.02)
    est = [concurrence_from_counts(run_noisy(circ, None, 4096, noise, seed, qubits=[0]))
           for seed in range(5)]
    print(f"p_2q = {p2:.3f}   C at t = {t_peak:.3f}: {np.mean(est):.4f} +/- {np.std(est):.4f}")
