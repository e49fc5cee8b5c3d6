# The 3-qubit circuit with mid-circuit measurement and feed-forward, run in simulation.

# %%
from qsrecon import analysis

counts = analysis.run_experiment(shots=5000, seed=2024)
print("c2c1c0  count   freq")
print(analysis.format_histogram(counts))

# %% c2 is always 0 because the c2=1 amplitude vanishes on every branch
for b in analysis.experiment_branches():
    print(f"c0={b.c0} c1={b.c1}  P={b.probability:.3f}  max |amp(c2=1)|={b.c2_one_amplitude:.1e}")
