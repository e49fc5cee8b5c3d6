# One share distribution, several secrets. Only the public randomizer s changes.

# %%
import numpy as np

from qsrecon import analysis, protocol, shares

rng = np.random.default_rng(7)
config = shares.split_secret(k_A=4, n=5, q=11, seed=rng)
print(config)

# %% four secrets, combiner role rotating Bob1..Bob4
secrets = [protocol.random_secret(rng) for _ in range(4)]
runs = protocol.run_multi_secret(config, secrets, randomizers=[1, 5, 7, 10], seed=3)
for t in runs:
    print(f"s={t.config['s']:2d} combiner={t.config['combiner']} fidelity={t.fidelity:.12f}")

# %% the announced angles differ between sessions even for the same outcomes
for t in runs:
    print(np.round(t.thetas(), 4))

# %% operation counts line up with the cost model
mul = sum(t.counters["mul"] for t in runs)
add = sum(t.counters["add"] for t in runs)
cc = analysis.computation_cost(analysis.CostModel.for_modulus(config.n, config.q, len(runs)))
print("multiplications", mul, "model", cc.total_multiplications)
print("additions      ", add, "model", cc.total_additions)
