# Distribution and computation cost as the number of shared states grows.

# %%
from qsrecon import analysis

for m in (1, 2, 10, 100, 10_000):
    model = analysis.CostModel(n=10, m=m, share_bits=32)
    cc = analysis.computation_cost(model)
    print(f"m={m:6d}  DC={float(analysis.distribution_cost(model)):10.4f} bits/state"
          f"  mults/angle={float(cc.multiplications_per_angle):.4f}  adds/state={cc.additions_per_state}")

# %%
print(analysis.format_table(analysis.comparison_table(analysis.CostModel(n=10, m=100, share_bits=32))))
