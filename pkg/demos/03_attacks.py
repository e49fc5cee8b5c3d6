# What the adversaries in the threat model can and cannot get.

# %%
import math

from qsrecon import attacks, example
from qsrecon import statevec as sv

config, psi = example.CONFIG, example.SECRET

# %% combiner publishes fake outcomes and strips the masks off
stripped, rep = attacks.combiner_fake_attack(config, [1, 1], masks=list(example.MASKS), seed=0)
for name, st, p0, g in zip(rep.targets, stripped, rep.z_probabilities, rep.guess_probabilities):
    print(f"{name}: Z-basis P(0) = {p0:.3f}, best single-copy guess between shares = {g:.3f}")
# Z measurement says nothing, but one copy is still partly distinguishable:
print("pi/3 vs 2pi/3:", attacks.helstrom_distinguishability(math.pi / 3, 2 * math.pi / 3))

# %% every shareholder except the combiner pools their angles
rep = attacks.collusion_one(config, psi)
print("colluders' fidelity with the secret:", round(rep.fidelity, 6))
# an X eigenstate slips through regardless of phi_C
print("with |+> as secret:", attacks.collusion_one(config, sv.ket("+")).fidelity)

# %% only Bob1 is honest
rep = attacks.collusion_two(config, 1, seed=0)
print("max pairwise guess over Z_3:", rep.extra["max_pairwise_guess"])

# %% intercept-resend on the quantum channel
rep = attacks.external_attack(config, psi, decoys=64, trials=300, seed=0)
print("abort rate:", rep.detection["abort_rate"])
