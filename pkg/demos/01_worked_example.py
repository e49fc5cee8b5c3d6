# Three-party reconstruction, step by step.
# Alice encrypts, Bob1 and Bob2 hold shares, Charlie combines. q = 3.

# %%
import math

import numpy as np

from qsrecon import example, protocol
from qsrecon import statevec as sv

np.set_printoptions(precision=4, suppress=True)

# %% the secret and the angles everyone feeds in
print("secret      ", example.SECRET.amps)
print("phi_A       ", example.PHI_A / math.pi, "pi")
print("phi_1, phi_2", [p / math.pi for p in example.PHIS], "pi")
print("phi_C       ", example.PHI_C / math.pi, "pi")
print("masks       ", [w / math.pi for w in example.MASKS], "pi")

# %% replay with forced outcomes (0, 1); every row is the full 3-qubit register
rows, checks, thetas = example.replay()
for row, chk in zip(rows, checks):
    print(f"{row.label:42s} deviation from hand-derived state: {chk.literal_error:.1e}")
print("announced thetas:", [t / math.pi for t in thetas], "pi")

# %% the last qubit carries -|psi>, i.e. |psi> up to global phase
last = sv.drop_qubit(sv.drop_qubit(rows[-1].state, 0, sv.ket("+")), 0, sv.ket("-"))
print("recovered", last.amps, " fidelity", sv.fidelity_up_to_phase(last, example.SECRET))

# %% same thing through the full protocol (decoys, public board, lazy engine)
t = protocol.run_protocol(example.CONFIG, example.SECRET, seed=1)
print(t.verdict, t.fidelity)
for a in t.announcements:
    print(f"  #{a.seq} {a.party:7s} {a.kind:5s} {a.value}")
