"""Tour of the finite-alphabet probability toolkit.

Builds a small joint source, composes auxiliary channels onto it, and
verifies the textbook identities (chain rule, data processing, Mrs. Gerber)
numerically.
"""

import numpy as np

from ibreg import (
    BinaryModel,
    Channel,
    JointPmf,
    compose_markov,
    conditional_mutual_information as cmi,
    entropy,
    gerber_bound,
    h2,
    mutual_information as mi,
)

# ---------------------------------------------------------------------------
# A doubly symmetric binary source with a hidden variable:
#   X2 ~ Bern(1/2),  X1 = X2 xor Bern(0.1),  Y = X1 xor Bern(0.1)
# ---------------------------------------------------------------------------
model = BinaryModel(p=0.1, q=0.1)
src = model.half_round_source()
print("source axes:", src.axis_names)
print(f"H(X1)       = {entropy(src, ['x1']):.6f} bits")
print(f"H(X1|X2)    = h2(0.1) = {h2(0.1):.6f} bits")
print(f"I(X1;Y|X2)  = {cmi(src, ['x1'], ['y'], ['x2']):.6f} bits")
print(f"I(X2;Y|X1)  = {cmi(src, ['x2'], ['y'], ['x1']):.6f}  (Markov chain: zero)")

# ---------------------------------------------------------------------------
# Compose a binary symmetric test channel U = X1 xor Bern(r) onto the source.
# The marginal on the original axes is preserved and U is conditionally
# independent of everything else given X1.
# ---------------------------------------------------------------------------
u = Channel.bsc("x1", "u", 0.2)
joint = compose_markov(src, u)
print("\nafter composing U = X1 xor Bern(0.2):", joint.axis_names)
print(f"I(U;X1)          = {mi(joint, ['u'], ['x1']):.6f} bits")
print(f"I(U;X2,Y | X1)   = {cmi(joint, ['u'], ['x2', 'y'], ['x1']):.2e}  (zero by construction)")

# chain rule on the composed joint
lhs = mi(joint, ["u"], ["x2", "y"])
rhs = mi(joint, ["u"], ["x2"]) + cmi(joint, ["u"], ["y"], ["x2"])
print(f"chain rule: I(U;X2Y) = {lhs:.9f} vs I(U;X2)+I(U;Y|X2) = {rhs:.9f}")

# ---------------------------------------------------------------------------
# Mrs. Gerber's lemma lower-bounds the conditional output entropy of a BSC by
# h2(h2_inv(H) * p); with H = H(X1|U,X2) the bound is tight for BSC channels.
# ---------------------------------------------------------------------------
h_in = entropy(joint, ["x1", "u", "x2"]) - entropy(joint, ["u", "x2"])
h_out = entropy(joint, ["y", "u", "x2"]) - entropy(joint, ["u", "x2"])
print(f"\nH(X1|U,X2) = {h_in:.6f},  H(Y|U,X2) = {h_out:.6f}")
print(f"Mrs. Gerber bound: {gerber_bound(h_in, model.p):.6f}  (<= H(Y|U,X2))")

# ---------------------------------------------------------------------------
# JSON round trip of the joint table
# ---------------------------------------------------------------------------
clone = JointPmf.from_json(joint.to_json())
print("\nJSON round trip max deviation:",
      float(np.abs(clone.table - joint.table).max()))
