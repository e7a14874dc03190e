# ---
# jupyter:
#   jupytext:
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#       jupytext_version: 1.16.4
#   kernelspec:
#     display_name: Python 3 (ipykernel)
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Stability certificate for a tiny saddle system
#
# Two primal unknowns, one multiplier.  `a` is the identity, and the multiplier
# only talks to the second primal component through `b` and `d`.

# %%
import math

import numpy as np

from saddlecert import SaddleSystem, certify
from saddlecert.saddle import assemble

# %%
sys_ = SaddleSystem.from_matrices(
    np.eye(2), np.eye(2), np.eye(1), np.eye(1),
    np.eye(2), [[0.0], [1.0]], [[0.0, 1.0]],
)
assemble(sys_).mat

# %% [markdown]
# The certificate collects the three inf-sup constants, the norm of `a`, the
# lower bound `gamma` built from them, and the exact constant `gamma_true`
# (smallest singular value of the whitened block operator).

# %%
cert = certify(sys_)
for name in ("alpha", "beta", "delta", "norm_a", "nu", "gamma", "gamma_true"):
    print(f"{name:>10s}  {getattr(cert, name):.10f}")
print("certified:", cert.certified)

# %% [markdown]
# Closed forms: `nu = 1/sqrt5`, `gamma = 1/sqrt(11 + 2 sqrt5)`, and
# `gamma_true` is the inverse golden ratio.

# %%
print(cert.nu - 1 / math.sqrt(5))
print(cert.gamma - 1 / math.sqrt(11 + 2 * math.sqrt(5)))
print(cert.gamma_true - (math.sqrt(5) - 1) / 2)

# %% [markdown]
# The bound is pessimistic by a factor of about 2.4 here.  Killing `b` breaks the
# second inf-sup condition and the certificate says so.

# %%
broken = SaddleSystem.from_matrices(
    np.eye(2), np.eye(2), np.eye(1), np.eye(1),
    np.eye(2), [[0.0], [0.0]], [[0.0, 1.0]],
)
bad = certify(broken)
bad.certified, bad.reasons
