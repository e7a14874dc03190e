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
# # Perturbing the test space
#
# Each coarse test function gets a bubble added on one side, with weight `eps`.
# That makes `a` nonsymmetric, so trial and test spaces really differ.

# %%
import numpy as np

from saddlecert import GeneratorSpec, certify, certify_bounds, gen_poisson1d, manufactured_load

# %%
for eps in (0.0, 0.05, 0.1, 0.2, 0.3, 0.4):
    pair = gen_poisson1d(GeneratorSpec(kind="poisson1d", n_coarse=8, n_fine=128, eps=eps))
    cert = certify(pair.coarse)
    A = pair.coarse.a.mat
    skew = np.abs(A - A.T).max()
    bounds = certify_bounds(pair, manufactured_load(pair, "sine"))
    print(f"eps={eps:.2f}  |A-A^T|={skew:.2e}  alpha={cert.alpha:.4f}  gamma={cert.gamma:.4f}  "
          f"gamma_true={cert.gamma_true:.4f}  bounds hold: {bounds.all_pass}")

# %% [markdown]
# `gamma_true` barely moves, and the certificate survives across the whole range.
