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
# # Error bounds for 1D mixed Poisson
#
# Fluxes are P1, the multiplier is P0, everything in L2.  A coarse mesh is nested
# inside a fine one, and the fine solution stands in for the exact one.

# %%
import numpy as np

from saddlecert import GeneratorSpec, certify, certify_bounds, gen_poisson1d, manufactured_load

# %%
pair = gen_poisson1d(GeneratorSpec(kind="poisson1d", n_coarse=8, n_fine=128))
f = manufactured_load(pair, "sine")
coarse = certify(pair.coarse)
print(f"gamma = {coarse.gamma:.4f}, gamma_true = {coarse.gamma_true:.4f}")

# %%
cert = certify_bounds(pair, f)
rows = [
    ("global", cert.err_global, cert.bound_global_true, cert.bound_global),
    ("primal", cert.err_primal, cert.bound_primal, None),
    ("multiplier", cert.err_mult, cert.bound_mult, None),
]
for name, err, bound, extra in rows:
    tail = f"  (formula gamma: {extra:.3e})" if extra is not None else ""
    print(f"{name:>10s}  err {err:.3e}  bound {bound:.3e}{tail}")

# %% [markdown]
# The kernels are nested, so the angle between them vanishes and the multiplier
# approximation drops out of the primal bound.

# %%
print("kernel angle:", cert.angle_RRt)
print("multiplier share of primal bound:", cert.bound_primal_mult_term / cert.bound_primal)

# %% [markdown]
# Refining the coarse mesh against a fixed fine mesh.

# %%
for n in (8, 16, 32, 64):
    p = gen_poisson1d(GeneratorSpec(kind="poisson1d", n_coarse=n, n_fine=256))
    c = certify_bounds(p, manufactured_load(p, "sine"))
    print(f"n={n:3d}  err_primal {c.err_primal:.3e}  err_mult {c.err_mult:.3e}  all_pass {c.all_pass}")
