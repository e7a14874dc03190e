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
# # Command line round trip
#
# Everything on disk is Matrix Market plus a JSON manifest.

# %%
import json
import subprocess
import sys
import tempfile
from pathlib import Path

work = Path(tempfile.mkdtemp())


def saddlecert(*args):
    proc = subprocess.run([sys.executable, "-m", "saddlecert", *map(str, args)], capture_output=True, text=True)
    return proc.returncode, proc.stdout + proc.stderr


# %%
code, out = saddlecert("generate", "poisson1d", "--n", 8, "--refine", 16, "--eps", 0.1, "--out", work / "p")
print(code, sorted(p.name for p in (work / "p" / "coarse").iterdir()))

# %%
code, out = saddlecert("certify", work / "p" / "coarse" / "manifest.json")
print(code)
print(out)

# %%
code, out = saddlecert("bound", work / "p" / "coarse" / "manifest.json", "--format", "json")
print(code)
report = json.loads(out)
{k: report[k] for k in ("err_global", "bound_global", "err_primal", "bound_primal", "all_pass")}

# %% [markdown]
# Exit code 2 is reserved for bad input, 1 for a mathematical failure.

# %%
print(saddlecert("certify", work / "nowhere.json"))

# %%
code, out = saddlecert("selftest", "--count", 10)
print(code)
print(out)
