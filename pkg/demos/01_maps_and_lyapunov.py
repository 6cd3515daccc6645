"""
Chaotic maps, orbits and Lyapunov spectra
=========================================

Iterate both maps, estimate their Lyapunov spectra and sweep a parameter to
see where the memristor map turns chaotic.
"""

import numpy as np

from chaoscipher.maps import Hyper3DParams, Mem2DParams, bifurcation_sweep, lyapunov_spectrum, orbit

# %%
# A single orbit of the 3D map from the default seed (0.1, 0.1, 0.1).
# The first 1000 steps are thrown away as transient.
orb3 = orbit("3d", Hyper3DParams(), n=20_000)
print("3D orbit range per component:")
for name in orb3.columns:
    col = orb3.component(name)
    print(f"  {name}: [{col.min():.3f}, {col.max():.3f}]")

# %%
# Lyapunov spectra. Positive exponents mean nearby orbits separate
# exponentially; two or more positive ones is hyperchaos.
for k in (0.5, 1.75, 1.76):
    spectrum = lyapunov_spectrum("2d", Mem2DParams(k), n=50_000)
    print(f"2D map, k={k}: " + ", ".join(f"{v:+.4f}" for v in spectrum.exponents))

spectrum3 = lyapunov_spectrum("3d", Hyper3DParams(), n=50_000)
print("3D map, reference set: " + ", ".join(f"{v:+.4f}" for v in spectrum3.exponents))

# %%
# At k=0.5 the top exponent is ~0, not negative: x = 0 is a whole line of
# fixed points, and motion along that line neither grows nor shrinks.

# %%
# Bifurcation sweep over k. Count distinct long-run x values per k: one value
# is a fixed point, a handful is a periodic orbit, hundreds is chaos.
sweep = bifurcation_sweep("2d", None, "k", (1.0, 1.76), steps=20, burn_in=5000, samples_per_value=200)
for k, row in zip(sweep.values, sweep.samples):
    distinct = len(np.unique(np.round(row, 6)))
    print(f"k={k:.3f}  distinct x values: {distinct}")

# %%
# Everything serializes for plotting elsewhere.
csv_text = sweep.to_csv()
print(csv_text.splitlines()[0], "...", len(csv_text.splitlines()) - 1, "rows")
