"""
How strong is the topological force?
====================================

Evaluates the force per unit length between two half fluxons in CGS units
and compares it with the Casimir force between two wires.
"""

# %%
import numpy as np

from fluxon import analytic
from fluxon.units import CGS, PhysicalParams

params = PhysicalParams()

# %%
n3 = 1e19
for a_um in (1, 2, 5, 10):
    a = a_um * 1e-4
    print(f"a = {a_um:2d} um   F = {analytic.force_per_length(a, 1.0, n3, params):.3e} dyne/cm   "
          f"coarse form {analytic.force_per_length_coarse(a, n3, params):.3e}")

# %% [markdown]
# Ratio to the Casimir force hbar c / a^3 at one particle per Bohr volume.
# It grows as a^2 and passes one near 26 Bohr radii.

# %%
n_bohr = analytic.bohr_density()
for mult in (10, 26.4, 100, 1e3, 1e4):
    a = mult * CGS.bohr_radius
    c = analytic.casimir_ratio(a, n_bohr, params)
    print(f"a = {mult:8.1f} a0   rho = {c.ratio:.3e}   estimate = {c.estimate:.3e}")

# %% [markdown]
# Which pairs attract when the energy is quadratic in the folded flux?

# %%
grid = np.round(np.arange(0.05, 0.51, 0.05), 2)
for a1 in grid:
    row = "".join(analytic.pair_regime(a1, a2).kind.value[0].upper() for a2 in grid)
    print(f"{a1:4.2f}  {row}")
