"""
Two fluxons on a tight-binding lattice
======================================

Fluxons enter the square lattice through Peierls phases on a branch-cut
string. We measure the filled-sea energy of a pair versus separation, check
that a fluxon hidden in a particle-free hole feels nothing, and look at the
sign structure around a half fluxon.
"""

# %%
from fluxon import lattice

# %% [markdown]
# Pair interaction at quarter filling. L = 40 keeps this quick; the full
# L = 60 run lives in the acceptance tests.

# %%
for pair in ((0.5, 0.5), (0.2, 0.2)):
    curve = lattice.interaction_curve(40, pair, separations=range(1, 11))
    print(pair, "N =", curve.N)
    for a, w in zip(curve.separations, curve.w):
        print(f"   a = {a:2d}   W = {w:+.5f} t")
    print(f"   log fit slope {curve.fit.slope:+.4f}, r^2 = {curve.fit.r_squared:.3f}, "
          f"xi = {curve.xi_estimate:+.3f}")

# %% [markdown]
# W(a) of non-interacting fermions oscillates with the Fermi wavelength
# (Friedel oscillations), so no clean logarithm appears at these sizes.
#
# A fluxon inside a hole: every position in the hole gives the same
# energy, because moving it is a gauge transformation on the occupied sites.

# %%
L, radius = 30, 6.0
holes = lattice.disk_hole(L, L, radius)
model = lattice.build_lattice(L, L, holes=holes, fluxons=[((14, 14), 0.5)])
N = lattice.closed_shell_filling([lattice.spectrum(model)], model.n_sites // 4)
inside = lattice.hole_invariance_check(L, radius, [(14, 14), (13, 14), (12, 15)], N)
outside = lattice.position_dependence(L, radius, [(4, 14), (6, 20)], N)
print("inside the hole :", inside.max_difference)
print("immersed        :", outside.max_difference)

# %% [markdown]
# Half flux admits a real gauge. Any loop around a single half fluxon has
# link-sign product -1, so a real eigenfunction changes sign an odd number
# of times along it.

# %%
single = lattice.build_lattice(16, 16, fluxons=[((7, 7), 0.5)])
diag = lattice.null_line_diagnostic(single, eigen_index=0)
for loop in diag.loops:
    print(loop)
