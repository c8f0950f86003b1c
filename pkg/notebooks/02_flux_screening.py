"""
Screening of a fluxon by the charged medium
===========================================

Particles circulating around a fluxon carry a current that produces a
field opposing the bare flux. The enclosed unscreened flux alpha(r) obeys
u'' - u'/r - u/lambda^2 = 0, solved by alpha0 (r/lambda) K1(r/lambda).
"""

# %%
import numpy as np
from scipy.special import k1

from fluxon import screening

# %%
n3 = 1e25  # cm^-3
params = screening.ScreeningParams(alpha0=0.5, density3d=n3)
prof = screening.solve_profile(params)
lam = prof.decay_length
print(f"decay length lambda = {lam / screening.ANGSTROM:.2f} A")

# %% [markdown]
# The solver against the closed form.

# %%
x = prof.radii / lam
for target in (0.01, 0.1, 1.0, 3.0, 10.0):
    i = int(np.argmin(np.abs(x - target)))
    print(f"r = {x[i]:7.3f} lambda   alpha = {prof.alpha_of_r[i]:.8f}   "
          f"exact = {0.5 * x[i] * k1(x[i]):.8f}")

# %% [markdown]
# Three length scales come out of one profile:
#
# * the step radius 2 lambda, inside which a uniform current would cancel
#   the flux exactly;
# * a plain exponential fit to the tail, which the sqrt(r) prefactor of K1
#   pushes about 7% above lambda;
# * the decay rate with that prefactor divided out, which recovers lambda.

# %%
print(f"step radius          {prof.lambda_closed / screening.ANGSTROM:8.2f} A")
print(f"exponential tail fit {prof.lambda_fit / screening.ANGSTROM:8.2f} A")
print(f"corrected decay rate {prof.lambda_decay / screening.ANGSTROM:8.2f} A")
print(f"rounded 150 A rule   {screening.rounded_screening_length(n3) / screening.ANGSTROM:8.2f} A")

# %%
report = screening.consistency_check(prof)
print(report)
print("truncated at 2 lambda:", screening.consistency_check(prof.truncated(2 * lam)).messages)

# %% [markdown]
# Metals sit near n = 3e22 cm^-3.

# %%
print(f"{screening.screening_length_closed_form(3e22) * 1e4:.3f} micron")
