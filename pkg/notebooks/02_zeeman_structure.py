# %% [markdown]
# # Ground-state Zeeman structure
#
# Breit-Rabi energies set where each two-photon resonance sits. The pairs
# (-1, +1) and (+1, -1) shift apart linearly through the nuclear g-factor and
# share a quadratic shift with the clock pair (0, 0).

# %%
import numpy as np

from cptsim import MU_B_HZ_PER_GAUSS, get_atom, lande_g, pair_resonance_frequency

rb87 = get_atom("rb87")

# %%
for F, manifold in ((2, "ground"), (1, "ground"), (1, "excited")):
    print(f"g_F({manifold} F={F}) = {lande_g(F, manifold, rb87):.5f}")

# %% [markdown]
# ## Pair resonances versus field

# %%
B = np.array([0.0, 0.15, 0.5, 1.0, 2.0])
print("B/G   nu(0,0)-hfs   nu(-1,+1)-hfs   nu(+1,-1)-hfs   (Hz)")
for b in B:
    row = [pair_resonance_frequency(rb87, ml, mu, b) - rb87.hfs_ground for ml, mu in ((0, 0), (-1, 1), (1, -1))]
    print(f"{b:4.2f}  " + "  ".join(f"{v:13.2f}" for v in row))

# %% [markdown]
# ## Linear splitting and quadratic coefficients
#
# The splitting of the two pairs is exactly 4 g_I mu_B B, so each pair sits
# 2 |g_I| mu_B B from their mean.

# %%
print("separation slope, Hz/G:", 4 * rb87.nuclear_gI * MU_B_HZ_PER_GAUSS)
Bfit = np.linspace(0, 1, 21)
c00 = np.polyfit(Bfit, pair_resonance_frequency(rb87, 0, 0, Bfit), 2)[0]
cpm = np.polyfit(Bfit, pair_resonance_frequency(rb87, -1, 1, Bfit), 2)[0]
print(f"quadratic coefficients: {c00:.2f} and {cpm:.2f} Hz/G^2, ratio {c00 / cpm:.4f}")
