# %% [markdown]
# # Dark and trap states of the D1 line
#
# A ground-state superposition is dark when the light-atom coupling
# annihilates it. For two-photon detuning tuned to a pair of ground
# sublevels, the null space of the coupling restricted to that pair counts the
# stationary dark states. Single ground sublevels with no excited partner are
# trap states.

# %%
import numpy as np

from cptsim import (
    build_level_set,
    construct_dark_pm,
    get_atom,
    preset,
    stationary_dark_states,
    trap_states,
)

rb87 = get_atom("rb87")
rabi = 2 * np.pi * 1e6

# %% [markdown]
# ## Parallel linear polarizations through F_e = 1
#
# Each excited sublevel connects to two ground sublevels per manifold, and the
# (-1, +1) and (+1, -1) pairs each carry one stationary dark state.

# %%
lv1 = build_level_set(rb87, 1, 0.15)
field = preset("lin_par_lin", rabi, rabi)
print(stationary_dark_states(lv1, field, "mirror").to_text())

# %% [markdown]
# Every Lambda-connected pair, including the (+-1, +-1) pairs:

# %%
auto = stationary_dark_states(lv1, field, "auto")
for pair, flag in auto.pair_flags.items():
    print(pair, flag)

# %% [markdown]
# ## Closed form against the null space
#
# The analytic dark state for the (-1, +1) pair matches the numerical
# null-space vector up to a phase.

# %%
rep = stationary_dark_states(lv1, field, pair=(-1, 1))
v = construct_dark_pm(lv1, field, "+")
print("overlap", abs(np.vdot(rep.dark_states[0], v)))
print("amplitudes", np.round(v, 4))

# %% [markdown]
# ## Circular polarizations through F_e = 2
#
# |2, +2> has no sigma+ partner in F_e = 2 and collects population.

# %%
lv2 = build_level_set(rb87, 2, 0.15)
sigma = preset("sigma_sigma", rabi, rabi)
print([(str(t.F), str(t.m)) for t in trap_states(lv2, sigma)])
print(stationary_dark_states(lv2, sigma, "auto").to_text())
