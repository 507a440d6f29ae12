# %% [markdown]
# # Doppler-broadened one-photon spectrum
#
# A weak single-frequency field scanned from the F = 2 ground level across
# both excited hyperfine levels, averaged over a 400 MHz Doppler profile. The
# two lines, 812 MHz apart, remain resolved.

# %%
import numpy as np

from cptsim import get_atom, one_photon_spectrum

rb87 = get_atom("rb87")
det = np.linspace(-1.0e9, 2.0e9, 151)

# %%
bare = one_photon_spectrum(rb87, 2, det)
broad = one_photon_spectrum(rb87, 2, det, doppler_fwhm=400e6)
for d, a, b in list(zip(det, bare, broad))[::10]:
    print(f"{d / 1e6:8.0f} MHz   {a:10.4g}   {b:10.4g}")

# %%
peaks = [i for i in range(1, len(broad) - 1) if broad[i] > broad[i - 1] and broad[i] >= broad[i + 1]]
print("peaks at", [det[i] / 1e6 for i in peaks], "MHz")
print("valley / peak", broad[peaks[0]:peaks[-1]].min() / broad[peaks].min())
