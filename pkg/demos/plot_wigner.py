"""
Wigner functions of the three modes
===================================

A Gaussian state's Wigner function is fixed by its covariance matrix. The
squeezed membrane is narrow along X_b and the microwave mode is narrow
along Y_c, which is where the squeezing shows up.
"""

import numpy as np

from eomech import DriveConfig, SystemParams, reduced_cm, steady_state_report, wigner_single_mode

from _plotting import plt, save

params = SystemParams.reference_device()
rep = steady_state_report(params, DriveConfig.in_units_of_kappa(params, 1.0, 0.78, 0.8))
grid = np.linspace(-7, 7, 281)

fields = {}
for k, mode in enumerate("abc"):
    sigma = reduced_cm(rep.covariance, [k])
    field = wigner_single_mode(sigma, grid)
    fields[mode] = field
    var = np.diag(sigma.entries)
    print(f"mode {mode}: var X = {var[0]:.3f}, var Y = {var[1]:.3f}, "
          f"peak W = {field.peak()[2]:.4f}, integral = {field.integral():.4f}")

# %%
# The peak height is 1 / (2 pi sqrt(det V)), so it equals 1/pi only for a
# pure state. Thermal noise left in each mode lowers it.
print(f"pure-state peak 1/pi = {1 / np.pi:.4f}")

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax, (mode, field) in zip(axes, fields.items()):
        ax.contourf(field.x_grid, field.y_grid, field.values, levels=30)
        ax.set_aspect("equal")
        ax.set_title(f"mode {mode}")
        ax.set_xlabel("X")
        ax.set_ylabel("Y")
    save(fig, "wigner.png")
