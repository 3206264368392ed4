"""
Squeezing of the mechanical and microwave modes
===============================================

Two optical tones on the red and blue sidebands cool a Bogoliubov mode of
the membrane, which leaves the membrane squeezed. A microwave circuit
coupled to the same membrane inherits the squeezing. Here we solve the
steady state at the known optimum and then map the squeezing of the
microwave phase quadrature over the drive ratio and the electromechanical
coupling.
"""

import numpy as np

from eomech import DriveConfig, SystemParams, steady_state_report
from eomech.sweep import figure_preset, run_sweep

from _plotting import plt, save

# %%
# Default device: 10 MHz membrane, 10 GHz circuit, kappa_a = 0.08 omega_m,
# kappa_c = 0.005 omega_m, Q = 5e4 and a 15 mK fridge.
params = SystemParams.reference_device()
drives = DriveConfig.in_units_of_kappa(params, g_minus=1.0, g_plus=0.78, g_c=0.6)
rep = steady_state_report(params, drives)

print(f"stable: {rep.stable}")
print(f"membrane X_b squeezing: {rep.s_b:.2f} dB")
print(f"microwave Y_c squeezing: {rep.s_c:.2f} dB")
print(f"Bogoliubov mode occupation: {rep.bogoliubov_occupation:.3f}")

# %%
# The full table of quadrature squeezing. Negative numbers are noise above
# vacuum; the conjugate quadratures pay for the squeezed ones.
for label, value in rep.squeezing.items():
    print(f"  {label}: {value:+7.2f} dB")

# %%
# Map S_c over (G+/G-, G_c/kappa_a). A coarse grid keeps the demo quick;
# ``eomech sweep --figure fig2a`` runs the 101 x 101 version.
result = run_sweep(figure_preset("fig2a", resolution=41))
s_c = result["s_c"]
i, j = np.unravel_index(int(np.ma.argmax(s_c)), s_c.shape)
print(f"best S_c = {s_c[i, j]:.2f} dB at G+/G- = {result.grids[0][i]:.2f}, G_c = {result.grids[1][j]:.2f} kappa_a")

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    mesh = ax.pcolormesh(result.grids[1], result.grids[0], s_c, shading="auto", cmap="viridis")
    ax.set_xlabel("G_c / kappa_a")
    ax.set_ylabel("G+ / G-")
    fig.colorbar(mesh, label="S_c (dB)")
    save(fig, "squeezing_map.png")
