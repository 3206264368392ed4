"""
Entanglement and one-way steering between light and membrane
============================================================

With a weaker red tone (G- = 0.2 kappa_a) and a blue tone that can exceed
it, the optical and mechanical modes become entangled. Gaussian steering
then appears in one direction only: the membrane can steer the light but
not the other way round.
"""

import dataclasses

import numpy as np

from eomech import DriveConfig, SystemParams, steady_state_report
from eomech.sweep import figure_preset, run_sweep

from _plotting import plt, save

params = SystemParams.reference_device()

# %%
# A single point inside the one-way region.
rep = steady_state_report(params, DriveConfig.in_units_of_kappa(params, 0.2, 0.23, 0.08))
print(f"EN_ab = {rep.en_ab:.4f}  ST_ab = {rep.st_ab:.4f}  ST_ba = {rep.st_ba:.4f}")

# %%
# Along the drive ratio, entanglement sets in first and steering from b to a
# follows. Past a threshold ratio the blue tone wins and the system is
# unstable; those points are masked.
spec = dataclasses.replace(figure_preset("fig6a", resolution=201), observables=("en_ab", "st_ab", "st_ba"))
result = run_sweep(spec)
ratio = result.grids[0]
unstable = ratio[~result.stable]
print(f"unstable from G+/G- = {unstable.min():.2f}" if unstable.size else "stable everywhere")
print(f"max ST_ab over the sweep: {np.ma.max(result['st_ab']):.3g}")

# %%
# At fixed G+/G- = 1.15 and G_c = 0.4 kappa_a, steering peaks at an
# intermediate G- and disappears for strong drives.
g_sweep = run_sweep(figure_preset("fig6b", resolution=201))
k = int(np.ma.argmax(g_sweep["st_ba"]))
print(f"ST_ba peaks at {g_sweep['st_ba'][k]:.4f} for G- = {g_sweep.grids[0][k]:.3f} kappa_a")

# %%
# Raising the temperature shrinks the steerable region.
fig7 = run_sweep(figure_preset("fig7", resolution=61))
temps = fig7.grids[1]
ceiling = max(T for j, T in enumerate(temps) if np.ma.any(fig7["st_ba"][:, j] > 0))
print(f"ST_ba survives up to about {ceiling * 1e3:.0f} mK")

if plt is not None:
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.5))
    for name in ("en_ab", "st_ab", "st_ba"):
        axes[0].plot(ratio, result[name], label=name)
    axes[0].set_xlabel("G+ / G-")
    axes[0].legend()
    axes[1].plot(g_sweep.grids[0], g_sweep["st_ba"])
    axes[1].set_xlabel("G- / kappa_a")
    axes[1].set_ylabel("ST_ba")
    mesh = axes[2].pcolormesh(temps * 1e3, fig7.grids[0], fig7["st_ba"], shading="auto")
    axes[2].set_xlabel("T (mK)")
    axes[2].set_ylabel("G+ / G-")
    fig.colorbar(mesh, ax=axes[2], label="ST_ba")
    save(fig, "entanglement_steering.png")
