"""
How much heat the squeezing tolerates
=====================================

The thermal phonon number of a 10 MHz membrane grows quickly with
temperature, so the cooled Bogoliubov mode heats up and the squeezing
fades. A warmer bath also favours a weaker blue tone.
"""

import numpy as np

from eomech.sweep import figure_preset, run_sweep

from _plotting import plt, save

# %%
# Sweep G+/G- at three bath temperatures for both modes.
curves = {}
for name, label in (("fig4a", "s_b"), ("fig4b", "s_c")):
    result = run_sweep(figure_preset(name, resolution=201))
    curves[label] = result
    for k, T in enumerate(result.grids[0]):
        row = result[label][k]
        best = int(np.ma.argmax(row))
        print(f"{label} at {T * 1e3:5.0f} mK: peak {row[best]:5.2f} dB at G+/G- = {result.grids[1][best]:.3f}")

# %%
# Even at 180 mK both modes stay below vacuum noise at the best ratio.
if plt is not None:
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
    for ax, (label, result) in zip(axes, curves.items()):
        for k, T in enumerate(result.grids[0]):
            ax.plot(result.grids[1], result[label][k], label=f"{T * 1e3:.0f} mK")
        ax.axhline(0, color="k", lw=0.5)
        ax.set_xlabel("G+ / G-")
        ax.set_title(label)
    axes[0].set_ylabel("squeezing (dB)")
    axes[0].legend()
    save(fig, "temperature.png")
