"""Shared helper: matplotlib is optional, figures go to demos/output/."""

import os
from pathlib import Path

OUT = Path(os.environ.get("EOMECH_DEMO_OUT", Path(__file__).parent / "output"))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # numbers are still printed
    plt = None


def save(fig, name):
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    fig.tight_layout()
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print(f"saved {path}")
