"""Polarization-rate landscape over sideband detuning and target latitude.

In units of g^2/kappa the rate is (1 + cos theta)^2 / (1 + 4 (D/kappa)^2):
a Lorentzian of width kappa in the sideband detuning, peaking at 4 for the
pole target and falling to zero at theta = pi (where the antipodal matching
takes over).
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

delta_over_kappa = np.linspace(-4.0, 4.0, 161)
theta = np.linspace(0.0, np.pi, 161)
dd, tt = np.meshgrid(delta_over_kappa, theta, indexing="ij")
rate = (1.0 + np.cos(tt)) ** 2 / (1.0 + 4.0 * dd ** 2)

fig, ax = plt.subplots(figsize=(6.5, 4.8))
image = ax.pcolormesh(dd, tt, rate, cmap="viridis", shading="auto")
fig.colorbar(image, ax=ax, label=r"rate in units of $g^2/\kappa$")
ax.set_xlabel(r"$\Delta/\kappa$")
ax.set_ylabel(r"$\theta$")
ax.set_title("Polarization rate vs sideband detuning and target latitude")
fig.tight_layout()
out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
fig.savefig(out_dir / "rate_landscape.png", dpi=160)

peak = rate.max()
print(f"peak rate {peak:.3f} g^2/kappa at Delta = 0, theta = 0 (expected 4)")
print(f"wrote {out_dir / 'rate_landscape.png'}")
