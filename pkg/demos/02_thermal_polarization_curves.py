"""Polarization curves for bath occupations from 0 to 0.5 photons.

The reduced rate model predicts -<sigma_Z>(t) = (1 - exp(-G(2n+1)t))/(2n+1)
from a maximally mixed start: a warm resonator polarizes faster but to a
lower ceiling. The full master equation at n = 0 is overlaid to show how
little the reduced model misses at the baseline hardware ratios.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fluxbath import (
    SystemParams,
    TargetState,
    design_drive,
    evolve,
    gamma_z,
    mixed_qubit_with_resonator,
    normalized_sigma_z,
    populations,
    scenario_liouvillian,
    standard_observables,
    two_pi_ghz,
    two_pi_mhz,
)

g, kappa = two_pi_mhz(2.0), two_pi_mhz(20.0)
rate = gamma_z(g, kappa, 0.0, 0.0)
tau = np.linspace(0.0, 6.0, 300)          # dimensionless G t

fig, ax = plt.subplots(figsize=(7, 4.5))
for nbar in (0.0, 0.1, 0.3, 0.5):
    p = populations(np.array([0.5, 0.5]), [(rate, 4)], tau / rate, nbar=nbar)
    ax.plot(tau, p[0] - p[1], label=f"n = {nbar}")
    print(f"nbar = {nbar}: ceiling 1/(2n+1) = {1.0 / (2 * nbar + 1):.4f}")

# full-model overlay at nbar = 0
system = SystemParams(omega_c=two_pi_ghz(6.0), omega_sc=two_pi_ghz(6.0),
                      g=g, kappa=kappa, nbar=0.0)
drive, target = design_drive(TargetState(0.0, 0.0), two_pi_mhz(100.0), system)
traj = evolve(scenario_liouvillian(system, drive),
              mixed_qubit_with_resonator(system),
              tau / rate, standard_observables(target, system.fock_cutoff))
ax.plot(tau, normalized_sigma_z(traj), "k--", lw=1.0, label="full model, n = 0")

ax.set_xlabel(r"dimensionless time $\Gamma t$")
ax.set_ylabel(r"$-\langle\sigma_Z\rangle$")
ax.set_title("Polarization toward the target for increasing bath occupation")
ax.legend()
ax.grid(alpha=0.3)
fig.tight_layout()
out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
fig.savefig(out_dir / "thermal_polarization.png", dpi=160)
print(f"wrote {out_dir / 'thermal_polarization.png'}")
