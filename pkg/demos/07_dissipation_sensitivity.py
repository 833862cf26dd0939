"""Fidelity evolution under intrinsic qubit decay and dephasing.

The pole target is the fixed point of qubit relaxation itself, so its
fidelity is untouched by gamma. Equator targets compete with relaxation
toward the pole: the curves saturate lower as gamma = Gamma/(2 Wbar) grows.
Measured coherence times put real hardware near gamma ~ 8e-5, far below
where the equator curves start to sag at the strong-cooling ratios used
here (eta = 1/9, zeta = 1/3).
"""

import math

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
    mixed_qubit_with_resonator,
    scenario_liouvillian,
    standard_observables,
    two_pi_mhz,
)

omega_bar = two_pi_mhz(100.0)
two_wbar = 2.0 * omega_bar
tau = np.linspace(0.0, 500.0, 200)          # dimensionless 2 Wbar t

fig, (ax_z, ax_x) = plt.subplots(1, 2, figsize=(10.5, 4.2), sharey=True)
for target, ax, label in ((TargetState(0.0, 0.0), ax_z, "pole target"),
                          (TargetState(math.pi / 2.0, math.pi), ax_x,
                           "equator target")):
    for gamma in (0.0, 0.01, 0.02, 0.05):
        system = SystemParams(
            omega_c=60.0 * omega_bar, omega_sc=60.0 * omega_bar,
            g=two_wbar / 9.0, kappa=two_wbar / 3.0,
            gamma_s=two_wbar * gamma, gamma_p=two_wbar * gamma,
            nbar=0.0, fock_cutoff=6,
        )
        drive, effective = design_drive(target, omega_bar, system)
        traj = evolve(scenario_liouvillian(system, drive),
                      mixed_qubit_with_resonator(system), tau / two_wbar,
                      standard_observables(effective, system.fock_cutoff))
        ax.plot(tau, traj.series["fidelity"], label=f"gamma = {gamma}")
        print(f"{label}, gamma={gamma}: endpoint fidelity "
              f"{traj.series['fidelity'][-1]:.5f}")
    ax.set_xlabel(r"$\tau = 2\bar\Omega t$")
    ax.set_title(label)
    ax.grid(alpha=0.3)

ax_z.set_ylabel("fidelity to target")
ax_x.legend()
fig.tight_layout()
out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)
fig.savefig(out_dir / "dissipation_sensitivity.png", dpi=160)
print(f"wrote {out_dir / 'dissipation_sensitivity.png'}")
