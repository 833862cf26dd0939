"""Polarization times for the three cardinal targets, two ways.

The reduced model gives 1/rate = kappa (kappa^2 + 4 D^2) ... collapsing to
kappa/(4 g^2) for the z pole and kappa/g^2 on the equator; an exponential
fit to the full master equation confirms both within a few percent at the
baseline ratios g : kappa : 2 Wbar = 2 : 20 : 200 (2pi MHz).
"""

from fluxbath import SystemParams, table1_report, two_pi_ghz, two_pi_mhz

system = SystemParams(
    omega_c=two_pi_ghz(6.0),
    omega_sc=two_pi_ghz(6.0),
    g=two_pi_mhz(2.0),
    kappa=two_pi_mhz(20.0),
    nbar=0.0,
)

rows = table1_report(system, workers=3)
print(f"{'axis':>4s} {'reduced model (us)':>20s} {'full model fit (us)':>20s} {'ratio':>7s}")
for row in rows:
    print(f"{row.axis:>4s} {row.t_reduced * 1e6:20.4f} "
          f"{row.t_simulated * 1e6:20.4f} {row.ratio:7.3f}")

print("\nheating the bath to n = 0.5 halves every time constant (rate x (2n+1));")
warm = table1_report(SystemParams(
    omega_c=two_pi_ghz(6.0), omega_sc=two_pi_ghz(6.0),
    g=two_pi_mhz(2.0), kappa=two_pi_mhz(20.0), nbar=0.5,
), tcl_only=True)
for row in warm:
    print(f"{row.axis:>4s} {row.t_reduced * 1e6:20.4f}")
