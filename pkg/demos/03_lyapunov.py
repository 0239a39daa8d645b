"""Lyapunov certificates along simulated trajectories.

The decay dV/dt <= -(1/T_c) Psi H(V) is checked by finite differences
on the recorded samples and reported relative to the local rate, so 0
means equality and negative values mean faster decay than required.
For a linear base dx/dt = -Ax the certificate is V = sqrt(x'Px) with
A'P + PA = I.  The converse construction rebuilds V = |x| from the
settling-time function alone.

Run:  python demos/03_lyapunov.py
"""

import numpy as np

from fixtime import (IntegratorConfig, converse_lyapunov, integrate, load_spec,
                     lyapunov_check, lyapunov_solve, make_system)

tight = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)

for name in ["fig1_left", "fig1_mid", "fig1_right", "fig2_tbg", "fig2_sec"]:
    spec = load_spec(name)[0]
    rep = lyapunov_check(spec, integrate(spec, [2.0], tight))
    print(f"{name:<10} samples {rep.samples:>4}  worst violation {rep.max_violation:+.1e}"
          f"  |residual| {rep.max_residual:.1e}")

A = np.array([[1.0, 1.0], [-1.0, 1.0]])
P = lyapunov_solve(A)
print("\nA = I + S with S skew:  P =", np.array2string(P, precision=6).replace("\n", ""))
spec = make_system(load_spec("fig1_mid")[0].gain, dim=2, base="LinearMatrix", A=A)
traj = integrate(spec, [1.0, -0.5], tight)
rep = lyapunov_check(spec, traj)
print(f"spiral into the origin in {traj.settling_time:.6f}, residual {rep.max_residual:.1e}")

spec = load_spec("fig1_left")[0]
print("\nconverse Lyapunov function against |x|:")
for x in (0.1, 1.0, 10.0):
    print(f"  V({x:>4}) = {converse_lyapunov(spec, [x]):.12f}")
