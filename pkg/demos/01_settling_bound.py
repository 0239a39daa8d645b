"""Autonomous gains: the settling time is bounded by T_c for every start.

Each catalog gain is a probability density Phi on [0, inf).  The system
dx/dt = -(1/T_c) (Phi(|x|) |x|)^{-1} x reaches the origin at
T_c * int_0^|x0| Phi, so unit mass caps the settling time at T_c no
matter how far away the state starts.

Run:  python demos/01_settling_bound.py
"""

from fixtime import certify_settling, least_ubst_sweep, load_spec
from fixtime.gain_aut import normalization

NORMS = [0.1, 1.0, 2.0, 1e3, 1e10]

for name in ["fig1_left", "fig1_mid", "fig1_right"]:
    spec, raw = load_spec(name)
    mass = normalization(spec.gain).value
    print(f"{name}: {raw['description']}")
    print(f"  total mass of Phi = {mass:.12f}")
    print(f"  {'|x0|':>8} {'predicted':>10} {'simulated':>10} {'gap':>9}")
    for r in NORMS:
        rep = certify_settling(spec, [r])
        print(f"  {r:>8.3g} {rep.predicted:>10.6f} {rep.observed:>10.6f} {rep.abs_gap:>9.1e}")
    sweep = least_ubst_sweep(spec, NORMS)
    print(f"  monotone in |x0|: {sweep.monotone_ok}; T_c - sup = {sweep.sup_gap:.2e}\n")

# the log1p shape in fig1_left stretches the tail so much that even
# |x0| = 1e10 leaves about 1% of the mass unused
