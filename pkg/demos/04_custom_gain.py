"""A gain from any density, written out as a spec and run through the CLI.

compose_from_density turns a positive density F on (0, inf) and a
shaping function h into Phi(z) = F(h(z)) h'(z) / M.  The catalog
families have JSON forms; here one is saved to a file and certified by
the command-line tool.

Run:  python demos/04_custom_gain.py
"""

import os
import tempfile

import numpy as np

from fixtime import cli, compose_from_density, make_system, predict_settling
from fixtime.config import dump_spec, load_spec

# half-Cauchy density: heavy tail, so large starts still cost time
cauchy = compose_from_density(lambda w: 1.0 / (1.0 + w * w), "id")
print(f"half-Cauchy mass found by quadrature: {cauchy.mass:.12f} (pi/2 = {np.pi / 2:.12f})")
spec = make_system(cauchy, T_c=3.0)
for r in (1.0, 1e3):
    print(f"  settling from {r:g}: {predict_settling(spec, [r]):.6f}"
          f"  (closed form {3.0 * 2 / np.pi * np.arctan(r):.6f})")

spec, raw = load_spec("fig1_mid")
with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "my_system.json")
    dump_spec(spec, path, name="my_system", x0_norms=[0.5, 5.0, 50.0])
    print(f"\nwrote {os.path.basename(path)}; running 'fixtime sweep --spec {path}'")
    code = cli.run(["sweep", "--spec", path])
    print(f"exit code {code}")
