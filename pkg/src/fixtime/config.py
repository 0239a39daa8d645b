"""JSON form of system specifications and the shipped example specs.

A spec file looks like::

    {"name": "fig1_left", "dim": 1, "T_c": 1.0, "t0": 0.0,
     "gain": {"kind": "autonomous", "family": "PolyBeta",
              "params": {"alpha": 1, "beta": 2, "p": 0.5, "q": 2, "k": 1},
              "shape": "log1p"},
     "base": {"kind": "Identity"},
     "x0_norms": [0.1, 1, 2, 1e10]}

``base`` may carry ``a`` (IdentityPlusRoot) or ``A`` (LinearMatrix, row
major).  ``name``, ``description`` and ``x0_norms`` are optional metadata.
"""

import json
import os
import tempfile
from importlib import resources

from .dynamics import SpecError, SystemSpec, make_system
from .gain_aut import make_aut_gain
from .gain_nonaut import DEFAULT_GAIN_CAP, make_nonaut_gain

__all__ = [
    "spec_from_dict",
    "spec_to_dict",
    "load_spec",
    "dump_spec",
    "shipped_specs",
    "shipped_path",
    "write_atomic",
]

_TOP_KEYS = {"name", "description", "dim", "T_c", "t0", "gain", "base", "x0_norms"}


def _gain_from_dict(d, T_c, gain_cap):
    if not isinstance(d, dict):
        raise SpecError("gain must be an object")
    kind = d.get("kind")
    family = d.get("family")
    params = d.get("params", {})
    if family is None:
        raise SpecError("gain.family is required")
    if kind == "autonomous":
        return make_aut_gain(family, params, d.get("shape", "id"))
    if kind == "nonautonomous":
        return make_nonaut_gain(family, params, d.get("eta", "id"), T_c=T_c, gain_cap=gain_cap)
    raise SpecError(f"gain.kind must be 'autonomous' or 'nonautonomous', got {kind!r}")


def spec_from_dict(d, gain_cap=DEFAULT_GAIN_CAP):
    """Build a :class:`SystemSpec` from its JSON object.

    Raises
    ------
    SpecError
        On unknown keys or missing fields.  Gain parameter violations raise
        ``GainValidationError``.
    """
    if not isinstance(d, dict):
        raise SpecError("spec must be a JSON object")
    unknown = set(d) - _TOP_KEYS
    if unknown:
        raise SpecError(f"unknown spec keys {sorted(unknown)}")
    if "gain" not in d:
        raise SpecError("spec.gain is required")
    T_c = float(d.get("T_c", 1.0))
    base = d.get("base", {"kind": "Identity"})
    if isinstance(base, str):
        base = {"kind": base}
    gain = _gain_from_dict(d["gain"], T_c, gain_cap)
    try:
        return make_system(gain, dim=d.get("dim", 1), T_c=T_c, base=base.get("kind", "Identity"),
                           t0=d.get("t0", 0.0), root_exp=base.get("a", 0.5), A=base.get("A"))
    except ValueError as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(str(exc)) from exc


def spec_to_dict(spec, **meta):
    """JSON object for ``spec``; ``meta`` adds name/description/x0_norms."""
    out = {k: v for k, v in meta.items() if v is not None}
    out.update(spec.to_dict())
    return out


def load_spec(path_or_name, gain_cap=DEFAULT_GAIN_CAP):
    """Read a spec file, or a shipped spec by name (``fig1_left``).

    Returns ``(spec, raw_dict)``.
    """
    path = str(path_or_name)
    if not os.path.exists(path):
        stem = os.path.basename(path)
        stem = stem[:-5] if stem.endswith(".json") else stem
        if stem in shipped_specs():
            path = shipped_path(stem)
        else:
            raise FileNotFoundError(f"no spec file {path_or_name!r}")
    with open(path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON ({exc})") from exc
    return spec_from_dict(raw, gain_cap), raw


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_spec(spec, path, **meta):
    write_atomic(path, json.dumps(spec_to_dict(spec, **meta), indent=2) + "\n")


def shipped_specs():
    """Names of the example specs bundled with the package."""
    files = resources.files("fixtime").joinpath("data")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def shipped_path(name):
    return str(resources.files("fixtime").joinpath("data", f"{name}.json"))
