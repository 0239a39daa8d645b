import numpy as np
import pytest

from fixtime.dynamics import make_system
from fixtime.gain_aut import make_aut_gain
from fixtime.gain_nonaut import make_nonaut_gain

POLY_BETA = dict(alpha=1.0, beta=2.0, p=0.5, q=2.0, k=1.0)


def poly_beta_system(**kw):
    return make_system(make_aut_gain("PolyBeta", POLY_BETA, "log1p"), **kw)


def exp_sqrt_system(**kw):
    return make_system(make_aut_gain("ExpSqrt", {}, "id"), **kw)


def sinusoid_system(**kw):
    return make_system(make_aut_gain("Sinusoid", {"alpha": 2.0}, "pow:0.5"), **kw)


def tbg_system(T_c=1.0, **kw):
    return make_system(make_nonaut_gain("TBG", {"alpha": 0.0}, "ramp", T_c=T_c), T_c=T_c, **kw)


def secant_system(T_c=1.0, **kw):
    return make_system(make_nonaut_gain("Secant", {}, "id", T_c=T_c), T_c=T_c, **kw)


def beta_inv_system(T_c=1.0, **kw):
    return make_system(make_nonaut_gain("BetaInv", POLY_BETA, "id", T_c=T_c), T_c=T_c, **kw)


AUT_SYSTEMS = {"poly_beta": poly_beta_system, "exp_sqrt": exp_sqrt_system,
               "sinusoid": sinusoid_system}
NONAUT_SYSTEMS = {"tbg": tbg_system, "secant": secant_system, "beta_inv": beta_inv_system}


@pytest.fixture(scope="session")
def aut_systems():
    return {k: f() for k, f in AUT_SYSTEMS.items()}


@pytest.fixture(scope="session")
def nonaut_systems():
    return {k: f() for k, f in NONAUT_SYSTEMS.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
