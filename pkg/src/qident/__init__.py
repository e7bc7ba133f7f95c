"""Exact truncated q-series and a verifier for Rogers-Ramanujan type identities."""

from .errors import *  # noqa: F401,F403
from .series import Monomial, QSeries
from .products import (
    FactorProduct,
    f_neg,
    false_theta,
    jacobi_triple_product,
    phi,
    poch_finite,
    poch_infinite,
    psi,
    quintuple_product,
    theta_f,
)
from .expr import expand, parse, render
from .bailey import LABELS, LEMMAS, apply_lemma, check_pair, make_pair, six_psi_six
from .multisum import MultisumSpec, a22_product, ag_product, bressoud_product, multisum, product_side
from .catalog import (
    Catalog,
    IdentityRecord,
    build_side,
    list_identities,
    recipe_check,
    specialize_qbailey,
    specialize_qgauss,
)
from .verifier import VerificationReport, verify, verify_all

__version__ = "0.1.0"
