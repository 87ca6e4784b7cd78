"""End-to-end drivers from a wall description to discrete coefficients."""

from __future__ import annotations

import warnings

from .realization import (
    CtfSet,
    PoleSet,
    ResponseFactorSeq,
    assemble_ctf,
    find_poles,
    partial_fractions,
    response_factors,
)
from .stf import RationalSTF, chain_product, estimate_stf
from .wall import Construction

DEFAULT_DT = 3600.0
DEFAULT_ORDER = 6
DEFAULT_SERIES_ORDER = 20


def transfer_functions(
    c: Construction,
    order: int = DEFAULT_ORDER,
    series_order: int = DEFAULT_SERIES_ORDER,
) -> RationalSTF:
    """Rational transfer functions of a wall.

    A purely resistive stack has constant transfer functions; its moment
    system at any positive order is singular, so the order is forced to
    zero (with a warning) and everything downstream degenerates cleanly.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    if series_order < 2 * order:
        raise ValueError(
            f"series order {series_order} cannot support rational order {order} "
            f"(need >= {2 * order})"
        )
    effective = order
    if c.purely_resistive and order > 0:
        warnings.warn(
            f"wall {c.name!r} is purely resistive; using constant transfer functions",
            stacklevel=2,
        )
        effective = 0
    matrix = chain_product(c, series_order)
    return estimate_stf(matrix, effective)


def compute_ctf(
    c: Construction,
    dt: float = DEFAULT_DT,
    order: int = DEFAULT_ORDER,
    series_order: int = DEFAULT_SERIES_ORDER,
) -> CtfSet:
    """Conduction transfer function coefficients of a wall at timestep dt."""
    stf = transfer_functions(c, order, series_order)
    if stf.order == 0:
        poles = PoleSet(real=(), pairs=())
    else:
        poles = find_poles(stf.denominator)
    prf = {
        key: partial_fractions(stf.numerator(key), stf.denominator, poles)
        for key in ("x", "y", "z")
    }
    return assemble_ctf(prf["x"], prf["y"], prf["z"], dt)


def compute_response_factors(
    c: Construction,
    dt: float = DEFAULT_DT,
    count: int = 144,
    order: int = DEFAULT_ORDER,
    series_order: int = DEFAULT_SERIES_ORDER,
) -> ResponseFactorSeq:
    """First ``count`` thermal response factors of a wall at timestep dt."""
    return response_factors(compute_ctf(c, dt, order, series_order), count)
