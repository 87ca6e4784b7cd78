"""Built-in benchmark walls with published reference results.

Three constructions that appear repeatedly in the response-factor
literature are embedded here together with the tabulated values reported
for them, so the regression suite and the CLI can exercise the full
pipeline without external data files.  All reference numbers are stored
exactly as printed in their sources (one corrected misprint is noted
inline).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidConstructionError
from .wall import Construction, MassiveLayer, ResistanceLayer


@dataclass(frozen=True)
class ExpectedResults:
    """Pinned reference values for one catalog wall.

    Only the fields relevant to a given wall are populated.  ``ctf`` maps
    a time step to coefficient rows ('a'/'b'/'c'/'d', ascending k) at
    order ``ctf_order``; ``row_sums`` holds tabulated coefficient-row
    sums; ``cross_factors`` is a published Y sequence at Δt = 3600 s and
    order ``factors_order``; ``truncation_l2`` maps retained-term counts
    to L2 error fractions of the truncated-factor transfer function;
    ``ztf_l2`` maps time steps to L2 error fractions of the coefficient
    transfer function.
    """

    u_value: float | None = None
    ctf_order: int | None = None
    ctf: dict[float, dict[str, tuple[float, ...]]] = field(default_factory=dict)
    row_sums: dict[str, float] = field(default_factory=dict)
    factors_order: int | None = None
    cross_factors: tuple[float, ...] = ()
    truncation_l2: dict[int, float] = field(default_factory=dict)
    ztf_l2: dict[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    construction: Construction
    source: str
    expected: ExpectedResults


# ---------------------------------------------------------------------------
# Brick/cavity wall: a UK benchmark stack, outermost layer first.

_BRICK_CAVITY = Construction(
    name="brick-cavity",
    layers=(
        ResistanceLayer(0.060),                      # outside surface film
        MassiveLayer(0.105, 0.840, 1700.0, 800.0),   # brickwork
        ResistanceLayer(0.180),                      # air cavity
        MassiveLayer(0.100, 1.630, 2300.0, 1000.0),  # heavyweight concrete
        ResistanceLayer(0.120),                      # inside surface film
    ),
)

_BRICK_EXPECTED = ExpectedResults(
    ctf_order=5,
    ctf={
        3600.0: {
            "a": (9.547772, -18.534215, 10.584111, -1.585679, 0.065340, -0.000761),
            "b": (0.000179, 0.013914, 0.043449, 0.018001, 0.001021, 0.000005),
            "c": (6.953532, -12.228572, 5.995942, -0.665431, 0.021226, -0.000128),
            "d": (1.000000, -1.621649, 0.727483, -0.065668, 0.001670, -0.000004),
        }
    },
    row_sums={"a": 0.076568, "b": 0.076568, "c": 0.076568, "d": 0.041833},
)

# ---------------------------------------------------------------------------
# Heavyweight wall reported as common in Chinese construction; its first
# 72 cross response factors (Δt = 3600 s, order 6) are tabulated in the
# CDSE column of the comparison study reproduced below.

_HEAVYWEIGHT_CN = Construction(
    name="heavyweight-cn",
    layers=(
        ResistanceLayer(0.0538),                     # outside surface film
        MassiveLayer(0.370, 0.814, 1800.0, 879.0),   # common brick
        MassiveLayer(0.100, 0.209, 600.0, 837.0),    # foam concrete
        MassiveLayer(0.025, 0.163, 400.0, 2093.0),   # wood wool board
        MassiveLayer(0.020, 0.814, 1600.0, 837.0),   # stucco
        ResistanceLayer(0.1147),                     # inside surface film
    ),
)

_HEAVYWEIGHT_Y = (
    -0.0000263957, 0.0000675681, -0.0000468852, 0.0000004003,
    0.0001465373, 0.0006073107, 0.0016778107, 0.0033991044,
    0.0055920679, 0.0079971773, 0.0103774754, 0.0125625475,
    0.0144529693, 0.0160069035, 0.0172224324, 0.0181219045,
    0.0187402231, 0.0191169751, 0.0192915961, 0.0193006888,
    0.0191767574, 0.0189478135, 0.0186374833, 0.0182653747,
    0.0178475567, 0.0173970623, 0.0169243691, 0.0164378325,
    0.0159440641, 0.0154482543, 0.0149544418, 0.0144657381,
    0.0139845107, 0.0135125326, 0.0130511042, 0.0126011508,
    0.0121633014, 0.0117379521, 0.0113253164, 0.0109254660,
    0.0105383625, 0.0101638835, 0.0098018425, 0.0094520055,
    0.0091141032, 0.0087878415, 0.0084729095, 0.0081689851,
    0.0078757406, 0.0075928461, 0.0073199722, 0.0070567927,
    0.0068029861, 0.0065582369, 0.0063222362, 0.0060946828,
    0.0058752838, 0.0056637540, 0.0054598172, 0.0052632054,
    0.0050736593, 0.0048909278, 0.0047147683, 0.0045449464,
    0.0043812354, 0.0042234167, 0.0040712792, 0.0039246191,
    0.0037832398, 0.0036469516, 0.0035155716, 0.0033889233,
)

_HEAVYWEIGHT_EXPECTED = ExpectedResults(
    factors_order=6,
    cross_factors=_HEAVYWEIGHT_Y,
    truncation_l2={72: 0.09125, 96: 0.03740, 120: 0.01535, 144: 0.00632},
)

# ---------------------------------------------------------------------------
# ASHRAE Wall Group 2: stucco / insulation / gypsum.  Coefficient blocks
# are tabulated for five time steps at order 5; the final autoregressive
# coefficient of the Δt = 60 s block is printed as -0.746338E-01 in the
# source, an exponent misprint for -7.46338E-01 (the mantissa matches the
# recomputed value and the corrected magnitude is forced by the row-sum
# identity with the transmittance).

_WALL_GROUP_2 = Construction(
    name="wall-group-2",
    layers=(
        ResistanceLayer(0.060),                      # outside surface film
        MassiveLayer(0.025, 0.692, 1858.0, 840.0),   # stucco
        MassiveLayer(0.125, 0.043, 91.0, 840.0),     # insulation
        MassiveLayer(0.020, 0.727, 1602.0, 840.0),   # plaster or gypsum
        ResistanceLayer(0.120),                      # inside surface film
    ),
)

_WALL_GROUP_2_EXPECTED = ExpectedResults(
    u_value=0.317398,
    ctf_order=5,
    ctf={
        3600.0: {
            "b": (9.238270e-04, 3.134899e-02, 5.424187e-02, 1.188745e-02,
                  2.738740e-04, 2.703650e-07),
            "c": (4.964126e+00, -7.538352e+00, 3.020772e+00, -3.499972e-01,
                  2.131200e-03, -3.968320e-06),
            "d": (1.000000e+00, -9.408329e-01, 2.774543e-01, -2.585314e-02,
                  1.226296e-04, -2.377552e-08),
        },
        1800.0: {
            "b": (3.523998e-06, 1.834509e-03, 1.144690e-02, 9.920927e-03,
                  1.424604e-03, 2.253814e-05),
            "c": (6.104093e+00, -1.284061e+01, 8.882510e+00, -2.266845e+00,
                  1.476614e-01, -2.155427e-03),
            "d": (1.000000e+00, -1.730097e+00, 1.026203e+00, -2.322156e-01,
                  1.393706e-02, -1.541931e-04),
        },
        600.0: {
            "b": (1.888654e-05, -9.879201e-05, 2.288415e-04, -3.73172e-05,
                  4.788933e-04, 1.967507e-04),
            "c": (7.154002e+00, -2.330286e+01, 2.899612e+01, -1.704157e+01,
                  4.666951e+00, -4.718573e-01),
            "d": (1.000000e+00, -3.099307e+00, 3.687662e+00, -2.082222e+00,
                  5.499704e-01, -5.362348e-02),
        },
        300.0: {
            "b": (-8.604667e-06, 8.803074e-05, -3.226204e-04, 5.804443e-04,
                  -5.418111e-04, 2.512651e-04),
            "c": (7.479679e+00, -2.937890e+01, 4.551999e+01, -3.472326e+01,
                  1.301909e+01, -1.916569e+00),
            "d": (1.000000e+00, -3.840745e+00, 5.826007e+00, -4.355829e+00,
                  1.602282e+00, -2.315674e-01),
        },
        60.0: {
            "b": (-1.550119e-04, 8.435387e-04, -1.841489e-03, 2.016482e-03,
                  -1.107979e-03, 2.444852e-04),
            "c": (7.769836e+00, -3.683664e+01, 6.981223e+01, -6.611053e+01,
                  3.128182e+01, -5.916703e+00),
            "d": (1.000000e+00, -4.721551e+00, 8.911928e+00, -8.405527e+00,
                  3.961488e+00, -7.46338e-01),  # corrected misprint, see above
        },
    },
    ztf_l2={3600.0: 1.174e-2, 1800.0: 3.05e-3, 600.0: 3.45e-4,
            300.0: 8.622e-5, 60.0: 3.457e-6},
)

# ---------------------------------------------------------------------------

_ENTRIES: dict[str, CatalogEntry] = {
    entry.id: entry
    for entry in (
        CatalogEntry(
            id="brick-cavity",
            construction=_BRICK_CAVITY,
            source="UK brick/cavity benchmark wall",
            expected=_BRICK_EXPECTED,
        ),
        CatalogEntry(
            id="heavyweight-cn",
            construction=_HEAVYWEIGHT_CN,
            source="heavyweight wall common in Chinese construction",
            expected=_HEAVYWEIGHT_EXPECTED,
        ),
        CatalogEntry(
            id="wall-group-2",
            construction=_WALL_GROUP_2,
            source="ASHRAE Handbook (1997) Wall Group 2",
            expected=_WALL_GROUP_2_EXPECTED,
        ),
    )
}


def catalog_ids() -> tuple[str, ...]:
    return tuple(_ENTRIES)


def get_entry(entry_id: str) -> CatalogEntry:
    try:
        return _ENTRIES[entry_id]
    except KeyError:
        known = ", ".join(catalog_ids())
        raise InvalidConstructionError(
            f"unknown catalog id {entry_id!r} (available: {known})"
        ) from None


def get_construction(entry_id: str) -> Construction:
    return get_entry(entry_id).construction
