"""Frequency-domain validation of discrete coefficients against exact theory.

The exact frequency characteristics of a wall come straight from the
hyperbolic transmission matrices evaluated at s = j*omega -- no series,
no approximation -- so they serve as the reference everything else is
judged against.  Approximate characteristics are read off the coefficient
z-transfer functions (or truncated response-factor sums) at
z = exp(j*omega*dt), and the agreement is condensed into a dimensionless
L2 magnitude error normalised by the steady-state transmittance.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .realization import CtfSet, ResponseFactorSeq
from .wall import Construction, MassiveLayer, u_value

PHI_KEYS = ("x", "y", "z")

DEFAULT_OMEGA_MIN = 1e-8
DEFAULT_OMEGA_MAX = 1e-3
DEFAULT_N_POINTS = 100
DEFAULT_EPS_U = 1e-3
DEFAULT_EPS_L2 = 0.02


@dataclass(frozen=True)
class FrequencyGrid:
    """Logarithmically spaced angular frequencies, rad/s, endpoints included."""

    omega_min: float = DEFAULT_OMEGA_MIN
    omega_max: float = DEFAULT_OMEGA_MAX
    n_points: int = DEFAULT_N_POINTS

    def __post_init__(self) -> None:
        if not (0.0 < self.omega_min < self.omega_max):
            raise ValueError("need 0 < omega_min < omega_max")
        if self.n_points < 2:
            raise ValueError("need at least two grid points")

    def omegas(self) -> np.ndarray:
        return np.logspace(
            math.log10(self.omega_min), math.log10(self.omega_max), self.n_points
        )


def exact_characteristics(c: Construction, grid: FrequencyGrid) -> dict[str, np.ndarray]:
    """Exact transfer-function samples from the hyperbolic layer matrices.

    Returns complex arrays for the external ('x'), cross ('y') and
    internal ('z') functions.  The matrix entries grow like exp(L*sqrt(w/a));
    on any realistic grid this is far from overflow, but should a sample
    still come out non-finite it is replaced by the nearest lower-frequency
    value with a warning.
    """
    s = 1j * grid.omegas()
    one = np.ones_like(s)
    zero = np.zeros_like(s)
    acc = [one, zero, zero, one]  # row-major 2x2 per frequency
    for layer in c.layers:
        if isinstance(layer, MassiveLayer):
            if layer.thickness == 0.0:
                continue
            k = np.sqrt(s / layer.diffusivity)
            arg = layer.thickness * k
            ch, sh = np.cosh(arg), np.sinh(arg)
            lam_k = layer.conductivity * k
            m = [ch, sh / lam_k, lam_k * sh, ch]
        else:
            m = [one, layer.resistance * one, zero, one]
        acc = [
            m[0] * acc[0] + m[1] * acc[2],
            m[0] * acc[1] + m[1] * acc[3],
            m[2] * acc[0] + m[3] * acc[2],
            m[2] * acc[1] + m[3] * acc[3],
        ]
    a_entry, b_entry, d_entry = acc[0], acc[1], acc[3]
    out = {"x": a_entry / b_entry, "y": 1.0 / b_entry, "z": d_entry / b_entry}
    for key, values in out.items():
        bad = ~np.isfinite(values)
        if np.any(bad):
            warnings.warn(
                f"{int(bad.sum())} non-finite sample(s) in exact characteristics "
                f"above omega={grid.omegas()[bad][0]:.3e} rad/s; holding last finite value",
                stacklevel=2,
            )
            values = values.copy()
            for i in np.flatnonzero(bad):
                values[i] = values[i - 1] if i > 0 else 0.0
            out[key] = values
    return out


def ztf_characteristics(ctf: CtfSet, grid: FrequencyGrid) -> dict[str, np.ndarray]:
    """Coefficient z-transfer functions sampled at z = exp(j*omega*dt).

    Frequencies above the sampling limit pi/dt alias; they are still
    evaluated (the aliased tail is informative in Bode overlays) but a
    warning points out the fold-over.
    """
    omegas = grid.omegas()
    nyquist = math.pi / ctf.dt
    if omegas[-1] > nyquist:
        warnings.warn(
            f"grid extends past the sampling limit pi/dt = {nyquist:.3e} rad/s; "
            "z-transfer samples above it alias",
            stacklevel=2,
        )
    z_inv = np.exp(-1j * omegas * ctf.dt)
    return {key: ctf.evaluate(key, z_inv) for key in PHI_KEYS}


def rf_characteristics(
    rf: ResponseFactorSeq, truncation: int, grid: FrequencyGrid
) -> dict[str, np.ndarray]:
    """Truncated response-factor sums sampled at z = exp(j*omega*dt).

    ``truncation`` counts the retained terms (factors 0 .. truncation-1)
    and must not exceed the stored sequence length.
    """
    if not (1 <= truncation <= rf.count):
        raise ValueError(
            f"truncation must be in [1, {rf.count}], got {truncation}"
        )
    z_inv = np.exp(-1j * grid.omegas() * rf.dt)
    out = {}
    for key in PHI_KEYS:
        seq = rf.sequence(key)[:truncation]
        out[key] = np.polynomial.polynomial.polyval(z_inv, seq)
    return out


def l2_error(exact: np.ndarray, approx: np.ndarray, u: float) -> float:
    """Root-mean-square magnitude deviation, scaled by the transmittance.

    Dimensionless: multiply by 100 for the usual percentage form.
    """
    if exact.shape != approx.shape:
        raise ValueError("sample arrays must have the same shape")
    if u <= 0.0:
        raise ValueError("u must be positive")
    diff = np.abs(exact) - np.abs(approx)
    return float(np.sqrt(np.mean(diff * diff)) / u)


@dataclass(frozen=True)
class BodeSamples:
    """Magnitude/phase samples of one transfer function, exact vs approximate."""

    omega: np.ndarray
    mag_exact: np.ndarray
    phase_exact: np.ndarray
    mag_approx: np.ndarray
    phase_approx: np.ndarray

    @classmethod
    def from_samples(
        cls, omega: np.ndarray, exact: np.ndarray, approx: np.ndarray
    ) -> "BodeSamples":
        # Phases are unwrapped by nearest-branch continuation so the Bode
        # curves stay continuous.
        return cls(
            omega=omega,
            mag_exact=np.abs(exact),
            phase_exact=np.unwrap(np.angle(exact)),
            mag_approx=np.abs(approx),
            phase_approx=np.unwrap(np.angle(approx)),
        )

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["omega_rad_s", "mag_exact", "phase_exact_rad", "mag_approx", "phase_approx_rad"]
            )
            for i in range(self.omega.size):
                writer.writerow(
                    [
                        f"{self.omega[i]:.8E}",
                        f"{self.mag_exact[i]:.8E}",
                        f"{self.phase_exact[i]:.8E}",
                        f"{self.mag_approx[i]:.8E}",
                        f"{self.phase_approx[i]:.8E}",
                    ]
                )


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the frequency-domain quality gate for one coefficient set.

    ``l2_errors`` and ``u_deviations`` are per-transfer-function; the
    gate passes when every L2 error is below ``eps_l2`` and every
    steady-state deviation below ``eps_u``.  Phase agreement is reported
    through the Bode samples but not gated.
    """

    wall_name: str
    dt: float
    u: float
    eps_u: float
    eps_l2: float
    l2_errors: dict[str, float]
    u_deviations: dict[str, float]
    passed: bool
    bode: dict[str, BodeSamples] = field(repr=False)
    rf_l2_errors: dict[str, float] | None = None

    def to_dict(self) -> dict:
        doc = {
            "wall_name": self.wall_name,
            "dt": self.dt,
            "u_value": self.u,
            "eps_u": self.eps_u,
            "eps_l2": self.eps_l2,
            "l2_errors": {k: self.l2_errors[k] for k in PHI_KEYS},
            "u_deviations": {k: self.u_deviations[k] for k in PHI_KEYS},
            "passed": self.passed,
        }
        if self.rf_l2_errors is not None:
            doc["rf_l2_errors"] = {k: self.rf_l2_errors[k] for k in PHI_KEYS}
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def quality_control(
    c: Construction,
    ctf: CtfSet,
    grid: FrequencyGrid | None = None,
    eps_u: float = DEFAULT_EPS_U,
    eps_l2: float = DEFAULT_EPS_L2,
    rf: ResponseFactorSeq | None = None,
    rf_truncation: int | None = None,
) -> ValidationReport:
    """Compare a coefficient set against the exact wall characteristics.

    Two families of checks: the steady-state identity (coefficient-sum
    ratios against the transmittance, tolerance ``eps_u``) and the L2
    magnitude error over the grid (tolerance ``eps_l2``).  When a
    response-factor sequence is supplied its truncated-sum errors are
    reported as well, informationally.
    """
    if grid is None:
        grid = FrequencyGrid()
    u = u_value(c)
    exact = exact_characteristics(c, grid)
    approx = ztf_characteristics(ctf, grid)
    l2 = {key: l2_error(exact[key], approx[key], u) for key in PHI_KEYS}
    ratios = ctf.u_ratios()
    u_dev = {key: abs(ratios[key] - u) / u for key in PHI_KEYS}
    rf_l2 = None
    if rf is not None:
        truncation = rf.count if rf_truncation is None else rf_truncation
        rf_approx = rf_characteristics(rf, truncation, grid)
        rf_l2 = {key: l2_error(exact[key], rf_approx[key], u) for key in PHI_KEYS}
    omegas = grid.omegas()
    bode = {
        key: BodeSamples.from_samples(omegas, exact[key], approx[key]) for key in PHI_KEYS
    }
    passed = all(v < eps_l2 for v in l2.values()) and all(v < eps_u for v in u_dev.values())
    return ValidationReport(
        wall_name=c.name,
        dt=ctf.dt,
        u=u,
        eps_u=eps_u,
        eps_l2=eps_l2,
        l2_errors=l2,
        u_deviations=u_dev,
        passed=passed,
        bode=bode,
        rf_l2_errors=rf_l2,
    )
