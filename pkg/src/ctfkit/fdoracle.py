"""Finite-difference time-domain simulator used as an independent check.

Everything else in this package reaches the response factors through
series expansions and rational approximation; this module gets there by
brute force instead, marching the 1D heat equation through the wall with
an implicit scheme and reading the indoor surface flux off the grid.
Driving the outdoor temperature with the same unit triangular pulse that
defines the factors makes the sampled flux an empirical cross-factor
sequence that shares nothing with the analytic pipeline but the wall
data -- which is exactly what makes the comparison meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import InvalidConstructionError, OracleError
from .pipeline import DEFAULT_ORDER, DEFAULT_SERIES_ORDER, compute_response_factors
from .realization import ResponseFactorSeq
from .wall import Construction, MassiveLayer, ResistanceLayer


@dataclass(frozen=True)
class FdConfig:
    """Grid and tolerance settings for the simulator.

    The scheme is implicit (backward Euler), so ``fd_timestep`` is a pure
    accuracy knob with no stability constraint.  ``horizon`` bounds the
    simulated span; it must cover at least one sampling interval of
    whatever output step the caller asks for.  The comparison window
    ``[k_min, k_max]`` excludes the first factors, whose small magnitudes
    are dominated by discretization error.
    """

    nodes_per_layer: int = 50
    fd_timestep: float = 10.0
    horizon: float = 90000.0
    rel_tolerance: float = 0.02
    k_min: int = 2
    k_max: int = 24

    def __post_init__(self) -> None:
        if self.nodes_per_layer < 3:
            raise ValueError("nodes_per_layer must be >= 3")
        if not (self.fd_timestep > 0.0 and math.isfinite(self.fd_timestep)):
            raise ValueError("fd_timestep must be positive and finite")
        if not (self.horizon > 0.0 and math.isfinite(self.horizon)):
            raise ValueError("horizon must be positive and finite")
        if self.rel_tolerance <= 0.0:
            raise ValueError("rel_tolerance must be positive")
        if not (0 <= self.k_min <= self.k_max):
            raise ValueError("need 0 <= k_min <= k_max")


class WallSimulator:
    """Implicit 1D conduction solver over a vertex-centred wall grid.

    Each massive layer carries ``nodes_per_layer`` equally spaced nodes;
    interior nodes own a full cell of heat capacity and face nodes half a
    cell.  Resistance layers carry no nodes: between massive layers they
    become contact resistances linking the adjacent face nodes (adjacent
    massive layers in perfect contact share a face node), and at the wall
    boundaries they separate the face node from the driving temperature.
    A boundary without any film resistance would demand a prescribed
    surface temperature, which this grid does not model; it raises
    OracleError rather than silently substituting a huge conductance.
    """

    def __init__(self, c: Construction, cfg: FdConfig | None = None) -> None:
        self.cfg = cfg if cfg is not None else FdConfig()
        caps: list[float] = []
        link_list: list[float] = []
        r_out = 0.0
        pending_r = 0.0
        for layer in c.layers:
            if isinstance(layer, ResistanceLayer):
                pending_r += layer.resistance
                continue
            if not isinstance(layer, MassiveLayer):
                raise InvalidConstructionError(f"unsupported layer object: {layer!r}")
            if layer.thickness == 0.0:
                continue
            n = self.cfg.nodes_per_layer
            h = layer.thickness / (n - 1)
            conductance = layer.conductivity / h
            half_cell = 0.5 * layer.density * layer.specific_heat * h
            if not caps:
                if pending_r <= 0.0:
                    raise OracleError(
                        "outside boundary has no film resistance; "
                        "the grid cannot prescribe a surface temperature"
                    )
                r_out = pending_r
                caps.append(half_cell)
            elif pending_r > 0.0:
                link_list.append(1.0 / pending_r)
                caps.append(half_cell)
            else:
                caps[-1] += half_cell
            pending_r = 0.0
            for j in range(1, n):
                link_list.append(conductance)
                caps.append(2.0 * half_cell if j < n - 1 else half_cell)
        if not caps:
            raise InvalidConstructionError(
                "the simulator needs at least one massive layer"
            )
        if pending_r <= 0.0:
            raise OracleError(
                "inside boundary has no film resistance; "
                "the grid cannot prescribe a surface temperature"
            )
        self.r_out = r_out
        self.r_in = pending_r
        self.caps = np.array(caps)
        self.links = np.array(link_list)

    @property
    def n_nodes(self) -> int:
        return self.caps.size

    def _banded_system(self) -> np.ndarray:
        """Backward-Euler matrix (C/dt + K) in solve_banded layout."""
        n = self.n_nodes
        diag = np.zeros(n)
        diag[0] += 1.0 / self.r_out
        diag[-1] += 1.0 / self.r_in
        diag[:-1] += self.links
        diag[1:] += self.links
        ab = np.zeros((3, n))
        ab[0, 1:] = -self.links
        ab[1] = diag + self.caps / self.cfg.fd_timestep
        ab[2, :-1] = -self.links
        return ab

    def run(
        self,
        n_steps: int,
        outside: Callable[[float], float],
        inside: Callable[[float], float] | None = None,
        initial: float = 0.0,
    ) -> np.ndarray:
        """March the wall and return the indoor-surface flux history.

        The returned array has ``n_steps + 1`` entries: index i is the
        flux (W/m^2, positive into the room) at time i * fd_timestep,
        including the initial state at index 0.  ``outside`` and
        ``inside`` map time in seconds to driving temperatures; inside
        defaults to a constant zero.
        """
        if n_steps < 1:
            raise ValueError("n_steps must be >= 1")
        step = self.cfg.fd_timestep
        ab = self._banded_system()
        temps = np.full(self.n_nodes, float(initial))
        inside_fn = inside if inside is not None else (lambda t: 0.0)
        flux = np.empty(n_steps + 1)
        flux[0] = (temps[-1] - inside_fn(0.0)) / self.r_in
        scale = self.caps / step
        for i in range(1, n_steps + 1):
            t = i * step
            rhs = scale * temps
            rhs[0] += outside(t) / self.r_out
            rhs[-1] += inside_fn(t) / self.r_in
            try:
                temps = scipy.linalg.solve_banded((1, 1), ab, rhs)
            except (scipy.linalg.LinAlgError, ValueError) as exc:
                raise OracleError(f"implicit solve failed at t = {t:.1f} s") from exc
            if not np.all(np.isfinite(temps)):
                raise OracleError(f"implicit solve diverged at t = {t:.1f} s")
            flux[i] = (temps[-1] - inside_fn(t)) / self.r_in
        return flux


def triangular_pulse(dt: float) -> Callable[[float], float]:
    """Unit triangle rising over [0, dt] and falling over [dt, 2*dt]."""
    def pulse(t: float) -> float:
        return max(0.0, 1.0 - abs(t / dt - 1.0))
    return pulse


def simulate_pulse_response(
    c: Construction, dt: float, cfg: FdConfig | None = None
) -> ResponseFactorSeq:
    """Empirical cross response factors from a triangular-pulse run.

    Drives the outdoor side with the unit triangle peaking at t = dt while
    the indoor side is held at zero.  Factor k is defined as the response
    k steps after the pulse PEAK, so the indoor surface flux is sampled at
    t = (k + 1) * dt; aligning samples with the peak rather than the pulse
    onset is what makes the sequence agree with the analytic factors.
    Only the cross sequence is simulated; the x and z slots of the result
    are zero-filled placeholders.
    """
    if cfg is None:
        cfg = FdConfig()
    if dt <= 0.0 or not math.isfinite(dt):
        raise ValueError("dt must be positive and finite")
    if cfg.horizon < dt:
        raise ValueError(
            f"horizon {cfg.horizon:.0f} s is shorter than one output step {dt:.0f} s"
        )
    sim = WallSimulator(c, cfg)
    n_steps = int(round(cfg.horizon / cfg.fd_timestep))
    flux = sim.run(n_steps, triangular_pulse(dt))
    count = int(math.floor(cfg.horizon / dt))
    indices = np.clip(
        np.rint(np.arange(1, count + 1) * dt / cfg.fd_timestep).astype(int), 0, n_steps
    )
    y = flux[indices]
    zeros = np.zeros(count)
    return ResponseFactorSeq(dt=dt, x=zeros, y=y, z=zeros.copy())


@dataclass(frozen=True)
class OracleComparison:
    """Empirical vs analytic cross factors with the gated verdict.

    ``rel_dev`` is |empirical - analytic| / |analytic| per factor (with a
    tiny floor on the denominator so leading near-zero factors do not blow
    up the report); the pass verdict only inspects the window
    [k_min, k_max] at the configured tolerance.
    """

    dt: float
    k_min: int
    k_max: int
    rel_tolerance: float
    empirical: np.ndarray
    analytic: np.ndarray
    rel_dev: np.ndarray
    max_rel_dev: float
    passed: bool


def compare_pulse_response(
    c: Construction,
    dt: float,
    cfg: FdConfig | None = None,
    order: int = DEFAULT_ORDER,
    series_order: int = DEFAULT_SERIES_ORDER,
) -> OracleComparison:
    """Run the simulator and line its factors up against the analytic ones."""
    if cfg is None:
        cfg = FdConfig()
    empirical = simulate_pulse_response(c, dt, cfg).y
    count = empirical.size
    analytic = compute_response_factors(
        c, dt=dt, count=count, order=order, series_order=series_order
    ).y
    k_max = min(cfg.k_max, count - 1)
    if cfg.k_min > k_max:
        raise ValueError(
            f"comparison window [{cfg.k_min}, {cfg.k_max}] lies beyond the "
            f"{count} simulated factors; extend the horizon"
        )
    floor = 1e-300
    rel_dev = np.abs(empirical - analytic) / np.maximum(np.abs(analytic), floor)
    window = rel_dev[cfg.k_min : k_max + 1]
    max_rel_dev = float(window.max())
    return OracleComparison(
        dt=dt,
        k_min=cfg.k_min,
        k_max=k_max,
        rel_tolerance=cfg.rel_tolerance,
        empirical=empirical,
        analytic=analytic,
        rel_dev=rel_dev,
        max_rel_dev=max_rel_dev,
        passed=bool(max_rel_dev <= cfg.rel_tolerance),
    )
