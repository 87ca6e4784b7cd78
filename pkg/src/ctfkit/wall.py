"""Multilayer wall definitions, steady-state properties and the wall file format.

A construction is an ordered stack of layers, outermost first.  Massive
layers carry thermal mass (thickness, conductivity, density, specific
heat); pure resistances (surface films, air cavities) carry only an
R-value.  Wall files are JSON documents with thicknesses in millimetres;
in-memory objects use SI metres throughout.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass

from .errors import InvalidConstructionError, WallFormatError


def _require_finite_positive(value: float, what: str, allow_zero: bool = False) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise InvalidConstructionError(f"{what} must be finite, got {value!r}")
    if v < 0.0 or (v == 0.0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise InvalidConstructionError(f"{what} must be {bound}, got {value!r}")
    return v


@dataclass(frozen=True)
class MassiveLayer:
    """Homogeneous slab with thermal mass.  SI units: m, W/(m K), kg/m3, J/(kg K)."""

    thickness: float
    conductivity: float
    density: float
    specific_heat: float

    def __post_init__(self) -> None:
        # Zero thickness is tolerated (the layer degenerates to nothing) but
        # flagged, since it is almost always a data-entry mistake.
        t = _require_finite_positive(self.thickness, "thickness", allow_zero=True)
        if t == 0.0:
            warnings.warn("massive layer with zero thickness contributes nothing", stacklevel=2)
        object.__setattr__(self, "thickness", t)
        object.__setattr__(
            self, "conductivity", _require_finite_positive(self.conductivity, "conductivity")
        )
        object.__setattr__(self, "density", _require_finite_positive(self.density, "density"))
        object.__setattr__(
            self, "specific_heat", _require_finite_positive(self.specific_heat, "specific_heat")
        )

    @property
    def diffusivity(self) -> float:
        """Thermal diffusivity, m2/s."""
        return self.conductivity / (self.density * self.specific_heat)

    @property
    def resistance(self) -> float:
        """Steady-state resistance thickness/conductivity, m2 K/W."""
        return self.thickness / self.conductivity

    @property
    def heat_capacity(self) -> float:
        """Areal heat capacity, J/(m2 K)."""
        return self.thickness * self.density * self.specific_heat


@dataclass(frozen=True)
class ResistanceLayer:
    """Massless thermal resistance (film coefficient, air gap), m2 K/W."""

    resistance: float

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "resistance", _require_finite_positive(self.resistance, "resistance")
        )


Layer = MassiveLayer | ResistanceLayer


@dataclass(frozen=True)
class Construction:
    """Ordered layer stack; ``layers[0]`` faces the outdoor environment."""

    name: str
    layers: tuple[Layer, ...]

    def __post_init__(self) -> None:
        layers = tuple(self.layers)
        if not layers:
            raise InvalidConstructionError("a construction needs at least one layer")
        for layer in layers:
            if not isinstance(layer, (MassiveLayer, ResistanceLayer)):
                raise InvalidConstructionError(f"unsupported layer object: {layer!r}")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "name", str(self.name))

    @property
    def purely_resistive(self) -> bool:
        """True when no layer carries thermal mass (legal, but degenerate)."""
        return all(
            isinstance(l, ResistanceLayer) or l.thickness == 0.0 for l in self.layers
        )

    @property
    def total_resistance(self) -> float:
        return sum(layer.resistance for layer in self.layers)

    @property
    def massive_layers(self) -> tuple[MassiveLayer, ...]:
        return tuple(
            l for l in self.layers if isinstance(l, MassiveLayer) and l.thickness > 0.0
        )


def u_value(c: Construction) -> float:
    """Steady-state transmittance, W/(m2 K): reciprocal of the resistance sum."""
    r = c.total_resistance
    if r <= 0.0:
        raise InvalidConstructionError("total resistance must be positive")
    return 1.0 / r


# -- wall document format ----------------------------------------------------

_MASSIVE_FIELDS = ("thickness_mm", "conductivity", "density", "specific_heat")


def _as_number(value: object, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise WallFormatError(f"{where} must be a number, got {value!r}")
    return float(value)


def parse_construction(document: str | bytes | dict) -> Construction:
    """Parse a wall document (JSON text or an already-decoded mapping).

    The document shape is ``{"name": ..., "layers": [...]}`` where each
    layer is either ``{"type": "massive", "thickness_mm": ..,
    "conductivity": .., "density": .., "specific_heat": ..}`` or
    ``{"type": "resistance", "r_value": ..}``.  Errors name the offending
    field.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise WallFormatError(f"wall document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise WallFormatError("wall document must be a JSON object")
    name = document.get("name")
    if not isinstance(name, str) or not name:
        raise WallFormatError("field 'name' must be a non-empty string")
    raw_layers = document.get("layers")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise WallFormatError("field 'layers' must be a non-empty list")

    layers: list[Layer] = []
    for i, raw in enumerate(raw_layers):
        where = f"layers[{i}]"
        if not isinstance(raw, dict):
            raise WallFormatError(f"{where} must be an object")
        kind = raw.get("type")
        try:
            if kind == "massive":
                values = {}
                for field in _MASSIVE_FIELDS:
                    if field not in raw:
                        raise WallFormatError(f"{where}.{field} is required")
                    values[field] = _as_number(raw[field], f"{where}.{field}")
                layers.append(
                    MassiveLayer(
                        thickness=values["thickness_mm"] / 1000.0,
                        conductivity=values["conductivity"],
                        density=values["density"],
                        specific_heat=values["specific_heat"],
                    )
                )
            elif kind == "resistance":
                if "r_value" not in raw:
                    raise WallFormatError(f"{where}.r_value is required")
                layers.append(ResistanceLayer(_as_number(raw["r_value"], f"{where}.r_value")))
            else:
                raise WallFormatError(
                    f"{where}.type must be 'massive' or 'resistance', got {kind!r}"
                )
        except InvalidConstructionError as exc:
            if isinstance(exc, WallFormatError):
                raise
            raise WallFormatError(f"{where}: {exc}") from exc
    return Construction(name=name, layers=tuple(layers))


def serialize_construction(c: Construction) -> dict:
    """Inverse of :func:`parse_construction` (thicknesses back in mm)."""
    layers = []
    for layer in c.layers:
        if isinstance(layer, MassiveLayer):
            layers.append(
                {
                    "type": "massive",
                    "thickness_mm": layer.thickness * 1000.0,
                    "conductivity": layer.conductivity,
                    "density": layer.density,
                    "specific_heat": layer.specific_heat,
                }
            )
        else:
            layers.append({"type": "resistance", "r_value": layer.resistance})
    return {"name": c.name, "layers": layers}


def load_construction(path: str) -> Construction:
    """Read and parse a wall file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WallFormatError(f"cannot read wall file {path!r}: {exc}") from exc
    return parse_construction(text)
