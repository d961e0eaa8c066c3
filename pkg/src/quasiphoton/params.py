"""Laboratory inputs and the scaled model parameters.

All internal quantities are inverse meters (hbar = c = 1): wavenumbers
kappa_s, the cyclotron parameter omega, and the coupling epsilon in m^-2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

# e / hbar in SI, converts a flux density in tesla to m^-2
E_OVER_HBAR = 1.519268e15
ALPHA_DEFAULT = 1.0 / 137.0

CONFIG_KEYS = (
    "wavelength_1_nm",
    "wavelength_2_nm",
    "magnetic_field_T",
    "np_inv_m",
    "electron_density_inv_m3",
    "alpha",
)


class ConfigError(ValueError):
    """Malformed key=value configuration."""


@dataclass(frozen=True)
class PhysicalInput:
    """Laboratory description of one operating point (SI units)."""

    wavelength_1: float
    wavelength_2: float
    magnetic_field: float = 0.0
    np: float = 2.5e7
    electron_density: float = 2.6e20
    alpha: float = ALPHA_DEFAULT

    def __post_init__(self):
        if not (self.wavelength_1 > 0 and self.wavelength_2 > 0):
            raise ValueError("wavelengths must be positive")
        if self.wavelength_1 == self.wavelength_2:
            raise ValueError("wavelengths must be distinct (kappa_1 == kappa_2 is degenerate)")
        if not self.np > 0:
            raise ValueError("light-cone momentum np must be positive")
        if self.electron_density < 0:
            raise ValueError("electron density must be non-negative")
        if self.magnetic_field < 0:
            raise ValueError("magnetic field must be non-negative")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class ModelParams:
    """Scaled model inputs shared by every other module.

    ``provenance`` is the PhysicalInput the values were derived from, or
    None for parameters given directly in model units.
    """

    kappa_1: float
    kappa_2: float
    epsilon: float
    omega: float = 0.0
    provenance: PhysicalInput | None = field(default=None, compare=False)

    def __post_init__(self):
        if not (self.kappa_1 > 0 and self.kappa_2 > 0):
            raise ValueError("kappa_1, kappa_2 must be positive")
        if self.kappa_1 == self.kappa_2:
            raise ValueError("kappa_1 == kappa_2: the model requires distinct frequencies")
        if self.epsilon < 0:
            raise ValueError("epsilon must be non-negative")
        if self.omega < 0:
            raise ValueError("omega must be non-negative")

    @property
    def kappa(self) -> tuple[float, float]:
        return (self.kappa_1, self.kappa_2)

    @property
    def kappa_mean(self) -> float:
        return math.sqrt(self.kappa_1 * self.kappa_2)

    @property
    def delta_kappa(self) -> float:
        return abs(self.kappa_2 - self.kappa_1)

    def rescaled(self, scale: float | None = None) -> ModelParams:
        """Return the same physics in units where kappa_1 -> kappa_1/scale.

        Wavenumbers divide by ``scale`` and epsilon by ``scale**2``;
        roots scale the same way and entanglement measures are unchanged.
        """
        s = self.kappa_1 if scale is None else scale
        return replace(
            self,
            kappa_1=self.kappa_1 / s,
            kappa_2=self.kappa_2 / s,
            epsilon=self.epsilon / s**2,
            omega=self.omega / s,
        )


def from_physical(inp: PhysicalInput) -> ModelParams:
    """kappa_s = 2 pi / wavelength, epsilon = alpha rho / np, omega = (e/hbar) B / np."""
    k1 = 2.0 * math.pi / inp.wavelength_1
    k2 = 2.0 * math.pi / inp.wavelength_2
    eps = inp.alpha * inp.electron_density / inp.np
    omega = inp.magnetic_field * E_OVER_HBAR / inp.np
    return ModelParams(k1, k2, eps, omega, provenance=inp)


def magnetic_field_for_omega(omega: float, np_: float) -> float:
    """Inverse of the omega conversion, in tesla."""
    return omega * np_ / E_OVER_HBAR


@dataclass(frozen=True)
class Diagnostics:
    smallness_ratio: float
    smallness_flag: bool
    resonance_proximity: float
    resonance_flag: bool

    @property
    def ok(self) -> bool:
        return not (self.smallness_flag or self.resonance_flag)


def validate(params: ModelParams, smallness_threshold: float = 0.1,
             guard_band: float = 0.05) -> Diagnostics:
    """Regime-of-validity diagnostics; never raises.

    The smallness ratio is epsilon / (kappa_mean * delta_kappa), the
    dimensionless combination that controls the small-coupling expansions.
    Resonance proximity is min_s |omega - kappa_s| / kappa_s.
    """
    ratio = params.epsilon / (params.kappa_mean * params.delta_kappa)
    prox = resonance_proximity(params)
    return Diagnostics(
        smallness_ratio=ratio,
        smallness_flag=ratio >= smallness_threshold,
        resonance_proximity=prox,
        resonance_flag=prox < guard_band,
    )


def resonance_proximity(params: ModelParams) -> float:
    return min(abs(params.omega - k) / k for k in params.kappa)


# -- key=value configuration -------------------------------------------------

def parse_config(text: str) -> dict[str, float]:
    """Parse ``key = value`` lines. ``#`` starts a comment; blank lines skip."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = (part.strip() for part in line.partition("="))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r} (expected one of {', '.join(CONFIG_KEYS)})")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = float(val)
        except ValueError:
            raise ConfigError(f"line {lineno}: value for {key!r} is not a number: {val!r}") from None
    return values


# reference operating point: 625/562 nm, np = 2.5e7 1/m, rho = 2.6e20 1/m^3
DEFAULT_CONFIG = {
    "wavelength_1_nm": 625.0,
    "wavelength_2_nm": 562.0,
    "magnetic_field_T": 0.0,
    "np_inv_m": 2.5e7,
    "electron_density_inv_m3": 2.6e20,
    "alpha": ALPHA_DEFAULT,
}


def input_from_config(values: dict[str, float]) -> PhysicalInput:
    """Build a PhysicalInput; keys missing from ``values`` take DEFAULT_CONFIG."""
    merged = {**DEFAULT_CONFIG, **values}
    return PhysicalInput(
        wavelength_1=merged["wavelength_1_nm"] * 1e-9,
        wavelength_2=merged["wavelength_2_nm"] * 1e-9,
        magnetic_field=merged["magnetic_field_T"],
        np=merged["np_inv_m"],
        electron_density=merged["electron_density_inv_m3"],
        alpha=merged["alpha"],
    )


def load_config(path: str | Path) -> PhysicalInput:
    return input_from_config(parse_config(Path(path).read_text(encoding="utf-8")))


def config_text(inp: PhysicalInput) -> str:
    """Serialise back to the key=value form read by load_config."""
    rows = {
        "wavelength_1_nm": inp.wavelength_1 * 1e9,
        "wavelength_2_nm": inp.wavelength_2 * 1e9,
        "magnetic_field_T": inp.magnetic_field,
        "np_inv_m": inp.np,
        "electron_density_inv_m3": inp.electron_density,
        "alpha": inp.alpha,
    }
    return "".join(f"{k} = {v!r}\n" for k, v in rows.items())
