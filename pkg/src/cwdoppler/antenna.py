"""Array-factor model of a linear patch array, flat or wrapped on a cylinder.

Geometry lives in the x-z plane: the flat array runs along x with its
normal along +z. A bent array follows a circle of radius ``bend_radius_m``
centred at ``(0, -bend_radius_m)``, so the middle of the array stays at the
origin and the surface is convex toward +z. Angles ``theta`` are measured
from +z in that plane; ``psi`` is the elevation out of it (toward +y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .config import SPEED_OF_LIGHT, DomainError

PAPER_BEND_RADIUS_M = 0.0841


@dataclass(frozen=True)
class ArrayGeometry:
    n_elements: int = 8
    pitch_m: float = 6.56e-3
    element_length_m: float = 3.12e-3
    element_width_m: float = 4.10e-3
    bend_radius_m: Optional[float] = None

    def validate(self) -> "ArrayGeometry":
        if int(self.n_elements) != self.n_elements or self.n_elements < 1:
            raise DomainError("n_elements must be an integer >= 1")
        if not self.pitch_m > 0:
            raise DomainError("pitch_m must be > 0")
        if self.bend_radius_m is not None:
            limit = self.n_elements * self.pitch_m / math.pi
            if not self.bend_radius_m > limit:
                raise DomainError(
                    f"bend_radius_m must exceed {limit:.6g} m (array must subtend < 180 deg)")
        return self

    def bent(self, radius: Optional[float]) -> "ArrayGeometry":
        return ArrayGeometry(self.n_elements, self.pitch_m, self.element_length_m,
                             self.element_width_m, radius)


# Designed values from the antenna's dimension table: pitch = l1 + l2.
DESIGNED_GEOMETRY = ArrayGeometry()
FABRICATED_GEOMETRY = ArrayGeometry(pitch_m=3.10e-3 + 3.32e-3, element_length_m=3.10e-3,
                                    element_width_m=4.13e-3)


@dataclass(frozen=True)
class PatternCut:
    angles_rad: np.ndarray
    values: np.ndarray
    frequency_hz: float

    def __post_init__(self):
        if len(self.angles_rad) != len(self.values):
            raise DomainError("angles and values differ in length")
        if np.any(np.diff(self.angles_rad) <= 0):
            raise DomainError("angles must be strictly increasing")


@dataclass(frozen=True)
class DirectivityResult:
    peak_dbi: float
    peak_angle_rad: float
    cut: PatternCut  # values in dBi
    radiated: float  # integral of |F|^2 over the sphere
    field: Callable

    def at(self, theta, psi=0.0):
        """Linear directivity in any direction."""
        power = np.abs(self.field(np.asarray(theta, float), np.asarray(psi, float))) ** 2
        return 4.0 * np.pi * power / self.radiated


def element_placement(geom: ArrayGeometry) -> Tuple[np.ndarray, np.ndarray]:
    """Element centres and unit outward normals, each of shape ``(n, 2)`` as (x, z)."""
    geom.validate()
    n = int(geom.n_elements)
    s = (np.arange(n) - (n - 1) / 2.0) * geom.pitch_m  # arc length from the middle
    if geom.bend_radius_m is None:
        positions = np.column_stack([s, np.zeros(n)])
        normals = np.column_stack([np.zeros(n), np.ones(n)])
    else:
        rho = geom.bend_radius_m
        phi = s / rho
        # rho * (cos(phi) - 1) written so it stays exact for huge radii
        positions = np.column_stack([rho * np.sin(phi), -2.0 * rho * np.sin(phi / 2) ** 2])
        normals = np.column_stack([np.sin(phi), np.cos(phi)])
    return positions, normals


def array_field(geom: ArrayGeometry, excitation=None, frequency_hz: float = 24.0e9,
                element_exponent: float = 1.0) -> Callable:
    """Far-field function ``F(theta, psi)`` of the array.

    Each element radiates ``max(cos(angle to its normal), 0) ** element_exponent``;
    ``element_exponent=0`` gives isotropic elements.
    """
    positions, normals = element_placement(geom)
    n = len(positions)
    a = np.ones(n, complex) if excitation is None else np.asarray(excitation, complex)
    if a.shape != (n,):
        raise DomainError(f"excitation must have {n} entries, got {a.shape}")
    k = 2.0 * np.pi * frequency_hz / SPEED_OF_LIGHT
    xs, zs = positions[:, 0], positions[:, 1]
    nx, nz = normals[:, 0], normals[:, 1]

    def field(theta, psi=0.0):
        theta, psi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(psi, float))
        ux = (np.sin(theta) * np.cos(psi))[..., None]
        uz = (np.cos(theta) * np.cos(psi))[..., None]
        if element_exponent == 0:
            elem = np.ones(np.broadcast(ux, nx).shape)
        else:
            elem = np.clip(ux * nx + uz * nz, 0.0, None) ** element_exponent
        phase = np.exp(1j * k * (ux * xs + uz * zs))
        return np.sum(a * elem * phase, axis=-1)

    return field


def array_pattern(geom: ArrayGeometry, excitation=None, frequency_hz: float = 24.0e9,
                  angles=None, element_exponent: float = 1.0) -> PatternCut:
    """|F| over an in-plane cut (default: -90 to 90 deg in 0.5 deg steps)."""
    if angles is None:
        angles = np.deg2rad(np.linspace(-90.0, 90.0, 361))
    angles = np.asarray(angles, float)
    f = array_field(geom, excitation, frequency_hz, element_exponent)
    return PatternCut(angles, np.abs(f(angles, 0.0)), frequency_hz)


def _cut_field(cut: PatternCut, orthogonal_exponent: float) -> Callable:
    lo, hi = cut.angles_rad[0], cut.angles_rad[-1]

    def field(theta, psi=0.0):
        theta, psi = np.broadcast_arrays(np.asarray(theta, float), np.asarray(psi, float))
        inside = (theta >= lo) & (theta <= hi)
        mag = np.where(inside, np.interp(theta, cut.angles_rad, cut.values), 0.0)
        return mag * np.clip(np.cos(psi), 0.0, None) ** orthogonal_exponent

    return field


def directivity(source: Union[PatternCut, Callable], frequency_hz: Optional[float] = None,
                step_deg: float = 0.5, orthogonal_exponent: float = 1.0,
                cut_angles=None) -> DirectivityResult:
    """Directivity ``4 pi |F|^2 / integral(|F|^2 dOmega)`` by trapezoidal quadrature.

    ``source`` is either a field function ``F(theta, psi)`` defined on the whole
    sphere, or a :class:`PatternCut` of magnitudes; a cut is taken as zero
    outside its angular span and extended across the orthogonal plane by
    ``cos(psi) ** orthogonal_exponent``.
    """
    if step_deg > 1.0:
        raise DomainError("quadrature step must be <= 1 degree")
    if isinstance(source, PatternCut):
        frequency_hz = source.frequency_hz if frequency_hz is None else frequency_hz
        field = _cut_field(source, orthogonal_exponent)
        if cut_angles is None:
            cut_angles = source.angles_rad
    else:
        field = source
    if cut_angles is None:
        cut_angles = np.deg2rad(np.linspace(-90.0, 90.0, 361))
    cut_angles = np.asarray(cut_angles, float)

    n_theta = int(round(360.0 / step_deg)) + 1
    n_psi = int(round(180.0 / step_deg)) + 1
    theta = np.linspace(-np.pi, np.pi, n_theta)
    psi = np.linspace(-np.pi / 2, np.pi / 2, n_psi)
    power = np.abs(field(theta[None, :], psi[:, None])) ** 2
    radiated = np.trapezoid(np.trapezoid(power, theta, axis=1) * np.cos(psi), psi)
    if not radiated > 0:
        raise DomainError("field is identically zero")

    d_cut = 4.0 * np.pi * np.abs(field(cut_angles, 0.0)) ** 2 / radiated
    with np.errstate(divide="ignore"):
        dbi = 10.0 * np.log10(d_cut)
    d_grid = 4.0 * np.pi * power / radiated
    i_psi, i_theta = np.unravel_index(np.argmax(d_grid), d_grid.shape)
    peak = 10.0 * np.log10(d_grid[i_psi, i_theta])
    return DirectivityResult(float(peak), float(theta[i_theta]),
                             PatternCut(cut_angles, dbi, frequency_hz or float("nan")),
                             float(radiated), field)


def array_directivity(geom: ArrayGeometry, excitation=None, frequency_hz: float = 24.0e9,
                      element_exponent: float = 1.0, step_deg: float = 0.5) -> DirectivityResult:
    field = array_field(geom, excitation, frequency_hz, element_exponent)
    return directivity(field, frequency_hz, step_deg)


def bend_gain_drop(geom_flat: ArrayGeometry, geom_bent: ArrayGeometry, excitation=None,
                   frequency_hz: float = 24.0e9, element_exponent: float = 1.0) -> float:
    """Peak directivity lost (dB) by bending the array."""
    if geom_flat.bent(None) != geom_bent.bent(None):
        raise DomainError("geometries must differ only in bend_radius_m")
    flat = array_directivity(geom_flat, excitation, frequency_hz, element_exponent)
    bent = array_directivity(geom_bent, excitation, frequency_hz, element_exponent)
    return flat.peak_dbi - bent.peak_dbi
