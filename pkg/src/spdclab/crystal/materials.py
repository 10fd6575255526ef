"""Crystal dispersion and nonlinearity data.

Sellmeier coefficients and second-order tensors are shipped as versioned
JSON data files with literature citations; nothing here hard-codes a
specific crystal.  All dispersion entries use the common form

    n^2 = A + B / (lambda^2 - C) - D lambda^2    (lambda in micrometers)

per principal axis ('o'/'e' for uniaxial species, 'x'/'y'/'z' with
n_x < n_y < n_z for biaxial ones).  Directions, cut angles (theta, phi)
and the second-order tensor all live in the principal dielectric frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

import numpy as np

from ..errors import SchemaError

UNIAXIAL = "uniaxial"
BIAXIAL = "biaxial"

_AXES = {UNIAXIAL: ("o", "e"), BIAXIAL: ("x", "y", "z")}

# contracted (Voigt) pair for each index pair
_CONTRACTED = {(0, 0): 0, (1, 1): 1, (2, 2): 2,
               (1, 2): 3, (2, 1): 3, (0, 2): 4, (2, 0): 4,
               (0, 1): 5, (1, 0): 5}


@dataclass(frozen=True)
class SellmeierSet:
    """Dispersion data for one crystal species."""

    species: str
    symmetry: str
    coefficients: dict            # axis -> (A, B, C, D)
    valid_range_um: tuple         # inclusive (lo, hi)
    source_citation: str

    def __post_init__(self):
        if self.symmetry not in _AXES:
            raise SchemaError(f"unknown symmetry {self.symmetry!r}")
        missing = set(_AXES[self.symmetry]) - set(self.coefficients)
        if missing:
            raise SchemaError(f"{self.species}: missing axes {sorted(missing)}")

    def _check_range(self, wavelength_nm: float) -> float:
        lam_um = wavelength_nm * 1e-3
        lo, hi = self.valid_range_um
        if not lo <= lam_um <= hi:
            raise ValueError(
                f"{self.species}: {wavelength_nm} nm outside the Sellmeier "
                f"validity range [{lo*1e3:.0f}, {hi*1e3:.0f}] nm"
            )
        return lam_um

    def axis_index(self, axis: str, wavelength_nm: float) -> float:
        lam = self._check_range(wavelength_nm)
        a, b, c, d = self.coefficients[axis]
        n_sq = a + b / (lam * lam - c) - d * lam * lam
        if n_sq <= 1.0:
            raise ValueError(f"{self.species}: unphysical index at {wavelength_nm} nm")
        return float(np.sqrt(n_sq))

    def principal_indices(self, wavelength_nm: float) -> np.ndarray:
        """(n_x, n_y, n_z); uniaxial species map to (n_o, n_o, n_e)."""
        if self.symmetry == UNIAXIAL:
            n_o = self.axis_index("o", wavelength_nm)
            n_e = self.axis_index("e", wavelength_nm)
            return np.array([n_o, n_o, n_e])
        return np.array([self.axis_index(ax, wavelength_nm) for ax in "xyz"])


@dataclass(frozen=True)
class NonlinearTensor:
    """3x6 contracted second-order tensor in pm/V (principal frame)."""

    point_group: str
    d_matrix: np.ndarray
    source_citation: str

    def __post_init__(self):
        m = np.asarray(self.d_matrix, dtype=float)
        if m.shape != (3, 6):
            raise SchemaError("contracted d matrix must be 3x6")
        object.__setattr__(self, "d_matrix", m)

    @staticmethod
    def from_elements(point_group: str, elements: dict, citation: str) -> "NonlinearTensor":
        """Build the 3x6 matrix from entries like {"d22": 2.2, "d31": 0.08}."""
        m = np.zeros((3, 6))
        for name, value in elements.items():
            if len(name) != 3 or name[0] != "d":
                raise SchemaError(f"bad element name {name!r}")
            i, l = int(name[1]) - 1, int(name[2]) - 1
            if not (0 <= i < 3 and 0 <= l < 6):
                raise SchemaError(f"bad element name {name!r}")
            m[i, l] = float(value)
        return NonlinearTensor(point_group, m, citation)

    def contract(self, e_pump, e_sig, e_idl) -> float:
        """d_eff = e_pump . d : (e_sig e_idl), fields as unit vectors."""
        es = np.asarray(e_sig, float)
        ei = np.asarray(e_idl, float)
        v = np.array([
            es[0] * ei[0],
            es[1] * ei[1],
            es[2] * ei[2],
            es[1] * ei[2] + es[2] * ei[1],
            es[0] * ei[2] + es[2] * ei[0],
            es[0] * ei[1] + es[1] * ei[0],
        ])
        return float(np.asarray(e_pump, float) @ (self.d_matrix @ v))


@dataclass(frozen=True)
class CrystalCut:
    """Cut angles in the principal frame plus crystal length."""

    theta: float
    phi: float
    length_mm: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError("theta must lie in [0, pi]")
        if not 0.0 <= self.phi < 2.0 * np.pi:
            raise ValueError("phi must lie in [0, 2 pi)")
        if self.length_mm <= 0:
            raise ValueError("crystal length must be positive")

    def direction(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])


@dataclass(frozen=True)
class CrystalData:
    sellmeier: SellmeierSet
    tensor: NonlinearTensor
    reference_cut: Optional[CrystalCut] = None
    notes: str = ""


def _load_json(name: str) -> dict:
    with resources.files("spdclab.data").joinpath(name).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def load_crystal(species: str) -> CrystalData:
    """Load a shipped crystal data file ('bbo' or 'bibo')."""
    species = species.lower()
    try:
        raw = _load_json(f"{species}.json")
    except FileNotFoundError:
        raise SchemaError(f"no shipped data file for species {species!r}") from None
    return crystal_from_dict(raw)


def crystal_from_dict(raw: dict) -> CrystalData:
    try:
        sel = raw["sellmeier"]
        sellmeier = SellmeierSet(
            species=raw["species"],
            symmetry=raw["symmetry"],
            coefficients={ax: tuple(v) for ax, v in sel["coefficients"].items()},
            valid_range_um=tuple(sel["valid_range_um"]),
            source_citation=sel["citation"],
        )
        ten = raw["d_tensor_pm_per_v"]
        tensor = NonlinearTensor.from_elements(
            ten["point_group"], ten["elements"], ten["citation"]
        )
        cut = None
        if "reference_cut" in raw:
            rc = raw["reference_cut"]
            cut = CrystalCut(rc["theta_rad"], rc["phi_rad"], rc["length_mm"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed crystal data: {exc}") from exc
    return CrystalData(sellmeier=sellmeier, tensor=tensor, reference_cut=cut,
                       notes=raw.get("notes", ""))
