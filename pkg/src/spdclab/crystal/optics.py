"""Plane-wave propagation in anisotropic crystals.

For a propagation direction s the two allowed refractive indices solve the
Fresnel wave-normal equation.  Equivalently, with u = 1/n^2 and the inverse
dielectric tensor eps^-1 = diag(1/n_x^2, 1/n_y^2, 1/n_z^2), u is an
eigenvalue of the 2x2 restriction of eps^-1 to the plane transverse to s,
and the eigenvector gives the displacement direction D.  The electric
field follows from E ~ eps^-1 D, and the walk-off (angle between the wave
vector and the Poynting vector) equals the angle between D and E.  This
eigenproblem form is numerically robust through all principal-plane and
principal-axis degeneracies; tests verify it against the classic Fresnel
quadratic and a finite-difference index-gradient oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .materials import SellmeierSet

FAST = "fast"
SLOW = "slow"


@dataclass(frozen=True)
class WaveSolution:
    """Both eigenwaves for one (direction, wavelength)."""

    direction: np.ndarray
    wavelength_nm: float
    n_fast: float
    n_slow: float
    d_fast: np.ndarray
    d_slow: np.ndarray
    e_fast: np.ndarray
    e_slow: np.ndarray
    walkoff_fast: float
    walkoff_slow: float

    def n(self, branch: str) -> float:
        return self.n_fast if branch == FAST else self.n_slow

    def d_vec(self, branch: str) -> np.ndarray:
        return self.d_fast if branch == FAST else self.d_slow

    def e_vec(self, branch: str) -> np.ndarray:
        return self.e_fast if branch == FAST else self.e_slow

    def walkoff(self, branch: str) -> float:
        return self.walkoff_fast if branch == FAST else self.walkoff_slow

    def wave_number(self, branch: str) -> float:
        """|k| in rad/um."""
        return 2.0 * np.pi * self.n(branch) / (self.wavelength_nm * 1e-3)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _transverse_basis(s: np.ndarray):
    helper = np.array([0.0, 0.0, 1.0]) if abs(s[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    t1 = _unit(helper - np.dot(helper, s) * s)
    return t1, np.cross(s, t1)


def solve_waves(sellmeier: SellmeierSet, direction, wavelength_nm: float) -> WaveSolution:
    """Solve both eigenwaves for a unit propagation direction."""
    s = _unit(np.asarray(direction, dtype=float))
    eps_inv = 1.0 / sellmeier.principal_indices(wavelength_nm) ** 2
    t1, t2 = _transverse_basis(s)
    m11 = float(np.dot(eps_inv * t1, t1))
    m22 = float(np.dot(eps_inv * t2, t2))
    m12 = float(np.dot(eps_inv * t1, t2))
    mean = 0.5 * (m11 + m22)
    radius = float(np.hypot(0.5 * (m11 - m22), m12))
    u_fast, u_slow = mean + radius, mean - radius  # larger u -> smaller n

    def branch(u):
        n = 1.0 / np.sqrt(u)
        v1 = np.array([m12, u - m11])
        v2 = np.array([u - m22, m12])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        nv = np.linalg.norm(v)
        v = np.array([1.0, 0.0]) if nv < 1e-14 else v / nv  # degenerate: any transverse
        d = v[0] * t1 + v[1] * t2
        e = _unit(eps_inv * d)
        walk = float(np.arccos(np.clip(np.dot(d, e), -1.0, 1.0)))
        return n, d, e, walk

    nf, df, ef, wf = branch(u_fast)
    ns, ds, es, ws = branch(u_slow)
    return WaveSolution(
        direction=s, wavelength_nm=wavelength_nm,
        n_fast=nf, n_slow=ns, d_fast=df, d_slow=ds, e_fast=ef, e_slow=es,
        walkoff_fast=wf, walkoff_slow=ws,
    )


def refractive_indices(sellmeier: SellmeierSet, direction, wavelength_nm: float):
    """(n_fast, n_slow) for the given direction, n_fast <= n_slow."""
    sol = solve_waves(sellmeier, direction, wavelength_nm)
    return sol.n_fast, sol.n_slow


def index_batch(sellmeier: SellmeierSet, directions: np.ndarray,
                wavelength_nm: float):
    """(n_fast, n_slow) arrays for an (N, 3) block of unit directions.

    Vectorized form of the eigenvalue part of :func:`solve_waves`, used by
    the grid scans in phase matching; polarization vectors are not needed
    there, so only the two index branches are returned.
    """
    s = np.asarray(directions, dtype=float)
    s = s / np.linalg.norm(s, axis=1, keepdims=True)
    eps_inv = 1.0 / sellmeier.principal_indices(wavelength_nm) ** 2
    helper = np.where(np.abs(s[:, 2:3]) < 0.9,
                      np.array([[0.0, 0.0, 1.0]]), np.array([[1.0, 0.0, 0.0]]))
    t1 = helper - np.sum(helper * s, axis=1, keepdims=True) * s
    t1 /= np.linalg.norm(t1, axis=1, keepdims=True)
    t2 = np.cross(s, t1)
    m11 = np.einsum("ij,j,ij->i", t1, eps_inv, t1)
    m22 = np.einsum("ij,j,ij->i", t2, eps_inv, t2)
    m12 = np.einsum("ij,j,ij->i", t1, eps_inv, t2)
    mean = 0.5 * (m11 + m22)
    radius = np.hypot(0.5 * (m11 - m22), m12)
    return 1.0 / np.sqrt(mean + radius), 1.0 / np.sqrt(mean - radius)


def walkoff_angle(sellmeier: SellmeierSet, direction, wavelength_nm: float,
                  branch: str = FAST) -> float:
    """Angle between wave vector and ray direction for one branch, in rad."""
    if branch not in (FAST, SLOW):
        raise ValueError(f"branch must be '{FAST}' or '{SLOW}'")
    return solve_waves(sellmeier, direction, wavelength_nm).walkoff(branch)


def fresnel_residual(sellmeier: SellmeierSet, direction, wavelength_nm: float,
                     n: float) -> float:
    """Classic Fresnel wave-normal polynomial at u = 1/n^2 (oracle for tests)."""
    s = _unit(np.asarray(direction, dtype=float))
    u = 1.0 / n**2
    u_ax = 1.0 / sellmeier.principal_indices(wavelength_nm) ** 2
    ux, uy, uz = u_ax
    return float(
        s[0] ** 2 * (u - uy) * (u - uz)
        + s[1] ** 2 * (u - ux) * (u - uz)
        + s[2] ** 2 * (u - ux) * (u - uy)
    )
