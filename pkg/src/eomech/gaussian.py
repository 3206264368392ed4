"""
Gaussian-state algebra for covariance matrices in the (X1, Y1, X2, Y2, ...)
ordering, with vacuum quadrature variance 0.5.

Everything here is mode-count agnostic except the two-mode measures
(logarithmic negativity, steering), which take 4x4 matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import trapezoid

from .errors import DimensionError, PhysicalityError

VACUUM_VARIANCE = 0.5
SYMMETRY_TOL = 1e-10
PHYSICALITY_TOL = 1e-8
CLAMP_TOL = 1e-9

QUADRATURES = ("X", "Y")


def _check_even_square(m: NDArray[np.float64]) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"covariance matrix must be square, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[0] % 2:
        raise DimensionError(f"covariance matrix must have even dimension, got {m.shape[0]}")


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """Real symmetric 2N x 2N matrix of quadrature second moments.

    The stored array is symmetrized on construction and made read-only.
    With ``validate=True`` (default) the matrix must have every symplectic
    eigenvalue >= 0.5 - 1e-8, otherwise :class:`PhysicalityError` is raised.
    """

    entries: NDArray[np.float64]
    validate: bool = True

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        _check_even_square(m)
        if not np.all(np.isfinite(m)):
            raise PhysicalityError("covariance matrix has non-finite entries")
        asym = np.max(np.abs(m - m.T))
        scale = max(1.0, np.max(np.abs(m)))
        if asym > 1e-6 * scale:
            raise PhysicalityError(f"covariance matrix is not symmetric (max asymmetry {asym:.3g})")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        if self.validate:
            nu = symplectic_eigenvalues(m)
            if nu[-1] < VACUUM_VARIANCE - PHYSICALITY_TOL:
                raise PhysicalityError(
                    f"smallest symplectic eigenvalue {nu[-1]:.6g} violates the uncertainty bound 0.5"
                )

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    __hash__ = None

    def __repr__(self):
        return f"CovarianceMatrix(n_modes={self.n_modes})"

    @classmethod
    def vacuum(cls, n_modes: int) -> "CovarianceMatrix":
        return cls(VACUUM_VARIANCE * np.eye(2 * n_modes))

    @classmethod
    def thermal(cls, occupations: Sequence[float]) -> "CovarianceMatrix":
        diag = np.repeat(np.asarray(occupations, dtype=float) + 0.5, 2)
        return cls(np.diag(diag))

    @classmethod
    def squeezed(cls, r: float) -> "CovarianceMatrix":
        """Single-mode squeezed vacuum, X squeezed for r > 0."""
        return cls(0.5 * np.diag([np.exp(-2 * r), np.exp(2 * r)]))

    @classmethod
    def two_mode_squeezed(cls, r: float) -> "CovarianceMatrix":
        c, s = np.cosh(2 * r), np.sinh(2 * r)
        z = np.diag([1.0, -1.0])
        m = 0.5 * np.block([[c * np.eye(2), s * z], [s * z, c * np.eye(2)]])
        return cls(m)

    def is_physical(self, tol: float = PHYSICALITY_TOL) -> bool:
        return bool(symplectic_eigenvalues(self)[-1] >= VACUUM_VARIANCE - tol)


CovLike = Union[CovarianceMatrix, ArrayLike]


def _as_array(V: CovLike) -> NDArray[np.float64]:
    if isinstance(V, CovarianceMatrix):
        return V.entries
    m = np.asarray(V, dtype=float)
    _check_even_square(m)
    return m


def _as_two_mode(sigma: CovLike) -> NDArray[np.float64]:
    m = _as_array(sigma)
    if m.shape != (4, 4):
        raise DimensionError(f"two-mode measure needs a 4x4 matrix, got {m.shape}")
    return m


def symplectic_form(n_modes: int) -> NDArray[np.float64]:
    """Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]]."""
    if n_modes < 1:
        raise DimensionError("n_modes must be positive")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(V: CovLike) -> NDArray[np.float64]:
    """Symplectic spectrum of ``V`` in descending order (N values).

    Computed as the moduli of the eigenvalues of i*Omega*V, which come in
    +/- pairs; one member of each pair is kept.
    """
    m = _as_array(V)
    n = m.shape[0] // 2
    lam = np.abs(np.linalg.eigvals(symplectic_form(n) @ m))
    return np.sort(lam)[::-1][::2].copy()


def reduced_cm(V: CovLike, modes: Sequence[int]) -> CovarianceMatrix:
    """Covariance matrix of the subsystem ``modes`` (order preserved)."""
    m = _as_array(V)
    n = m.shape[0] // 2
    modes = list(modes)
    if not modes:
        raise IndexError("at least one mode must be selected")
    if len(set(modes)) != len(modes):
        raise IndexError(f"duplicate mode indices in {modes}")
    for k in modes:
        if not 0 <= k < n:
            raise IndexError(f"mode index {k} out of range for {n} modes")
    idx = np.array([[2 * k, 2 * k + 1] for k in modes]).ravel()
    return CovarianceMatrix(m[np.ix_(idx, idx)], validate=False)


def partial_transpose(V: CovLike, mode: int) -> NDArray[np.float64]:
    """Apply Y -> -Y on ``mode``; returns a plain array (not necessarily physical)."""
    m = _as_array(V)
    n = m.shape[0] // 2
    if not 0 <= mode < n:
        raise IndexError(f"mode index {mode} out of range for {n} modes")
    flip = np.ones(2 * n)
    flip[2 * mode + 1] = -1.0
    return m * np.outer(flip, flip)


def local_rotation(V: CovLike, angles: Sequence[float]) -> NDArray[np.float64]:
    """Rotate each mode's phase space by its own angle."""
    m = _as_array(V)
    n = m.shape[0] // 2
    if len(angles) != n:
        raise DimensionError(f"need {n} angles, got {len(angles)}")
    R = np.zeros_like(m)
    for k, th in enumerate(angles):
        c, s = np.cos(th), np.sin(th)
        R[2 * k:2 * k + 2, 2 * k:2 * k + 2] = [[c, -s], [s, c]]
    return R @ m @ R.T


def _clamp_nonneg(x: float, what: str) -> float:
    if x < -CLAMP_TOL:
        raise PhysicalityError(f"{what} is negative ({x:.3g})")
    return max(0.0, x)


def smallest_pt_eigenvalue(sigma: CovLike) -> float:
    """Closed-form smallest symplectic eigenvalue of the partially transposed state.

    Uses Sigma = det V_a + det V_b - 2 det V_ab on the untransposed blocks.
    """
    m = _as_two_mode(sigma)
    Va, Vb, Vab = m[:2, :2], m[2:, 2:], m[:2, 2:]
    big_sigma = np.linalg.det(Va) + np.linalg.det(Vb) - 2.0 * np.linalg.det(Vab)
    disc = _clamp_nonneg(big_sigma**2 - 4.0 * np.linalg.det(m), "Sigma^2 - 4 det(sigma)")
    inner = _clamp_nonneg(big_sigma - np.sqrt(disc), "Sigma - sqrt(discriminant)")
    return float(np.sqrt(inner / 2.0))


def log_negativity(sigma: CovLike) -> float:
    """Logarithmic negativity max(0, -ln(2 eta)) of a two-mode state."""
    eta = smallest_pt_eigenvalue(sigma)
    if eta == 0.0:
        raise PhysicalityError("partial-transpose symplectic eigenvalue is zero")
    return max(0.0, -np.log(2.0 * eta))


def log_negativity_pt(sigma: CovLike) -> float:
    """Same quantity as :func:`log_negativity`, via the explicit partial transpose."""
    eta = symplectic_eigenvalues(partial_transpose(_as_two_mode(sigma), 1))[-1]
    return max(0.0, -np.log(2.0 * eta))


def renyi2_entropy(V: CovLike) -> float:
    """Renyi-2 entropy 1/2 ln det(2V); zero for pure states."""
    m = _as_array(V)
    det = np.linalg.det(2.0 * m)
    if not det > 0:
        raise PhysicalityError(f"det(2V) = {det:.3g} is not positive")
    return 0.5 * float(np.log(det))


def steering_pair(sigma: CovLike) -> tuple[float, float]:
    """Gaussian steerabilities (a -> b, b -> a) of a two-mode state.

    ST_ab = max(0, S(2 V_a) - S(2 sigma)) and the analogue with V_b.
    Entropy differences within 1e-9 below zero are treated as zero.
    """
    m = _as_two_mode(sigma)
    s_joint = renyi2_entropy(m)
    st_ab = renyi2_entropy(m[:2, :2]) - s_joint
    st_ba = renyi2_entropy(m[2:, 2:]) - s_joint
    return max(0.0, st_ab), max(0.0, st_ba)


def _quadrature_index(V: NDArray[np.float64], mode: int, quadrature: str) -> int:
    n = V.shape[0] // 2
    if not 0 <= mode < n:
        raise IndexError(f"mode index {mode} out of range for {n} modes")
    q = quadrature.upper()
    if q not in QUADRATURES:
        raise ValueError(f"quadrature must be 'X' or 'Y', got {quadrature!r}")
    return 2 * mode + QUADRATURES.index(q)


def quadrature_variance(V: CovLike, mode: int, quadrature: str) -> float:
    m = _as_array(V)
    i = _quadrature_index(m, mode, quadrature)
    return float(m[i, i])


def squeezing_db(V: CovLike, mode: int, quadrature: str) -> float:
    """Squeezing in dB relative to vacuum; positive means below vacuum noise."""
    var = quadrature_variance(V, mode, quadrature)
    if not var > 0:
        raise PhysicalityError(f"quadrature variance {var:.3g} is not positive")
    return float(-10.0 * np.log10(var / VACUUM_VARIANCE))


@dataclass(frozen=True, eq=False)
class WignerField:
    """Wigner function sampled on a rectangular grid.

    ``values[i, j]`` is the value at ``(x_grid[j], y_grid[i])``.
    """

    x_grid: NDArray[np.float64]
    y_grid: NDArray[np.float64]
    values: NDArray[np.float64]

    def integral(self) -> float:
        return float(trapezoid(trapezoid(self.values, self.x_grid, axis=1), self.y_grid))

    def peak(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.x_grid[j]), float(self.y_grid[i]), float(self.values[i, j])


def wigner_single_mode(
    V: CovLike,
    x_grid: ArrayLike,
    y_grid: ArrayLike | None = None,
) -> WignerField:
    """Zero-mean Gaussian Wigner function of a single mode on a grid."""
    m = _as_array(V)
    if m.shape != (2, 2):
        raise DimensionError(f"single-mode Wigner function needs a 2x2 matrix, got {m.shape}")
    det = np.linalg.det(m)
    if not det > 0:
        raise PhysicalityError(f"singular covariance matrix (det = {det:.3g})")
    x = np.asarray(x_grid, dtype=float)
    y = x if y_grid is None else np.asarray(y_grid, dtype=float)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("grid must be finite")
    inv = np.linalg.inv(m)
    X, Y = np.meshgrid(x, y)
    quad = inv[0, 0] * X**2 + 2 * inv[0, 1] * X * Y + inv[1, 1] * Y**2
    W = np.exp(-0.5 * quad) / (2 * np.pi * np.sqrt(det))
    return WignerField(x, y, W)
