"""
Steady-state covariance of the linearized three-mode system.

The algebraic route solves A V + V A^T = -D through its 36-dimensional
vectorized form. :func:`covariance_ode_oracle` gets the same matrix by
time-stepping dV/dt = A V + V A^T + D with classical RK4 and is kept
independent of the linear solve so that the two can check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from . import gaussian as gs
from .errors import BogoliubovDomainError, InstabilityError, OracleFailure
from .system import (
    DriveConfig,
    SystemParams,
    bogoliubov_params,
    build_diffusion,
    build_drift,
    thermal_occupations,
)

STABILITY_MARGIN = 1e-9
RESIDUAL_TOL = 1e-10

MODE_INDEX = {"a": 0, "b": 1, "c": 2}
QUADRATURE_LABELS = ("X_a", "Y_a", "X_b", "Y_b", "X_c", "Y_c")


def stability(A: NDArray[np.float64], margin: float | None = None) -> tuple[bool, float]:
    """Return (stable, largest real part of the spectrum of A).

    Stable means the largest real part is below ``-margin``. By default the
    margin is 1e-9 times the largest diagonal rate of A, which keeps the
    verdict invariant under rescaling A by a positive constant.
    """
    A = np.asarray(A, dtype=float)
    if margin is None:
        margin = STABILITY_MARGIN * float(np.max(np.abs(np.diag(A))))
    max_re = float(np.max(np.linalg.eigvals(A).real))
    return max_re < -margin, max_re


def _lyapunov_operator(A: NDArray[np.float64]) -> NDArray[np.float64]:
    # row-major vec: vec(AV) = (A kron I) vec(V), vec(VA^T) = (I kron A) vec(V)
    eye = np.eye(A.shape[0])
    return np.kron(A, eye) + np.kron(eye, A)


def lyapunov_residual(A, V, D) -> float:
    """Frobenius norm of A V + V A^T + D relative to that of D."""
    A, V, D = (np.asarray(x, dtype=float) for x in (A, V, D))
    return float(np.linalg.norm(A @ V + V @ A.T + D) / np.linalg.norm(D))


def _solve_vectorized(A, D):
    n = A.shape[0]
    K = _lyapunov_operator(A)
    try:
        v = np.linalg.solve(K, -D.ravel())
        V = v.reshape(n, n)
        # one step of iterative refinement
        R = A @ V + V @ A.T + D
        V = V + np.linalg.solve(K, -R.ravel()).reshape(n, n)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular Lyapunov system: {exc}") from exc
    return 0.5 * (V + V.T)


def solve_lyapunov(A, D, margin: float | None = None,
                   validate: bool = True) -> gs.CovarianceMatrix:
    """Steady-state covariance for Hurwitz drift ``A`` and diffusion ``D``."""
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    stable, max_re = stability(A, margin)
    if not stable:
        raise InstabilityError(f"drift matrix is not Hurwitz (max Re eig = {max_re:.6g})")
    return gs.CovarianceMatrix(_solve_vectorized(A, D), validate=validate)


def _rk4_step(K, d, h, v):
    k1 = K @ v + d
    k2 = K @ (v + 0.5 * h * k1) + d
    k3 = K @ (v + 0.5 * h * k2) + d
    k4 = K @ (v + h * k3) + d
    return v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def covariance_ode_oracle(A, D, V0, t_final: float | None = None,
                          dt: float | None = None) -> gs.CovarianceMatrix:
    """Integrate dV/dt = A V + V A^T + D from ``V0`` with fixed-step RK4.

    ``t_final`` defaults to 20 / |max Re eig(A)| and ``dt`` is capped so that
    ||A||_2 * dt <= 0.05. Since one RK4 step is an affine map of vec(V), the
    step is tabulated once (applied to the unit basis) and n steps are
    composed by binary powering; the result equals n sequential steps up to
    rounding, which makes horizons of millions of steps affordable.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    n = A.shape[0]
    stable, max_re = stability(A)
    if not stable:
        raise InstabilityError(f"drift matrix is not Hurwitz (max Re eig = {max_re:.6g})")
    if t_final is None:
        t_final = 20.0 / abs(max_re)
    h_max = 0.05 / np.linalg.norm(A, 2)
    h = h_max if dt is None else min(dt, h_max)
    n_steps = max(1, math.ceil(t_final / h))
    h = t_final / n_steps

    K = _lyapunov_operator(A)
    d = D.ravel()
    m = n * n
    c = _rk4_step(K, d, h, np.zeros(m))
    M = np.column_stack([_rk4_step(K, d, h, e) - c for e in np.eye(m)])
    if np.max(np.abs(np.linalg.eigvals(M))) >= 1.0:
        raise OracleFailure("RK4 step is not contractive; reduce dt")

    # v -> M v + c applied n_steps times, by squaring (M, c) -> (M M, M c + c)
    v = V0.ravel().copy()
    while n_steps:
        if n_steps & 1:
            v = M @ v + c
        n_steps >>= 1
        if n_steps:
            c = M @ c + c
            M = M @ M
    if not np.all(np.isfinite(v)) or np.linalg.norm(v) > 1e12 * (1 + np.linalg.norm(V0) + np.linalg.norm(D)):
        raise OracleFailure("covariance integration diverged")
    V = v.reshape(n, n)
    return gs.CovarianceMatrix(0.5 * (V + V.T), validate=False)


@dataclass(frozen=True)
class SteadyStateReport:
    """Stability verdict and observables at one parameter point.

    When ``stable`` is False every observable is None. Squeezing values are
    in dB; ``s_b`` is the X_b (displacement) quadrature and ``s_c`` the Y_c
    (phase) quadrature.
    """

    params: SystemParams
    drives: DriveConfig
    stable: bool
    max_eig_real: float
    covariance: gs.CovarianceMatrix | None = None
    squeezing: dict[str, float] | None = None
    s_b: float | None = None
    s_c: float | None = None
    en_ab: float | None = None
    en_bc: float | None = None
    st_ab: float | None = None
    st_ba: float | None = None
    bogoliubov_occupation: float | None = None
    lyapunov_residual: float | None = None

    OBSERVABLES = ("s_b", "s_c", "en_ab", "en_bc", "st_ab", "st_ba",
                   "bogoliubov_occupation", "lyapunov_residual")

    def observables(self) -> dict[str, float]:
        """Scalar observables with NaN standing in for unavailable values."""
        out = {"stable": float(self.stable), "max_eig_real": self.max_eig_real}
        for name in self.OBSERVABLES:
            v = getattr(self, name)
            out[name] = float("nan") if v is None else float(v)
        return out


def bogoliubov_occupation(V, drives: DriveConfig) -> float | None:
    """Mean quanta in the mechanical Bogoliubov mode, None if G+ >= G-."""
    try:
        bog = bogoliubov_params(drives)
    except BogoliubovDomainError:
        return None
    # beta = b cosh r + b^dag sinh r scales X_b by e^r and Y_b by e^-r
    S = np.diag([math.exp(bog.r), math.exp(-bog.r)])
    Vb = np.asarray(V)[2:4, 2:4]
    return float(np.trace(S @ Vb @ S) / 2.0 - 0.5)


def steady_state_report(params: SystemParams, drives: DriveConfig) -> SteadyStateReport:
    """Solve for the steady state and evaluate every observable.

    An unstable drift matrix does not raise; the report comes back with
    ``stable=False`` so that sweeps can mark the point.
    """
    A = build_drift(params, drives)
    D = build_diffusion(params, thermal_occupations(params))
    stable, max_re = stability(A, STABILITY_MARGIN * params.kappa_a)
    if not stable:
        return SteadyStateReport(params, drives, False, max_re)

    cov = gs.CovarianceMatrix(_solve_vectorized(A, D))
    squeezing = {
        label: gs.squeezing_db(cov, i // 2, "XY"[i % 2])
        for i, label in enumerate(QUADRATURE_LABELS)
    }
    sigma_ab = gs.reduced_cm(cov, [0, 1])
    sigma_bc = gs.reduced_cm(cov, [1, 2])
    st_ab, st_ba = gs.steering_pair(sigma_ab)
    return SteadyStateReport(
        params=params,
        drives=drives,
        stable=True,
        max_eig_real=max_re,
        covariance=cov,
        squeezing=squeezing,
        s_b=squeezing["X_b"],
        s_c=squeezing["Y_c"],
        en_ab=gs.log_negativity(sigma_ab),
        en_bc=gs.log_negativity(sigma_bc),
        st_ab=st_ab,
        st_ba=st_ba,
        bogoliubov_occupation=bogoliubov_occupation(cov, drives),
        lyapunov_residual=lyapunov_residual(A, cov.entries, D),
    )
