"""Tensor-hypercontraction fitting, angle encoding, and coefficient rounding.

The factor pair (chi, zeta) is fit to a two-electron tensor by nonlinear
least squares on the reshaped matrix residual E zeta E^T - V, where
E[(pq), mu] = chi[p, mu] chi[q, mu].  Fits run from several seeded starts,
each a least-squares zeta at a random chi, polished by L-BFGS-B and a short
AdaGrad tail that keeps the best parameters seen.

For the circuit, unit columns of chi are stored as Givens-style angle
sequences, and both the angles and zeta are rounded to fixed-point grids;
a single global dither is tuned so the rounded zeta keeps its 1-norm.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy import optimize

from .factorizations import THCRep

_PROD_FLOOR = 1e-14
_RESIDUAL_FLOOR = 1e-12


@dataclasses.dataclass(frozen=True)
class FitConfig:
    n_starts: int = 20
    seed: int = 0
    lbfgs_maxiter: int = 400
    adagrad_steps: int = 300
    adagrad_rate: float = 0.01
    adagrad_eps: float = 1e-10

    def __post_init__(self):
        if self.n_starts < 1:
            raise ValueError("n_starts must be at least 1")


@dataclasses.dataclass(frozen=True)
class FitResult:
    rep: THCRep
    objective: float
    restart: int


def _pair_matrix(chi: np.ndarray) -> np.ndarray:
    """E[(pq), mu] = chi[p, mu] chi[q, mu], shape (n^2, M)."""
    n, M = chi.shape
    return (chi[:, None, :] * chi[None, :, :]).reshape(n * n, M)


def _residual(chi: np.ndarray, zeta: np.ndarray, V2: np.ndarray) -> np.ndarray:
    E = _pair_matrix(chi)
    return E @ zeta @ E.T - V2


def thc_objective(chi: np.ndarray, zeta: np.ndarray, V: np.ndarray) -> float:
    """Sum of squared residuals of the hypercontracted reconstruction."""
    n = chi.shape[0]
    R = _residual(chi, zeta, V.reshape(n * n, n * n))
    return float(np.sum(R * R))


def thc_gradient(chi: np.ndarray, zeta: np.ndarray, V: np.ndarray):
    """Analytic gradient of thc_objective, returned as (dchi, dzeta)."""
    n, M = chi.shape
    V2 = V.reshape(n * n, n * n)
    E = _pair_matrix(chi)
    R = E @ zeta @ E.T - V2
    dzeta = 2.0 * E.T @ R @ E
    # chi enters both slots of the pair matrix, so the product rule gives two
    # contractions; they coincide only when R inherits the a<->b symmetry.
    F = (R @ (E @ zeta)).reshape(n, n, M)
    dchi = 4.0 * (
        np.einsum("bk,pbk->pk", chi, F) + np.einsum("ak,apk->pk", chi, F)
    )
    return dchi, dzeta


def exact_zeta_step(chi: np.ndarray, zeta: np.ndarray, direction: np.ndarray,
                    V: np.ndarray) -> float:
    """Exact minimizer of the objective along a zeta-only direction.

    The objective is quadratic in zeta, so with H = E d E^T the optimum of
    s -> sum((R + s H)^2) is closed-form.
    """
    n = chi.shape[0]
    V2 = V.reshape(n * n, n * n)
    E = _pair_matrix(chi)
    R = E @ zeta @ E.T - V2
    H = E @ direction @ E.T
    denom = float(np.sum(H * H))
    if denom == 0.0:
        return 0.0
    return -float(np.sum(R * H)) / denom


def _zeta_lstsq(chi: np.ndarray, V2: np.ndarray) -> np.ndarray:
    """Least-squares zeta at fixed chi via the pair-matrix Gram pseudoinverse."""
    E = _pair_matrix(chi)
    gram_inv = np.linalg.pinv(E.T @ E)
    zeta = gram_inv @ (E.T @ V2 @ E) @ gram_inv
    return 0.5 * (zeta + zeta.T)


def _pack(chi, zeta):
    return np.concatenate([chi.ravel(), zeta.ravel()])


def _unpack(x, n, M):
    chi = x[: n * M].reshape(n, M)
    zeta = x[n * M:].reshape(M, M)
    return chi, zeta


def _normalized_rep(chi: np.ndarray, zeta: np.ndarray) -> THCRep:
    """Unit-column form: rescale zeta by the squared norms, fix dead columns."""
    chi = chi.copy()
    zeta = 0.5 * (zeta + zeta.T)
    norms = np.linalg.norm(chi, axis=0)
    dead = norms < 1e-14
    if np.any(dead):
        chi[:, dead] = 0.0
        chi[0, dead] = 1.0
        zeta[dead, :] = 0.0
        zeta[:, dead] = 0.0
        norms = np.where(dead, 1.0, norms)
    chi = chi / norms
    zeta = zeta * np.outer(norms**2, norms**2)
    return THCRep(chi=chi, zeta=0.5 * (zeta + zeta.T))


def thc_fit(V: np.ndarray, rank: int, config: FitConfig | None = None) -> FitResult:
    """Fit a rank-M hypercontraction to the two-electron tensor.

    Runs config.n_starts seeded restarts; a restart that produces a
    non-finite objective is dropped.  The strictly lowest final objective
    wins, ties keeping the earliest seed, so results are reproducible
    bit-for-bit for a fixed config.
    """
    if config is None:
        config = FitConfig()
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    if V.shape != (n, n, n, n):
        raise ValueError("V must be a fourth-order tensor with equal sides")
    if rank < 1:
        raise ValueError("rank must be at least 1")
    V2 = V.reshape(n * n, n * n)
    scale = float(np.sum(V2 * V2))

    def fun(x):
        chi, zeta = _unpack(x, n, rank)
        E = _pair_matrix(chi)
        R = E @ zeta @ E.T - V2
        obj = float(np.sum(R * R))
        dzeta = 2.0 * E.T @ R @ E
        F = (R @ (E @ zeta)).reshape(n, n, rank)
        dchi = 4.0 * np.einsum("bk,pbk->pk", chi, F)
        return obj, _pack(dchi, dzeta)

    best_x = None
    best_obj = np.inf
    best_restart = -1
    for restart in range(config.n_starts):
        rng = np.random.default_rng(config.seed + restart)
        chi0 = rng.normal(size=(n, rank))
        chi0 /= np.linalg.norm(chi0, axis=0)
        zeta0 = _zeta_lstsq(chi0, V2)
        if not np.all(np.isfinite(zeta0)):
            continue
        x = _pack(chi0, zeta0)
        res = optimize.minimize(
            fun, x, jac=True, method="L-BFGS-B",
            options={"maxiter": config.lbfgs_maxiter},
        )
        if not np.all(np.isfinite(res.x)):
            continue
        x = res.x
        obj, grad = fun(x)
        if not math.isfinite(obj):
            continue
        # AdaGrad tail; the best point seen is kept, so it never regresses.
        local_best_x, local_best = x, obj
        accum = np.zeros_like(x)
        for _ in range(config.adagrad_steps):
            if local_best < 1e-14 * max(scale, 1.0):
                break
            accum += grad * grad
            x = x - config.adagrad_rate * grad / (np.sqrt(accum)
                                                  + config.adagrad_eps)
            obj, grad = fun(x)
            if not math.isfinite(obj):
                break
            if obj < local_best:
                local_best, local_best_x = obj, x
        if local_best < best_obj:
            best_obj = local_best
            best_x = local_best_x
            best_restart = restart
    if best_x is None:
        raise RuntimeError("every restart diverged")
    chi, zeta = _unpack(best_x, n, rank)
    rep = _normalized_rep(chi, zeta)
    final = thc_objective(rep.chi, rep.zeta, V)
    return FitResult(rep=rep, objective=final, restart=best_restart)


def angles_from_chi(chi: np.ndarray) -> np.ndarray:
    """Encode unit columns as angle sequences, one column of n angles each.

    Component p < n-1 contributes theta_p = arccos(v_p / prod)/2 where prod
    is the running product of sin(2 theta); the final angle is 0 or pi/2 and
    carries only the sign of the last component.  Once the product
    underflows, every remaining component must already be negligible.
    """
    chi = np.asarray(chi, dtype=float)
    n, M = chi.shape
    theta = np.zeros((n, M))
    for mu in range(M):
        v = chi[:, mu]
        prod = 1.0
        for p in range(n - 1):
            if prod < _PROD_FLOOR:
                if np.any(np.abs(v[p:]) >= _RESIDUAL_FLOOR):
                    raise ValueError(
                        f"column {mu} has weight beyond an exhausted prefix"
                    )
                prod = 0.0
                break
            t = 0.5 * math.acos(min(1.0, max(-1.0, v[p] / prod)))
            theta[p, mu] = t
            prod *= math.sin(2.0 * t)
        else:
            if prod >= _PROD_FLOOR and v[n - 1] / prod < 0.0:
                theta[n - 1, mu] = math.pi / 2.0
    return theta


def chi_from_angles(theta: np.ndarray) -> np.ndarray:
    """Decode angle sequences back to unit columns (inverse of angles_from_chi)."""
    theta = np.asarray(theta, dtype=float)
    n, M = theta.shape
    chi = np.zeros((n, M))
    for mu in range(M):
        prod = 1.0
        for p in range(n):
            chi[p, mu] = prod * math.cos(2.0 * theta[p, mu])
            prod *= math.sin(2.0 * theta[p, mu])
    return chi


@dataclasses.dataclass(frozen=True)
class QuantizedTHC:
    """Fixed-point form of a hypercontraction: angle words and rounded zeta.

    x is the global dither applied before rounding zeta magnitudes; warning
    is set when no dither preserved the 1-norm to within half a grid step.
    """

    theta: np.ndarray
    zeta_q: np.ndarray
    beth: int
    aleph: int
    x: float
    warning: bool

    def chi(self) -> np.ndarray:
        return chi_from_angles(self.theta)


def quantize(rep: THCRep, beth: int, aleph: int) -> QuantizedTHC:
    """Round angles to beth-bit words and zeta to an aleph-bit grid.

    The zeta grid step is lambda_z/(d 2^aleph) off the diagonal and twice
    that on it, with d the state-preparation domain n + M(M+1)/2.  Rounding
    uses sign-magnitude with a single dither x in [-1, 1] chosen by
    bisection so the rounded 1-norm matches sum |zeta|; a grid scan backs
    the bisection up, and on failure x = 0 is kept with warning set.
    """
    if beth < 1 or aleph < 1:
        raise ValueError("bit counts must be positive")
    n, M = rep.chi.shape
    theta = angles_from_chi(rep.chi)
    u_theta = 2.0 * math.pi / 2.0**beth
    theta_q = u_theta * np.round(theta / u_theta)

    zeta = rep.zeta
    lam_z = float(np.sum(np.abs(zeta)))
    d = n + M * (M + 1) // 2
    u_off = lam_z / (d * 2.0**aleph)
    u_diag = lam_z / (d * 2.0 ** (aleph - 1))
    units = np.where(np.eye(M, dtype=bool), u_diag, u_off)

    signs = np.sign(zeta)
    mags = np.abs(zeta) / units

    def rounded(x: float) -> np.ndarray:
        return units * signs * np.round(mags + x)

    def gap(x: float) -> float:
        return float(np.sum(np.abs(rounded(x)))) - lam_z

    tol = 0.5 * u_off
    x, warning = 0.0, False
    if lam_z > 0.0:
        lo, hi = -1.0, 1.0
        g_lo, g_hi = gap(lo), gap(hi)
        found = False
        if g_lo <= 0.0 <= g_hi:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if gap(mid) < 0.0:
                    lo = mid
                else:
                    hi = mid
            for cand in (0.5 * (lo + hi), lo, hi):
                if abs(gap(cand)) <= tol:
                    x, found = cand, True
                    break
        if not found:
            grid = np.linspace(-1.0, 1.0, 100001)
            gaps = np.array([abs(gap(g)) for g in grid])
            idx = int(np.argmin(gaps))
            if gaps[idx] <= tol:
                x = float(grid[idx])
            else:
                x, warning = 0.0, True
    return QuantizedTHC(theta=theta_q, zeta_q=rounded(x), beth=beth,
                        aleph=aleph, x=x, warning=warning)
