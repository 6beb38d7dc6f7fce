"""Gauss-Hermite quadrature oracle for every integral formula in the package.

All complex-plane integrals discretize the Gaussian measure on C^d through
tensor-product Gauss-Hermite rules on R^(2d), with the grid recentered at
the stationary point of the dominating Gaussian factor of each integrand:
w = z for operator application, (z + w)/2 for the smoothing and twisted
product integrals, and sqrt(2) Re z for the real-space transform kernel.
With the default 64 nodes per axis the rules integrate the polynomial parts
exactly and leave only entire-function remainders far below test tolerances.

Integration is d <= 3 only; tensor grids grow as M^(2d) and the identities
under test are dimension-uniform.
"""

from __future__ import annotations

import cmath
import functools
import itertools
import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite import hermgauss

from .errors import DimensionMismatch, DomainError, PreconditionError
from .multiindex import MultiIndex, enumerate_degree, multi_binomial, total_degree, validate_index
from .series import (
    KernelCoeffs,
    SeriesCoeffs,
    eval_basis,
    eval_kernel,
    eval_series,
)
from .symbolcalc import OperatorMatrix

MAX_NODES = 256
DEFAULT_NODES = 64
MAX_COMPLEX_DIM = 3

NODES_ENV_VAR = "FOCK_QUAD_NODES"


def default_nodes() -> int:
    """Default nodes per real axis; FOCK_QUAD_NODES overrides."""
    raw = os.environ.get(NODES_ENV_VAR)
    if raw is None:
        return DEFAULT_NODES
    try:
        m = int(raw)
    except ValueError as exc:
        raise PreconditionError(f"{NODES_ENV_VAR} must be an integer, got {raw!r}") from exc
    if not 2 <= m <= MAX_NODES:
        raise PreconditionError(f"{NODES_ENV_VAR} must lie in [2, {MAX_NODES}], got {m}")
    return m


@dataclass
class QuadratureGrid:
    """Tensor-product Gauss-Hermite rule against exp(-((x - center)/scale)^2) per axis.

    ``weights`` integrate polynomials against the Gaussian (their sum is the
    total Gaussian mass); ``flat_weights`` carry the exp(+xi^2) correction and
    integrate raw functions of comparable decay.
    """

    kind: str
    M: int
    dims: int
    center: np.ndarray
    scale: float
    nodes: np.ndarray
    weights: np.ndarray
    flat_weights: np.ndarray

    def integrate(self, f: Callable) -> complex:
        """Plain Lebesgue integral of f over R^dims (f vectorized over (n, dims))."""
        vals = np.asarray(f(self.nodes))
        return complex(np.sum(self.flat_weights * vals))

    def integrate_weighted(self, f: Callable) -> complex:
        """Integral of f against the grid's own Gaussian weight."""
        vals = np.asarray(f(self.nodes))
        return complex(np.sum(self.weights * vals))


@functools.lru_cache(maxsize=16)
def _hermgauss_cached(M: int):
    x, w = hermgauss(M)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_hermite_grid(M: int, dims: int, center: Sequence[float] | None = None,
                       scale: float = 1.0) -> QuadratureGrid:
    """Build the rule; exact for polynomial degree <= 2M - 1 per axis."""
    if not 2 <= M <= MAX_NODES:
        raise PreconditionError(f"nodes per axis must lie in [2, {MAX_NODES}], got {M}")
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if not (scale > 0):
        raise ValueError("scale must be positive")
    c = np.zeros(dims) if center is None else np.asarray(center, dtype=float)
    if c.shape != (dims,):
        raise DimensionMismatch(f"center of shape {c.shape} does not match dims={dims}")
    x, w = _hermgauss_cached(M)
    # per-axis combined weights stay O(1): w_i ~ exp(-x_i^2)
    flat_axis = scale * w * np.exp(x * x)
    axis_w = scale * w

    n = M ** dims
    nodes = np.empty((n, dims))
    weights = np.ones(n)
    flat = np.ones(n)
    for j in range(dims):
        reps_outer = M ** j
        reps_inner = M ** (dims - 1 - j)
        col = np.repeat(np.tile(x, reps_outer), reps_inner)
        nodes[:, j] = c[j] + scale * col
        weights *= np.repeat(np.tile(axis_w, reps_outer), reps_inner)
        flat *= np.repeat(np.tile(flat_axis, reps_outer), reps_inner)

    grid = QuadratureGrid("GaussHermite", M, dims, c, float(scale), nodes, weights, flat)
    mass = (scale * math.sqrt(math.pi)) ** dims
    if abs(float(np.sum(weights)) - mass) > 1e-12 * mass:
        raise RuntimeError("quadrature weights failed the Gaussian-mass invariant")
    return grid


# ---------------------------------------------------------------------------
# complex-plane helpers
# ---------------------------------------------------------------------------

def _as_cvector(z, d: int) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(z, dtype=complex))
    if arr.shape != (d,):
        raise DimensionMismatch(f"point of shape {arr.shape} does not match dimension {d}")
    return arr


def to_complex(nodes: np.ndarray) -> np.ndarray:
    """Pair interleaved real coordinates (Re z1, Im z1, ...) into complex vectors."""
    return nodes[:, 0::2] + 1j * nodes[:, 1::2]


def complex_grid(M: int, d: int, center: Sequence[complex] | None = None,
                 scale: float = 1.0) -> QuadratureGrid:
    """Grid on R^(2d) for integrals over C^d (interleaved coordinates)."""
    if d > MAX_COMPLEX_DIM:
        raise PreconditionError(f"complex quadrature limited to d <= {MAX_COMPLEX_DIM}, got d={d}")
    if center is None:
        c = None
    else:
        cc = _as_cvector(center, d)
        c = np.empty(2 * d)
        c[0::2] = cc.real
        c[1::2] = cc.imag
    return gauss_hermite_grid(M, 2 * d, c, scale)


def _series_fn(F) -> Callable:
    if isinstance(F, SeriesCoeffs):
        return lambda w: eval_series(F, w)
    if callable(F):
        return F
    raise TypeError("expected SeriesCoeffs or callable")


def _kernel_fn(a) -> Callable:
    if isinstance(a, KernelCoeffs):
        return lambda z, w: eval_kernel(a, z, w)
    if callable(a):
        return a
    raise TypeError("expected KernelCoeffs or callable")


def _diag_fn(a) -> Callable:
    if isinstance(a, KernelCoeffs):
        return lambda w: eval_kernel(a, w, w)
    if callable(a):
        return a
    raise TypeError("expected KernelCoeffs or callable")


def _check_finite(vals: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(vals)):
        raise DomainError("integrand produced non-finite values")
    return vals


def _hermitian_dot(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """(z, w) = sum z_j conj(w_j), broadcasting over a leading point axis."""
    return np.sum(z * np.conj(w), axis=-1)


def integrate_gaussian_c(f: Callable, d: int, grid: QuadratureGrid) -> complex:
    """Integral of f against the normalized Gaussian measure on C^d."""
    if grid.dims != 2 * d:
        raise DimensionMismatch(f"grid dims {grid.dims} != 2*d = {2 * d}")

    def integrand(pts):
        z = to_complex(pts)
        vals = np.asarray(f(z), dtype=complex)
        return _check_finite(vals * np.exp(-np.sum(np.abs(z) ** 2, axis=-1)))

    return grid.integrate(integrand) * math.pi ** (-d)


# ---------------------------------------------------------------------------
# operator application and symbol smoothing
# ---------------------------------------------------------------------------

def wick_apply_quad(a, F, z, M: int | None = None, d: int | None = None) -> complex:
    """Operator with symbol a applied to F at z, through the defining integral.

    pi^(-d) integral a(z, w) F(w) exp((z, w) - |w|^2) dlambda(w), recentered
    at w = z where the Gaussian factor peaks.
    """
    if d is None:
        d = a.d2 if isinstance(a, KernelCoeffs) else (F.d if isinstance(F, SeriesCoeffs) else 1)
    zz = _as_cvector(z, d)
    af, ff = _kernel_fn(a), _series_fn(F)
    grid = complex_grid(M or default_nodes(), d, center=zz)

    def integrand(pts):
        w = to_complex(pts)
        expo = _hermitian_dot(zz[np.newaxis, :], w) - np.sum(np.abs(w) ** 2, axis=-1)
        return _check_finite(af(zz, w) * np.asarray(ff(w), dtype=complex) * np.exp(expo))

    return grid.integrate(integrand) * math.pi ** (-d)


def antiwick_apply_quad(a_diag, F, z, M: int | None = None, d: int | None = None) -> complex:
    """Anti-Wick application: only the diagonal values a(w, w) enter the integrand."""
    if d is None:
        d = a_diag.d2 if isinstance(a_diag, KernelCoeffs) else (F.d if isinstance(F, SeriesCoeffs) else 1)
    zz = _as_cvector(z, d)
    af, ff = _diag_fn(a_diag), _series_fn(F)
    grid = complex_grid(M or default_nodes(), d, center=zz)

    def integrand(pts):
        w = to_complex(pts)
        expo = _hermitian_dot(zz[np.newaxis, :], w) - np.sum(np.abs(w) ** 2, axis=-1)
        return _check_finite(np.asarray(af(w), dtype=complex) * np.asarray(ff(w), dtype=complex) * np.exp(expo))

    return grid.integrate(integrand) * math.pi ** (-d)


def berezin_transform_quad(a_diag, z, w, M: int | None = None, d: int | None = None) -> complex:
    """Gaussian smoothing of the diagonal symbol.

    pi^(-d) integral a(w1, w1) exp(-(z - w1, w - w1)) dlambda(w1), recentered
    at (z + w)/2.
    """
    if d is None:
        d = a_diag.d2 if isinstance(a_diag, KernelCoeffs) else 1
    zz = _as_cvector(z, d)
    ww = _as_cvector(w, d)
    af = _diag_fn(a_diag)
    grid = complex_grid(M or default_nodes(), d, center=(zz + ww) / 2.0)

    def integrand(pts):
        w1 = to_complex(pts)
        expo = -_hermitian_dot(zz[np.newaxis, :] - w1, ww[np.newaxis, :] - w1)
        return _check_finite(np.asarray(af(w1), dtype=complex) * np.exp(expo))

    return grid.integrate(integrand) * math.pi ** (-d)


# ---------------------------------------------------------------------------
# real-space transforms
# ---------------------------------------------------------------------------

def bargmann_kernel(z: np.ndarray, y: np.ndarray) -> np.ndarray:
    """pi^(-d/4) exp(-(1/2)(<z, z> + |y|^2) + sqrt(2) <z, y>), bilinear <., .>."""
    d = z.shape[-1]
    zz = np.sum(z * z, axis=-1)
    yy = np.sum(y * y, axis=-1)
    zy = np.sum(z * y, axis=-1)
    return math.pi ** (-d / 4.0) * np.exp(-0.5 * (zz + yy) + math.sqrt(2.0) * zy)


def bargmann_quad(f: Callable, z, M: int | None = None, d: int | None = None) -> complex:
    """Transform of a real-space function: integral of the Gaussian kernel against f.

    Recentered at y = sqrt(2) Re z, the stationary point of the kernel's
    Gaussian factor; scale sqrt(2) to match its width.
    """
    if d is None:
        d = np.atleast_1d(np.asarray(z)).shape[-1]
    zz = _as_cvector(z, d)
    grid = gauss_hermite_grid(M or default_nodes(), d,
                              center=math.sqrt(2.0) * zz.real, scale=math.sqrt(2.0))

    def integrand(y):
        return _check_finite(bargmann_kernel(zz[np.newaxis, :], y) * np.asarray(f(y), dtype=complex))

    return grid.integrate(integrand)


def gaussian_window(y: np.ndarray) -> np.ndarray:
    """The normalized Gaussian window pi^(-d/4) exp(-|y|^2 / 2)."""
    y = np.asarray(y, dtype=float)
    if y.ndim == 1:
        y = y.reshape(-1, 1)
    d = y.shape[-1]
    return math.pi ** (-d / 4.0) * np.exp(-0.5 * np.sum(y * y, axis=-1))


def stft_gaussian_quad(f: Callable, x, xi, M: int | None = None) -> complex:
    """Short-time Fourier transform with the Gaussian window.

    (2 pi)^(-d/2) integral f(y) conj(window(y - x)) exp(-i <y, xi>) dy,
    recentered at y = x.
    """
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    xiv = np.atleast_1d(np.asarray(xi, dtype=float))
    if xv.shape != xiv.shape:
        raise DimensionMismatch("x and xi must have the same dimension")
    d = xv.shape[0]
    grid = gauss_hermite_grid(M or default_nodes(), d, center=xv, scale=math.sqrt(2.0))

    def integrand(y):
        phase = np.exp(-1j * np.sum(y * xiv[np.newaxis, :], axis=-1))
        return _check_finite(np.asarray(f(y), dtype=complex) * gaussian_window(y - xv[np.newaxis, :]) * phase)

    return grid.integrate(integrand) * (2.0 * math.pi) ** (-d / 2.0)


def uv_map(F_value: complex, x, xi) -> complex:
    """Phase-space-to-complex change of picture, applied pointwise.

    Returns (2 pi)^(d/2) exp((|x|^2 + |xi|^2)/2) exp(-i <x, xi>) * F_value,
    where the caller supplies F_value = F(sqrt(2) x, -sqrt(2) xi).
    """
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    xiv = np.atleast_1d(np.asarray(xi, dtype=float))
    d = xv.shape[0]
    pref = (2.0 * math.pi) ** (d / 2.0) * math.exp(0.5 * (np.dot(xv, xv) + np.dot(xiv, xiv)))
    return pref * cmath.exp(-1j * float(np.dot(xv, xiv))) * F_value


def uv_inv(F: Callable, x, xi) -> complex:
    """Inverse change of picture: evaluates F at (x - i xi)/sqrt(2) with its prefactor."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    xiv = np.atleast_1d(np.asarray(xi, dtype=float))
    d = xv.shape[0]
    pref = (2.0 * math.pi) ** (-d / 2.0) * math.exp(-0.25 * (np.dot(xv, xv) + np.dot(xiv, xiv)))
    z = (xv - 1j * xiv) / math.sqrt(2.0)
    return pref * cmath.exp(-0.5j * float(np.dot(xv, xiv))) * complex(F(z))


def _stft_basis_values(index: Sequence[MultiIndex], xs: np.ndarray, xis: np.ndarray) -> np.ndarray:
    """Closed-form window transforms of the Hermite basis on phase-space points."""
    d = xs.shape[-1]
    n = xs.shape[0]
    pref = (2.0 * math.pi) ** (-d / 2.0) * np.exp(
        -0.25 * (np.sum(xs * xs, axis=-1) + np.sum(xis * xis, axis=-1))
    ) * np.exp(-0.5j * np.sum(xs * xis, axis=-1))
    zpts = (xs - 1j * xis) / math.sqrt(2.0)
    vals = np.empty((len(index), n), dtype=complex)
    for i, alpha in enumerate(index):
        vals[i] = pref * eval_basis(alpha, zpts)
    return vals


def toeplitz_matrix_quad(symbol: Callable, N: int, M: int | None = None, d: int = 1) -> OperatorMatrix:
    """Localization-operator matrix in the Hermite basis by phase-space quadrature.

    M(j, k) = integral symbol(x, xi) V_k(x, xi) conj(V_j(x, xi)) dx dxi with
    V_k the window transform of the k-th Hermite function, evaluated in
    closed form.
    """
    if d > MAX_COMPLEX_DIM:
        raise PreconditionError(f"toeplitz quadrature limited to d <= {MAX_COMPLEX_DIM}")
    grid = gauss_hermite_grid(M or default_nodes(), 2 * d, scale=math.sqrt(2.0))
    xs = grid.nodes[:, :d]
    xis = grid.nodes[:, d:]
    index = enumerate_degree(d, N)
    V = _stft_basis_values(index, xs, xis)
    sym = _check_finite(np.asarray(symbol(xs, xis), dtype=complex))
    weighted = V * (grid.flat_weights * sym)[np.newaxis, :]
    mat = (weighted @ V.conj().T).T
    return OperatorMatrix(N, d, index, mat)


# ---------------------------------------------------------------------------
# composition and the rank-one fixture
# ---------------------------------------------------------------------------

def twisted_product_quad(a1, a2, z, w, M: int | None = None, d: int | None = None) -> complex:
    """Integral form of the symbol composition.

    pi^(-d) integral a1(z, u) a2(u, w) exp(-(z - u, w - u)) dlambda(u),
    recentered at (z + w)/2.
    """
    if d is None:
        d = a1.d2 if isinstance(a1, KernelCoeffs) else 1
    zz = _as_cvector(z, d)
    ww = _as_cvector(w, d)
    f1, f2 = _kernel_fn(a1), _kernel_fn(a2)
    grid = complex_grid(M or default_nodes(), d, center=(zz + ww) / 2.0)

    def integrand(pts):
        u = to_complex(pts)
        expo = -_hermitian_dot(zz[np.newaxis, :] - u, ww[np.newaxis, :] - u)
        return _check_finite(np.asarray(f1(zz, u), dtype=complex)
                             * np.asarray(f2(u, ww), dtype=complex) * np.exp(expo))

    return grid.integrate(integrand) * math.pi ** (-d)


def rank_one_check(alpha: Sequence[int], beta: Sequence[int], t: complex, z, w,
                   M: int | None = None) -> dict:
    """Both sides of the rank-one smoothing identity for basis symbols.

    lhs: pi^(-d) integral e_alpha(t0 w1) e_beta(t0 conj(w1)) exp(-(z-w1, w-w1)) dlambda(w1)
    rhs: sum_{g <= alpha, beta} sqrt(C(alpha,g) C(beta,g)) t^|g|
         e_{alpha-g}(t0 z) e_{beta-g}(t0 conj(w)),
    with t0 the principal square root of t.  Exact agreement is the
    numerical pin for the argument convention of the dual transition.
    """
    a = validate_index(alpha)
    b = validate_index(beta)
    if len(a) != len(b):
        raise DimensionMismatch("alpha and beta must share a dimension")
    if t == 0:
        raise PreconditionError("t must be nonzero")
    d = len(a)
    t0c = cmath.sqrt(t)
    zz = _as_cvector(z, d)
    ww = _as_cvector(w, d)

    grid = complex_grid(M or default_nodes(), d, center=(zz + ww) / 2.0)

    def integrand(pts):
        w1 = to_complex(pts)
        expo = -_hermitian_dot(zz[np.newaxis, :] - w1, ww[np.newaxis, :] - w1)
        return _check_finite(eval_basis(a, t0c * w1) * eval_basis(b, t0c * np.conj(w1)) * np.exp(expo))

    lhs = grid.integrate(integrand) * math.pi ** (-d)

    rhs = 0.0 + 0.0j
    gmax = tuple(min(ai, bi) for ai, bi in zip(a, b))
    tz = t0c * zz
    tw = t0c * np.conj(ww)
    tpow = [complex(1.0)]
    for _ in range(total_degree(gmax)):
        tpow.append(tpow[-1] * t)
    for g in itertools.product(*(range(m + 1) for m in gmax)):
        weight = math.sqrt(multi_binomial(a, g) * multi_binomial(b, g)) * tpow[total_degree(g)]
        ag = tuple(ai - gi for ai, gi in zip(a, g))
        bg = tuple(bi - gi for bi, gi in zip(b, g))
        rhs += weight * eval_basis(ag, tz) * eval_basis(bg, tw)
    return {"lhs": lhs, "rhs": complex(rhs)}
