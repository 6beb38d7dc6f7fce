"""Kernel / Wick / anti-Wick symbol transitions and operator-level algebra.

The kernel of the operator with Wick symbol a is the exponential raise of a
(t0 at t = 1); the inverse transition is t0 at t = -1.  Anti-Wick symbols
convert to Wick symbols through the dual operator t0_star at t = 1 (the
coefficient form of Gaussian smoothing of the diagonal symbol) and back at
t = -1.  All transitions are exact on finitely supported input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from .binomial import t0, t0_star
from .errors import DimensionMismatch, PreconditionError
from .multiindex import MultiIndex, enumerate_degree, total_degree
from .series import KernelCoeffs, KernelKey, SeriesCoeffs


@dataclass
class OperatorMatrix:
    """Dense matrix of a square kernel over the canonical degree-N basis."""

    N: int
    d: int
    index: List[MultiIndex]
    matrix: np.ndarray

    def to_jsonable(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "index": [list(a) for a in self.index],
            "re": [[float(x.real) for x in row] for row in self.matrix],
            "im": [[float(x.imag) for x in row] for row in self.matrix],
        }


def _require_square(c: KernelCoeffs) -> int:
    if c.d2 != c.d1:
        raise DimensionMismatch(f"square kernel required, got d2={c.d2}, d1={c.d1}")
    return c.d2


def wick_to_kernel(a: KernelCoeffs, out_degree: int | None = None) -> KernelCoeffs:
    """Kernel of the operator with Wick symbol a, retained to out_degree.

    Defaults to the symbol's own support degree; pass out_degree = N to fill
    an operator matrix of truncation N (entries are exact either way).
    """
    _require_square(a)
    deg = max(a.support_degree(), out_degree or 0)
    return t0(a, 1.0, out_degree=deg)


def kernel_to_wick(K: KernelCoeffs, out_degree: int | None = None) -> KernelCoeffs:
    """Wick symbol of the operator with kernel K (inverse of wick_to_kernel)."""
    _require_square(K)
    deg = out_degree if out_degree is not None else K.support_degree()
    return t0(K, -1.0, out_degree=deg)


def antiwick_to_wick(a: KernelCoeffs) -> KernelCoeffs:
    """Wick symbol of the anti-Wick operator with symbol a; exact."""
    _require_square(a)
    return t0_star(a, 1.0)


def wick_to_antiwick(a: KernelCoeffs) -> KernelCoeffs:
    """Anti-Wick symbol whose operator has Wick symbol a; exact."""
    _require_square(a)
    return t0_star(a, -1.0)


def apply_operator(K: KernelCoeffs, F: SeriesCoeffs) -> SeriesCoeffs:
    """Coefficient action of the kernel operator: out(alpha) = sum_beta c_K(alpha,beta) c_F(beta)."""
    if K.d1 != F.d:
        raise DimensionMismatch(f"kernel input dimension {K.d1} != series dimension {F.d}")
    out: Dict[MultiIndex, complex] = {}
    for (alpha, beta), kv in K.entries.items():
        fv = F.entries.get(beta)
        if fv is not None:
            out[alpha] = out.get(alpha, 0.0) + kv * fv
    return SeriesCoeffs(K.d2, out)


def compose_kernels(K2: KernelCoeffs, K1: KernelCoeffs) -> KernelCoeffs:
    """Kernel of K2 after K1: c(alpha, delta) = sum_beta c2(alpha, beta) c1(beta, delta)."""
    if K2.d1 != K1.d2:
        raise DimensionMismatch(f"inner dimensions differ: {K2.d1} vs {K1.d2}")
    rows: Dict[MultiIndex, List] = {}
    for (beta, delta), v1 in K1.entries.items():
        rows.setdefault(beta, []).append((delta, v1))
    out: Dict[KernelKey, complex] = {}
    for (alpha, beta), v2 in K2.entries.items():
        for delta, v1 in rows.get(beta, ()):
            key = (alpha, delta)
            out[key] = out.get(key, 0.0) + v2 * v1
    return KernelCoeffs(K2.d2, K1.d1, out)


def twisted_product(a1: KernelCoeffs, a2: KernelCoeffs, out_degree: int | None = None) -> KernelCoeffs:
    """Wick symbol of Op(a1) composed with Op(a2).

    Realized through kernels: raise both symbols, multiply the kernels over
    the shared index, lower back.  The internal kernel degree is padded so
    that every retained output entry is exact; the exact product of
    polynomial symbols is again polynomial, with degree at most the sum of
    the factor degrees.
    """
    d = _require_square(a1)
    if _require_square(a2) != d:
        raise DimensionMismatch(f"symbol dimensions differ: {d} vs {a2.d2}")
    deg1, deg2 = a1.support_degree(), a2.support_degree()
    target = deg1 + deg2 if out_degree is None else out_degree
    inner = target + max(deg1, deg2)
    K1 = t0(a1, 1.0, out_degree=inner)
    K2 = t0(a2, 1.0, out_degree=inner)
    return t0(compose_kernels(K1, K2), -1.0, out_degree=target)


def operator_matrix(K: KernelCoeffs, N: int) -> OperatorMatrix:
    """Dense coefficient matrix M(alpha, beta) = c_K(alpha, beta) over degree <= N."""
    d = _require_square(K)
    index = enumerate_degree(d, N)
    pos = {a: i for i, a in enumerate(index)}
    m = np.zeros((len(index), len(index)), dtype=complex)
    for (alpha, beta), v in K.entries.items():
        i = pos.get(alpha)
        j = pos.get(beta)
        if i is not None and j is not None:
            m[i, j] = v
    return OperatorMatrix(N, d, index, m)


def psd_check(M: OperatorMatrix, tol: float) -> dict:
    """Hermitian / positive-semidefinite verdict with the smallest eigenvalue.

    Hermitianity is decided first (max entrywise deviation <= tol); only then
    is a self-adjoint eigensolver applied, so truncation cannot produce false
    negatives beyond tolerance.
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    m = M.matrix
    herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    hermitian = herm_dev <= tol
    if not hermitian:
        return {"hermitian": False, "psd": False, "min_eigenvalue": math.nan}
    try:
        eigs = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failure: {exc}") from exc
    min_eig = float(eigs[0]) if eigs.size else 0.0
    return {"hermitian": True, "psd": min_eig >= -tol, "min_eigenvalue": min_eig}


def a2_r_norm(K: KernelCoeffs, r: float) -> float:
    """Gaussian-weighted L^2 norm of the symbol, in exact closed form.

    norm^2 = pi^(d1+d2) sum |c(alpha,beta)|^2 r^(-(|alpha|+|beta|+d1+d2)),
    from the per-axis moment  integral |z^a|^2 e^(-r|z|^2) dlambda = pi a! / r^(a+1).
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    dd = K.d1 + K.d2
    total = 0.0
    for (alpha, beta), v in K.entries.items():
        total += abs(v) ** 2 * r ** (-(total_degree(alpha) + total_degree(beta) + dd))
    return math.sqrt(math.pi ** dd * total)


def t0_bound_constant(r1: float, r2: float, d: int) -> float:
    """Explicit operator bound for the exponential raise between geometric l^2 weights.

    Valid for |t| <= 1 and r2 > 1 + r1: the norm ratio never exceeds
    (1 - (1+r1)/r2)^(-d).
    """
    if not (r1 > 0):
        raise PreconditionError("r1 must be positive")
    if not (r2 > 1.0 + r1):
        raise PreconditionError(f"need r2 > 1 + r1, got r1={r1}, r2={r2}")
    if d < 1:
        raise PreconditionError("d must be >= 1")
    return (1.0 - (1.0 + r1) / r2) ** (-d)


def identity_kernel(d: int, N: int) -> KernelCoeffs:
    """Diagonal ones up to degree N: the truncated reproducing kernel."""
    return KernelCoeffs(d, d, {(a, a): 1.0 for a in enumerate_degree(d, N)})
