"""Binomial transition operators on square coefficient tensors.

``t0`` realizes, at coefficient level, multiplication of the associated
kernel by the exponential factor exp(t (z, w)); ``t0_star`` is its formal
l^2 dual and performs the Gaussian (Berezin-type) smoothing of symbols.
Both are exact on finitely supported input: every retained output entry
is a finite sum evaluated in full.
"""

from __future__ import annotations

import itertools
import math
from typing import Dict, List

from .errors import DimensionMismatch
from .multiindex import (
    enumerate_degree,
    index_add,
    index_sub,
    multi_binomial,
    total_degree,
)
from .series import KernelCoeffs, KernelKey

# sparse-map hygiene: entries below this modulus are dropped
DROP_THRESHOLD = 1e-300

DEFAULT_EXTENSION = 8

_I_POWERS = (1.0, 1j, -1.0, -1j)


def _require_square(c: KernelCoeffs) -> int:
    if c.d2 != c.d1:
        raise DimensionMismatch(f"square kernel required, got d2={c.d2}, d1={c.d1}")
    return c.d2


def _powers(t: complex, n: int) -> List[complex]:
    """t^0..t^n by repeated multiplication (exact at 0 and on the axes)."""
    out = [complex(1.0)]
    for _ in range(n):
        out.append(out[-1] * t)
    return out


def _store(acc: Dict[KernelKey, complex], key: KernelKey, value: complex) -> None:
    v = acc.get(key, 0.0) + value
    acc[key] = v


def t0(c: KernelCoeffs, t: complex, out_degree: int | None = None) -> KernelCoeffs:
    """Binomial raise: out(a,b) = sum_{g <= a,b} sqrt(C(a,g) C(b,g)) t^|g| c(a-g, b-g).

    The output has unbounded support in general, so entries are retained for
    |alpha|, |beta| <= out_degree (default: input support degree plus
    DEFAULT_EXTENSION).  Each retained entry only involves lower-degree
    inputs and is therefore exact.
    """
    d = _require_square(c)
    if out_degree is None:
        out_degree = c.support_degree() + DEFAULT_EXTENSION
    out: Dict[KernelKey, complex] = {}
    if t == 0:
        for (a, b), v in c.entries.items():
            if total_degree(a) <= out_degree and total_degree(b) <= out_degree:
                out[(a, b)] = v
        return KernelCoeffs(d, d, out)
    tp = _powers(t, out_degree)
    for (a, b), v in c.entries.items():
        room = out_degree - max(total_degree(a), total_degree(b))
        if room < 0:
            continue
        for g in enumerate_degree(d, room):
            ag = index_add(a, g)
            bg = index_add(b, g)
            w = math.sqrt(multi_binomial(ag, g) * multi_binomial(bg, g))
            _store(out, (ag, bg), w * tp[total_degree(g)] * v)
    return KernelCoeffs(d, d, _dropped(out))


def t0_star(c: KernelCoeffs, t: complex) -> KernelCoeffs:
    """Formal l^2 dual: out(a,b) = sum_g sqrt(C(a+g,g) C(b+g,g)) t^|g| c(a+g, b+g).

    Finitely many terms contribute on finitely supported input, so the
    result is exact and its support degree never exceeds the input's.
    """
    d = _require_square(c)
    deg = c.support_degree()
    out: Dict[KernelKey, complex] = {}
    tp = _powers(t, deg)
    for (a, b), v in c.entries.items():
        gmax = tuple(min(ai, bi) for ai, bi in zip(a, b))
        for g in itertools.product(*(range(m + 1) for m in gmax)):
            w = math.sqrt(multi_binomial(a, g) * multi_binomial(b, g))
            _store(out, (index_sub(a, g), index_sub(b, g)), w * tp[total_degree(g)] * v)
    return KernelCoeffs(d, d, _dropped(out))


def s0(c: KernelCoeffs) -> KernelCoeffs:
    """Entrywise quarter-turn phase: c(a,b) -> i^(|a|+|b|) c(a,b)."""
    d = _require_square(c)
    return KernelCoeffs(d, d, {
        k: _I_POWERS[(total_degree(k[0]) + total_degree(k[1])) % 4] * v
        for k, v in c.entries.items()
    })


def s0_inv(c: KernelCoeffs) -> KernelCoeffs:
    """Inverse phase: c(a,b) -> (-i)^(|a|+|b|) c(a,b)."""
    d = _require_square(c)
    return KernelCoeffs(d, d, {
        k: _I_POWERS[(-(total_degree(k[0]) + total_degree(k[1]))) % 4] * v
        for k, v in c.entries.items()
    })


def l2_r_norm(c: KernelCoeffs, r: float) -> float:
    """Geometric-weight l^2 norm: (sum |c(a,b)|^2 r^(-(|a|+|b|)))^(1/2)."""
    if not (r > 0):
        raise ValueError("r must be positive")
    total = 0.0
    for (a, b), v in c.entries.items():
        total += abs(v) ** 2 * r ** (-(total_degree(a) + total_degree(b)))
    return math.sqrt(total)


def _dropped(entries: Dict[KernelKey, complex]) -> Dict[KernelKey, complex]:
    return {k: v for k, v in entries.items() if abs(v) >= DROP_THRESHOLD}
