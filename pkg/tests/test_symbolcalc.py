import math

import numpy as np
import pytest

from fockcalc.errors import DimensionMismatch, PreconditionError
from fockcalc.multiindex import enumerate_degree, total_degree
from fockcalc.series import (
    KernelCoeffs,
    SeriesCoeffs,
    eval_series,
    kernel_delta,
    series_delta,
)
from fockcalc.symbolcalc import (
    a2_r_norm,
    antiwick_to_wick,
    apply_operator,
    compose_kernels,
    identity_kernel,
    kernel_to_wick,
    operator_matrix,
    psd_check,
    t0_bound_constant,
    twisted_product,
    wick_to_antiwick,
    wick_to_kernel,
)


def random_kernel(rng, d, degree):
    idx = enumerate_degree(d, degree)
    return KernelCoeffs(d, d, {
        (a, b): complex(rng.standard_normal(), rng.standard_normal())
        for a in idx for b in idx
    })


def sup_diff(c1, c2, max_degree=None):
    keys = set(c1.entries) | set(c2.entries)
    worst = 0.0
    for k in keys:
        if max_degree is not None and max(total_degree(k[0]), total_degree(k[1])) > max_degree:
            continue
        worst = max(worst, abs(c1.entries.get(k, 0.0) - c2.entries.get(k, 0.0)))
    return worst


# --- kernel <-> wick ------------------------------------------------------------

def test_wick_to_kernel_unit_symbol():
    K = wick_to_kernel(kernel_delta(1, (0,), (0,)), out_degree=8)
    for k in range(9):
        assert K.entries[((k,), (k,))] == 1.0
    assert len(K.entries) == 9


def test_wick_to_kernel_number_symbol():
    K = wick_to_kernel(kernel_delta(1, (1,), (1,)), out_degree=6)
    for k in range(1, 7):
        assert abs(K.entries[((k,), (k,))] - k) < 1e-14
    assert ((0,), (0,)) not in K.entries


def test_wick_to_kernel_zero():
    assert not wick_to_kernel(KernelCoeffs(1, 1, {}), out_degree=4).entries


def test_kernel_to_wick_identity_kernel():
    a = kernel_to_wick(identity_kernel(1, 10))
    assert set(a.entries) == {((0,), (0,))}
    assert abs(a.entries[((0,), (0,))] - 1.0) < 1e-12


def test_kernel_to_wick_single_entry():
    # exp(-z conj(w)) * z conj(w) expands with coefficients (-1)^(k-1) k on the
    # diagonal of the normalized basis; nothing lands at the origin
    a = kernel_to_wick(kernel_delta(1, (1,), (1,)), out_degree=3)
    assert abs(a.entries[((1,), (1,))] - 1.0) < 1e-14
    assert abs(a.entries[((2,), (2,))] + 2.0) < 1e-14
    assert abs(a.entries[((3,), (3,))] - 3.0) < 1e-14
    assert ((0,), (0,)) not in a.entries


def test_kernel_wick_round_trip():
    rng = np.random.default_rng(1)
    a = random_kernel(rng, 2, 3)
    back = kernel_to_wick(wick_to_kernel(a, out_degree=3), out_degree=3)
    assert sup_diff(back, a) < 1e-12 * max(abs(v) for v in a.entries.values())


# --- anti-wick transitions -------------------------------------------------------

def test_antiwick_to_wick_examples():
    out = antiwick_to_wick(kernel_delta(1, (1,), (1,)))
    assert out.entries == {((1,), (1,)): 1.0, ((0,), (0,)): 1.0}
    assert antiwick_to_wick(kernel_delta(1, (0,), (0,))).entries == {((0,), (0,)): 1.0}
    out2 = antiwick_to_wick(kernel_delta(1, (2,), (2,)))
    assert abs(out2.entries[((2,), (2,))] - 1.0) < 1e-14
    assert abs(out2.entries[((1,), (1,))] - 2.0) < 1e-14
    assert abs(out2.entries[((0,), (0,))] - 1.0) < 1e-14


def test_wick_antiwick_bijection():
    rng = np.random.default_rng(8)
    a = random_kernel(rng, 1, 5)
    rt = wick_to_antiwick(antiwick_to_wick(a))
    assert sup_diff(rt, a) < 1e-12 * max(abs(v) for v in a.entries.values())
    rt2 = antiwick_to_wick(wick_to_antiwick(a))
    assert sup_diff(rt2, a) < 1e-12 * max(abs(v) for v in a.entries.values())


# --- operator action -------------------------------------------------------------

def test_apply_identity():
    rng = np.random.default_rng(2)
    F = SeriesCoeffs(1, {(k,): complex(*rng.standard_normal(2)) for k in range(7)})
    out = apply_operator(identity_kernel(1, 6), F)
    assert set(out.entries) == set(F.entries)
    for k, v in F.entries.items():
        assert abs(out.entries[k] - v) < 1e-15


def test_apply_number_operator():
    K = wick_to_kernel(kernel_delta(1, (1,), (1,)), out_degree=5)
    out = apply_operator(K, series_delta(1, (3,)))
    assert set(out.entries) == {(3,)}
    assert abs(out.entries[(3,)] - 3.0) < 1e-14


def test_apply_rank_one_projector():
    K = kernel_delta(1, (0,), (2,))
    out = apply_operator(K, series_delta(1, (2,)))
    assert out.entries == {(0,): 1.0}


def test_apply_dim_mismatch():
    with pytest.raises(DimensionMismatch):
        apply_operator(identity_kernel(1, 3), series_delta(2, (0, 0)))


# --- composition ------------------------------------------------------------------

def test_compose_identity():
    rng = np.random.default_rng(3)
    K = random_kernel(rng, 1, 4)
    out = compose_kernels(identity_kernel(1, 4), K)
    assert sup_diff(out, K) < 1e-15


def test_compose_creation_annihilation():
    N = 6
    creation = KernelCoeffs(1, 1, {((k + 1,), (k,)): math.sqrt(k + 1) for k in range(N)})
    annihilation = KernelCoeffs(1, 1, {((k,), (k + 1,)): math.sqrt(k + 1) for k in range(N)})
    out = compose_kernels(creation, annihilation)
    for k in range(1, N + 1):
        assert abs(out.entries[((k,), (k,))] - k) < 1e-14
    assert ((0,), (0,)) not in out.entries


def test_compose_diagonals_multiply():
    d1 = KernelCoeffs(1, 1, {((k,), (k,)): 2.0 + k for k in range(5)})
    d2 = KernelCoeffs(1, 1, {((k,), (k,)): 1.0 - 0.5j * k for k in range(5)})
    out = compose_kernels(d1, d2)
    for k in range(5):
        assert abs(out.entries[((k,), (k,))] - (2.0 + k) * (1.0 - 0.5j * k)) < 1e-14


# --- twisted product --------------------------------------------------------------

def test_twisted_product_unit_laws():
    rng = np.random.default_rng(4)
    one = kernel_delta(1, (0,), (0,))
    a = random_kernel(rng, 1, 3)
    left = twisted_product(one, a)
    right = twisted_product(a, one)
    m = max(abs(v) for v in a.entries.values())
    assert sup_diff(left, a, max_degree=3) < 1e-10 * m
    assert sup_diff(right, a, max_degree=3) < 1e-10 * m
    zero = KernelCoeffs(1, 1, {})
    assert not twisted_product(a, zero).entries


def test_twisted_product_number_symbol():
    zw = kernel_delta(1, (1,), (1,))
    out = twisted_product(zw, zw)
    assert abs(out.entries[((2,), (2,))] - 2.0) < 1e-12
    assert abs(out.entries[((1,), (1,))] - 1.0) < 1e-12
    extra = {k: v for k, v in out.entries.items() if k not in (((2,), (2,)), ((1,), (1,)))}
    assert all(abs(v) < 1e-12 for v in extra.values())


def test_twisted_product_associative():
    rng = np.random.default_rng(5)
    a = random_kernel(rng, 1, 2)
    b = random_kernel(rng, 1, 2)
    c = random_kernel(rng, 1, 2)
    left = twisted_product(twisted_product(a, b), c)
    right = twisted_product(a, twisted_product(b, c))
    scale = max(abs(v) for v in left.entries.values())
    assert sup_diff(left, right, max_degree=6) < 1e-10 * scale


# --- matrices ---------------------------------------------------------------------

def test_operator_matrix_identity():
    M = operator_matrix(identity_kernel(1, 4), 4)
    assert np.allclose(M.matrix, np.eye(5))


def test_operator_matrix_number_and_shifted():
    M = operator_matrix(wick_to_kernel(kernel_delta(1, (1,), (1,)), out_degree=3), 3)
    assert np.allclose(M.matrix, np.diag([0.0, 1.0, 2.0, 3.0]))
    K = wick_to_kernel(antiwick_to_wick(kernel_delta(1, (1,), (1,))), out_degree=3)
    M2 = operator_matrix(K, 3)
    assert np.allclose(M2.matrix, np.diag([1.0, 2.0, 3.0, 4.0]))


def test_matrix_series_consistency():
    rng = np.random.default_rng(6)
    a = random_kernel(rng, 1, 3)
    F = SeriesCoeffs(1, {(k,): complex(*rng.standard_normal(2)) for k in range(4)})
    N = 6
    K = wick_to_kernel(a, out_degree=N)
    direct = apply_operator(K, F)
    M = operator_matrix(K, N)
    vec = np.array([F.entries.get(al, 0.0) for al in M.index])
    out_vec = M.matrix @ vec
    for z in (0.3, -0.8 + 0.4j, 1.2j):
        series_val = eval_series(direct, z)
        basis_vals = np.array([eval_series(series_delta(1, al), z) for al in M.index])
        assert abs(series_val - np.dot(out_vec, basis_vals)) < 1e-11


def test_psd_check_examples():
    from fockcalc.symbolcalc import OperatorMatrix
    idx = enumerate_degree(1, 3)
    good = OperatorMatrix(3, 1, idx, np.diag([1.0, 2.0, 3.0, 4.0]).astype(complex))
    out = psd_check(good, 1e-12)
    assert out == {"hermitian": True, "psd": True, "min_eigenvalue": 1.0}
    bad = OperatorMatrix(2, 1, idx[:3], (np.diag([0.0, 1.0, 2.0]) - 0.5 * np.eye(3)).astype(complex))
    out = psd_check(bad, 1e-12)
    assert out["hermitian"] and not out["psd"]
    assert abs(out["min_eigenvalue"] + 0.5) < 1e-14
    shift = np.zeros((3, 3), dtype=complex)
    shift[1, 0] = shift[2, 1] = 1.0
    out = psd_check(OperatorMatrix(2, 1, idx[:3], shift), 1e-12)
    assert not out["hermitian"] and not out["psd"]
    assert math.isnan(out["min_eigenvalue"])


def test_antiwick_positivity():
    rng = np.random.default_rng(7)
    for N in (6, 12):
        diag = KernelCoeffs(1, 1, {((k,), (k,)): float(rng.uniform(0, 3)) for k in range(4)})
        K = wick_to_kernel(antiwick_to_wick(diag), out_degree=N)
        out = psd_check(operator_matrix(K, N), 1e-10)
        assert out["hermitian"] and out["psd"]


# --- norms ------------------------------------------------------------------------

def test_a2_r_norm_closed_form():
    one = kernel_delta(1, (0,), (0,))
    assert abs(a2_r_norm(one, 2.0) - math.pi / 2.0) < 1e-14
    for (a, b) in (((1,), (0,)), ((2,), (3,))):
        single = KernelCoeffs(1, 1, {(a, b): 1.0})
        expect = math.pi * 3.0 ** (-(sum(a) + sum(b)) / 2.0 - 1.0)
        assert abs(a2_r_norm(single, 3.0) - expect) < 1e-14


def test_a2_r_norm_quadrature_oracle():
    # independent check of the closed form against the defining double integral
    from fockcalc.quadrature import complex_grid
    from fockcalc.series import eval_kernel

    rng = np.random.default_rng(8)
    K = random_kernel(rng, 1, 2)
    r = 2.0
    grid = complex_grid(24, 1, scale=1.0 / math.sqrt(r))

    def norm_sq_quad():
        total = 0.0
        zs = grid.nodes[:, 0] + 1j * grid.nodes[:, 1]
        wz = grid.flat_weights * np.exp(-r * np.abs(zs) ** 2)
        for i, z in enumerate(zs):
            vals = eval_kernel(K, np.full(len(zs), z).reshape(-1, 1), zs.reshape(-1, 1))
            total += wz[i] * np.sum(wz * np.abs(vals) ** 2)
        return math.sqrt(total)

    assert abs(norm_sq_quad() - a2_r_norm(K, r)) < 1e-8


def test_a2_r_norm_homogeneous():
    rng = np.random.default_rng(9)
    K = random_kernel(rng, 1, 3)
    scaled = KernelCoeffs(1, 1, {k: (3 - 4j) * v for k, v in K.entries.items()})
    assert abs(a2_r_norm(scaled, 1.5) - 5.0 * a2_r_norm(K, 1.5)) < 1e-10


def test_norm_transfer_trend():
    rng = np.random.default_rng(10)
    r1 = 1.0
    grid = [2.5, 3.0, 4.0]
    ratios = []
    for r2 in grid:
        worst = 0.0
        rng2 = np.random.default_rng(10)
        for _ in range(30):
            a = random_kernel(rng2, 1, 4)
            worst = max(worst, a2_r_norm(antiwick_to_wick(a), r2) / a2_r_norm(a, r1))
        ratios.append(worst)
    assert all(math.isfinite(x) for x in ratios)
    assert ratios[0] >= ratios[1] >= ratios[2]


def test_operator_matrix_serialization():
    M = operator_matrix(identity_kernel(2, 1), 1)
    doc = M.to_jsonable()
    assert doc["N"] == 1 and doc["d"] == 2
    assert doc["index"] == [[0, 0], [0, 1], [1, 0]]
    assert doc["re"] == [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
    assert all(all(x == 0.0 for x in row) for row in doc["im"])


def test_t0_bound_constant_values():
    assert abs(t0_bound_constant(1.0, 3.0, 1) - 3.0) < 1e-14
    assert abs(t0_bound_constant(1.0, 4.0, 1) - 2.0) < 1e-14
    assert abs(t0_bound_constant(1.0, 3.0, 2) - 9.0) < 1e-14
    with pytest.raises(PreconditionError):
        t0_bound_constant(1.0, 2.0, 1)
