import cmath
import math

import numpy as np
import pytest

from fockcalc.errors import DimensionMismatch, PreconditionError
from fockcalc.multiindex import enumerate_degree
from fockcalc.quadrature import (
    antiwick_apply_quad,
    bargmann_quad,
    berezin_transform_quad,
    complex_grid,
    default_nodes,
    gauss_hermite_grid,
    gaussian_window,
    integrate_gaussian_c,
    rank_one_check,
    stft_gaussian_quad,
    toeplitz_matrix_quad,
    twisted_product_quad,
    uv_inv,
    uv_map,
    wick_apply_quad,
)
from fockcalc.series import (
    KernelCoeffs,
    SeriesCoeffs,
    eval_basis,
    eval_kernel,
    eval_series,
    hermite_eval,
    kernel_delta,
    series_delta,
)
from fockcalc.symbolcalc import antiwick_to_wick, apply_operator, operator_matrix, wick_to_kernel


def random_kernel(rng, d, degree):
    idx = enumerate_degree(d, degree)
    return KernelCoeffs(d, d, {
        (a, b): complex(rng.standard_normal(), rng.standard_normal())
        for a in idx for b in idx
    })


# --- grids -------------------------------------------------------------------

def test_two_point_rule():
    g = gauss_hermite_grid(2, 1)
    assert np.allclose(sorted(g.nodes[:, 0]), [-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(g.weights, g.weights[0])


def test_grid_mass_and_shape():
    for dims, scale in ((1, 1.0), (2, math.sqrt(2)), (3, 0.5)):
        g = gauss_hermite_grid(8, dims, scale=scale)
        assert g.nodes.shape == (8 ** dims, dims)
        mass = (scale * math.sqrt(math.pi)) ** dims
        assert abs(float(np.sum(g.weights)) - mass) < 1e-12 * mass


def test_grid_limits():
    with pytest.raises(PreconditionError):
        gauss_hermite_grid(1, 1)
    with pytest.raises(PreconditionError):
        gauss_hermite_grid(300, 1)
    with pytest.raises(PreconditionError):
        complex_grid(8, 4)


def test_polynomial_exactness():
    # degree <= 2M-1 against the Gaussian: moments of e^{-x^2} are exact
    g = gauss_hermite_grid(6, 1)
    for k, expect in ((0, math.sqrt(math.pi)), (2, math.sqrt(math.pi) / 2),
                      (4, 3 * math.sqrt(math.pi) / 4), (10, 945 / 32 * math.sqrt(math.pi))):
        val = g.integrate_weighted(lambda x, k=k: x[:, 0] ** k)
        assert abs(val - expect) < 1e-12 * expect


def test_gaussian_measure_normalization():
    grid = complex_grid(16, 1)
    v = integrate_gaussian_c(lambda z: np.ones(z.shape[0]), 1, grid)
    assert abs(v - 1.0) < 1e-14
    v2 = integrate_gaussian_c(lambda z: np.abs(z[:, 0]) ** 2, 1, grid)
    assert abs(v2 - 1.0) < 1e-12


def test_basis_orthonormality_under_measure():
    grid = complex_grid(32, 1)
    worst = 0.0
    for a in range(7):
        for b in range(7):
            val = integrate_gaussian_c(
                lambda z, a=a, b=b: eval_basis((a,), z) * np.conj(eval_basis((b,), z)),
                1, grid)
            worst = max(worst, abs(val - (1.0 if a == b else 0.0)))
    assert worst < 1e-12


def test_reproducing_at_constant():
    grid = complex_grid(32, 1)
    for w0 in (0.5, -0.3 + 0.8j, 1j):
        val = integrate_gaussian_c(lambda z, w0=w0: np.exp(z[:, 0] * np.conj(w0)), 1, grid)
        assert abs(val - 1.0) < 1e-12


# --- operator application -----------------------------------------------------

def test_wick_apply_reproducing():
    one = kernel_delta(1, (0,), (0,))
    val = wick_apply_quad(one, series_delta(1, (2,)), 1 + 1j, M=64)
    assert abs(val - cmath.sqrt(2) * 1j) < 1e-8


def test_wick_apply_reproduces_degree_8():
    rng = np.random.default_rng(40)
    one = kernel_delta(1, (0,), (0,))
    F = SeriesCoeffs(1, {(k,): complex(*rng.standard_normal(2)) for k in range(9)})
    worst = 0.0
    for _ in range(6):
        z = complex(rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4))
        worst = max(worst, abs(wick_apply_quad(one, F, z, M=64) - eval_series(F, z)))
    assert worst < 1e-8


def test_wick_apply_number_symbol():
    a = kernel_delta(1, (1,), (1,))
    val = wick_apply_quad(a, series_delta(1, (3,)), 0.7, M=64)
    assert abs(val - 3 * eval_basis((3,), 0.7)) < 1e-8


def test_wick_apply_squared_number_symbol():
    a = KernelCoeffs(1, 1, {((2,), (2,)): 2.0, ((1,), (1,)): 1.0})  # z^2 conj(w)^2 + z conj(w)
    val = wick_apply_quad(a, series_delta(1, (2,)), 1.0, M=64)
    assert abs(val - 4 * eval_basis((2,), 1.0)) < 1e-8


def test_antiwick_apply_examples():
    one = kernel_delta(1, (0,), (0,))
    val = antiwick_apply_quad(one, series_delta(1, (1,)), 0.3j, M=64)
    assert abs(val - eval_basis((1,), 0.3j)) < 1e-8
    a = kernel_delta(1, (1,), (1,))          # a(w,w) = |w|^2
    for k in range(4):
        for z in (0.4, -0.6 + 0.3j):
            val = antiwick_apply_quad(a, series_delta(1, (k,)), z, M=64)
            assert abs(val - (k + 1) * eval_basis((k,), z)) < 1e-7
    val = antiwick_apply_quad(a, series_delta(1, (0,)), 0.0, M=64)
    assert abs(val - 1.0) < 1e-8


def test_berezin_transform_examples():
    one = kernel_delta(1, (0,), (0,))
    for z, w in ((0.2, 0.7), (1 + 0.5j, -0.4j)):
        assert abs(berezin_transform_quad(one, z, w, M=64) - 1.0) < 1e-10
    a = kernel_delta(1, (1,), (1,))
    z = 0.8 - 0.6j
    assert abs(berezin_transform_quad(a, z, z, M=64) - (abs(z) ** 2 + 1)) < 1e-8
    assert abs(berezin_transform_quad(a, 1.0, 1j, M=64) - (1 - 1j)) < 1e-8


# --- real-space transforms ------------------------------------------------------

def test_transform_maps_hermite_to_basis():
    worst = 0.0
    rng = np.random.default_rng(0)
    pts = rng.uniform(-1.4, 1.4, (10, 2))
    for k in range(9):
        f = lambda y, k=k: hermite_eval((k,), y)
        for (x, y) in pts:
            z = complex(x, y)
            worst = max(worst, abs(bargmann_quad(f, z, M=64) - eval_basis((k,), z)))
    assert worst < 1e-8


def test_transform_linearity():
    f = lambda y: hermite_eval((0,), y) + hermite_eval((1,), y)
    assert abs(bargmann_quad(f, 0.0, M=64) - 1.0) < 1e-8


def test_stft_window_normalization():
    val = stft_gaussian_quad(lambda y: gaussian_window(y), 0.0, 0.0, M=64)
    assert abs(val - (2 * math.pi) ** -0.5) < 1e-9


def test_stft_of_ground_state():
    for (x, xi) in ((1.0, 1.0), (0.4, -1.2)):
        val = stft_gaussian_quad(lambda y: hermite_eval((0,), y), x, xi, M=64)
        expect = (2 * math.pi) ** -0.5 * math.exp(-(x * x + xi * xi) / 4.0) * cmath.exp(-0.5j * x * xi)
        assert abs(val - expect) < 1e-8


def test_stft_cauchy_schwarz():
    # |V f| <= ||f|| ||window|| (2 pi)^{-d/2}, both norms 1 here
    bound = (2 * math.pi) ** -0.5
    f = lambda y: hermite_eval((3,), y)
    for (x, xi) in ((0.0, 0.0), (1.0, -0.5), (-2.0, 1.5)):
        assert abs(stft_gaussian_quad(f, x, xi, M=64)) <= bound + 1e-9


def test_uv_inverse_pair():
    assert abs(uv_inv(lambda z: 1.0, 0.0, 0.0) - (2 * math.pi) ** -0.5) < 1e-14
    # the map consumes the inverse's value at the scaled arguments (sqrt2 x, -sqrt2 xi)
    F = lambda z: eval_basis((2,), z) + 0.3 * eval_basis((0,), z)
    for (x, xi) in ((0.3, -0.4), (1.1, 0.7)):
        inner = uv_inv(F, math.sqrt(2) * x, -math.sqrt(2) * xi)
        val = uv_map(inner, x, xi)
        assert abs(val - F(complex(x, xi))) < 1e-12


def test_transform_factors_through_stft():
    # applying the phase-space change of picture to the windowed transform
    # reproduces the direct transform of the same function
    worst = 0.0
    for k in (0, 1, 3):
        f = lambda y, k=k: hermite_eval((k,), y)
        for (x, xi) in ((0.5, 0.2), (-0.8, 1.0)):
            stft_val = stft_gaussian_quad(f, math.sqrt(2) * x, -math.sqrt(2) * xi, M=64)
            lhs = uv_map(stft_val, x, xi)
            rhs = bargmann_quad(f, complex(x, xi), M=64)
            worst = max(worst, abs(lhs - rhs))
    assert worst < 1e-7


# --- localization matrices ------------------------------------------------------

def test_toeplitz_identity_symbol():
    out = toeplitz_matrix_quad(lambda x, xi: np.ones(x.shape[0]), 6, M=64, d=1)
    assert np.max(np.abs(out.matrix - np.eye(7))) < 1e-8


def test_toeplitz_harmonic_symbol():
    out = toeplitz_matrix_quad(lambda x, xi: (x[:, 0] ** 2 + xi[:, 0] ** 2) / 2.0, 6, M=64, d=1)
    assert np.max(np.abs(out.matrix - np.diag(np.arange(7) + 1.0))) < 1e-6


def test_toeplitz_real_symbol_hermitian():
    out = toeplitz_matrix_quad(lambda x, xi: x[:, 0] ** 2 - xi[:, 0] + 0.5, 5, M=64, d=1)
    assert np.max(np.abs(out.matrix - out.matrix.conj().T)) < 1e-10


# --- composition and the rank-one identity ----------------------------------------

def test_twisted_product_quad_units():
    one = kernel_delta(1, (0,), (0,))
    assert abs(twisted_product_quad(one, one, 0.4 + 0.2j, -0.1 + 0.3j, M=64) - 1.0) < 1e-10
    rng = np.random.default_rng(12)
    a2 = random_kernel(rng, 1, 3)
    for _ in range(10):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        val = twisted_product_quad(one, a2, z, w, M=64)
        assert abs(val - eval_kernel(a2, z, w)) < 1e-7


def test_twisted_product_quad_number_symbol():
    a = kernel_delta(1, (1,), (1,))
    assert abs(twisted_product_quad(a, a, 1.0, 1.0, M=64) - 2.0) < 1e-7


def test_rank_one_identity():
    r = rank_one_check((0,), (0,), 1.0, 0.5 + 0.1j, -0.2 + 0.3j, M=64)
    assert abs(r["lhs"] - 1.0) < 1e-10 and abs(r["rhs"] - 1.0) < 1e-14
    r = rank_one_check((1,), (1,), 1.0, 1.0, 1j, M=64)
    assert abs(r["lhs"] - (1 - 1j)) < 1e-7 and abs(r["rhs"] - (1 - 1j)) < 1e-14
    r = rank_one_check((1,), (0,), 1.0, 0.8 - 0.3j, 0.4 + 0.2j, M=64)
    assert abs(r["lhs"] - eval_basis((1,), 0.8 - 0.3j)) < 1e-7
    with pytest.raises(PreconditionError):
        rank_one_check((1,), (1,), 0.0, 1.0, 1.0)


def test_rank_one_identity_across_parameters():
    rng = np.random.default_rng(21)
    worst = 0.0
    for t in (1.0, -1.0, 2.0, 0.5 + 0.3j):
        for a in range(3):
            for b in range(3):
                z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                w = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
                r = rank_one_check((a,), (b,), t, z, w, M=48)
                worst = max(worst, abs(r["lhs"] - r["rhs"]))
    assert worst < 1e-7


# --- cross-route agreement and convergence ---------------------------------------

def test_routes_agree_on_random_symbols():
    rng = np.random.default_rng(30)
    worst = 0.0
    for _ in range(3):
        a = random_kernel(rng, 1, 3)
        F = SeriesCoeffs(1, {(k,): complex(*rng.standard_normal(2)) for k in range(5)})
        K = wick_to_kernel(a, out_degree=a.support_degree() + F.support_degree())
        TF = apply_operator(K, F)
        aw = antiwick_to_wick(a)
        Kaw = wick_to_kernel(aw, out_degree=aw.support_degree() + F.support_degree())
        TFaw = apply_operator(Kaw, F)
        for _ in range(3):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            worst = max(worst, abs(wick_apply_quad(a, F, z, M=64) - eval_series(TF, z)))
            worst = max(worst, abs(antiwick_apply_quad(a, F, z, M=64) - eval_series(TFaw, z)))
    assert worst < 1e-7


def test_toeplitz_agrees_with_coefficient_route():
    N = 6
    quad = toeplitz_matrix_quad(lambda x, xi: (x[:, 0] ** 2 + xi[:, 0] ** 2) / 2.0, N, M=64, d=1)
    K = wick_to_kernel(antiwick_to_wick(kernel_delta(1, (1,), (1,))), out_degree=N)
    coeff = operator_matrix(K, N)
    assert np.max(np.abs(quad.matrix - coeff.matrix)) < 1e-6


def test_doubling_nodes_is_stable():
    rng = np.random.default_rng(31)
    a = random_kernel(rng, 1, 3)
    F = SeriesCoeffs(1, {(k,): complex(*rng.standard_normal(2)) for k in range(4)})
    for z in (0.5, -0.7 + 0.9j):
        v32 = wick_apply_quad(a, F, z, M=32)
        v64 = wick_apply_quad(a, F, z, M=64)
        assert abs(v32 - v64) < 1e-9
    r32 = rank_one_check((2,), (1,), -1.0, 0.3 + 0.4j, -0.5, M=32)
    r64 = rank_one_check((2,), (1,), -1.0, 0.3 + 0.4j, -0.5, M=64)
    assert abs(r32["lhs"] - r64["lhs"]) < 1e-9


def test_default_nodes_env_override(monkeypatch):
    monkeypatch.delenv("FOCK_QUAD_NODES", raising=False)
    assert default_nodes() == 64
    monkeypatch.setenv("FOCK_QUAD_NODES", "32")
    assert default_nodes() == 32
    monkeypatch.setenv("FOCK_QUAD_NODES", "1000")
    with pytest.raises(PreconditionError):
        default_nodes()


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        wick_apply_quad(kernel_delta(1, (0,), (0,)), series_delta(1, (0,)),
                        np.array([1.0 + 0j, 2.0]), M=8)
