import math

import numpy as np
import pytest
from scipy import integrate, special

from autoconv.lowerbound import (
    KERNEL_L2_CONSTANT,
    CertificateError,
    CertificateParams,
    basic_bound,
    certify,
    eval_g,
    forbidden_set,
    gain,
    kernel_density,
    kernel_hat,
    kernel_l2sq_numeric,
    kernel_l2sq_quadrature,
    kernel_tilde,
    lemma_h_bound,
    min_g,
    modified_bound_l,
    reference_params,
    z1_threshold,
)
from autoconv.lowerbound import _positive_root

GAIN_QUOTED = 0.0713


@pytest.fixture(scope="module")
def params():
    return reference_params()


@pytest.fixture(scope="module")
def report(params):
    return certify(params)


def test_params_defaults(params):
    assert params.delta == 0.138
    assert params.u == 0.5 + 0.138
    assert params.k2sq_bound == pytest.approx(0.5747 / 0.138)
    assert params.k1 == pytest.approx(special.j0(math.pi * 0.138) ** 2, abs=1e-14)
    assert params.g_coeffs.size == 119
    with pytest.raises(ValueError):
        CertificateParams(0.3)
    with pytest.raises(ValueError):
        CertificateParams(0.0)


def test_kernel_tilde():
    p = CertificateParams(0.13)
    assert kernel_tilde(p, 0) == pytest.approx(1 / p.u)
    assert kernel_tilde(p, 1) == pytest.approx(special.j0(0.13 * math.pi / 0.63) ** 2 / 0.63, abs=1e-14)
    j = np.arange(-50, 51)
    np.testing.assert_array_equal(kernel_tilde(p, j), kernel_tilde(p, -j))
    assert np.all(kernel_tilde(p, j) >= 0)


def test_kernel_density_against_arcsine_autocorrelation():
    # (beta o beta)(y) = int beta(t) beta(t + y) dt, beta(t) = (2/pi) / sqrt(1 - 4 t^2)
    d = 0.138
    beta = lambda t: 2 / math.pi / math.sqrt(max(1e-300, 1 - 4 * t * t))
    for y in (0.05, 0.3, 0.7, 0.95):
        lo, hi = -0.5, 0.5 - y
        # t = lo + (hi - lo) (1 - cos(pi s))/2 tames both square-root ends
        g = lambda s: beta(lo + (hi - lo) * (1 - math.cos(math.pi * s)) / 2) * beta(
            lo + y + (hi - lo) * (1 - math.cos(math.pi * s)) / 2
        ) * (hi - lo) * math.pi / 2 * math.sin(math.pi * s)
        ref = integrate.quad(g, 0, 1, limit=400, epsabs=1e-12)[0]
        assert kernel_density(y * d, d) * d == pytest.approx(ref, rel=1e-7)
    assert kernel_density(0.2, d) == 0.0


def test_kernel_mass_and_transform():
    d = 0.138
    mass = 2 * integrate.quad(lambda x: kernel_density(x, d), 0, d, limit=200)[0]
    assert mass == pytest.approx(1.0, abs=1e-9)
    for xi in (0.7, 2.5, 6.0):
        # x = d s^2 removes the logarithmic singularity at 0
        g = lambda s: kernel_density(d * s * s, d) * math.cos(2 * math.pi * d * s * s * xi) * 2 * d * s
        ft = 2 * integrate.quad(g, 0, 1, limit=400, epsabs=1e-13)[0]
        assert ft == pytest.approx(kernel_hat(d, xi), abs=1e-9)


@pytest.mark.parametrize("delta", [0.138, 0.13])
def test_kernel_l2_constant(delta):
    value, tail = kernel_l2sq_numeric(CertificateParams(delta))
    assert value + tail < KERNEL_L2_CONSTANT / delta
    assert value == pytest.approx(kernel_l2sq_quadrature(delta), abs=1e-4)


def test_kernel_l2_tail_terms():
    with pytest.raises(ValueError):
        kernel_l2sq_numeric(CertificateParams(0.138), tail_terms=999)
    v1, t1 = kernel_l2sq_numeric(CertificateParams(0.138), 2000)
    v2, t2 = kernel_l2sq_numeric(CertificateParams(0.138), 100_000)
    assert v1 <= v2 <= v1 + t1


def test_min_g_single_cosine():
    p = CertificateParams(0.13, [1.0])
    m, x = min_g(p)
    assert x == pytest.approx(0.25)
    assert m == pytest.approx(math.cos(2 * math.pi * 0.25 / p.u))


def test_min_g_bundled(params):
    m, x = min_g(params)
    grid = np.linspace(0, 0.25, 100_001)
    assert m >= 0.99
    assert m <= eval_g(params, grid).min() + 1e-12
    assert m == pytest.approx(eval_g(params, grid).min(), abs=1e-8)
    assert m == pytest.approx(1.000068420409935, abs=1e-9)
    assert x == pytest.approx(0.2456467889, abs=1e-6)


def test_g_has_mean_zero(params):
    x = np.linspace(-params.u / 2, params.u / 2, 20_001)[:-1]
    assert eval_g(params, x).mean() == pytest.approx(0.0, abs=1e-9)


def test_gain(params):
    a = gain(params)
    assert a > GAIN_QUOTED
    assert a == pytest.approx(0.0713713484475445, abs=1e-10)
    doubled = CertificateParams(0.138, 2 * params.g_coeffs)
    assert gain(doubled) == pytest.approx(a, rel=1e-12)


def test_gain_rejects_vanishing_bessel():
    z = special.jn_zeros(0, 1)[0]
    delta = 0.5 * z / (3 * math.pi - z)
    with pytest.raises(CertificateError):
        gain(CertificateParams(delta, [0.0, 0.0, 1.0, 0.1]))
    gain(CertificateParams(delta, [1.0, 0.5, 0.0]))


def test_basic_bound(params):
    assert basic_bound(params, GAIN_QUOTED) == pytest.approx(1.2743, abs=1e-4)
    assert basic_bound(params, GAIN_QUOTED) == pytest.approx(1.2743445237620101, abs=1e-12)
    p = CertificateParams(0.13)
    rhs = 2 / p.u
    lhs = lambda s: s + 1 + math.sqrt(s - 1) * math.sqrt(p.k2sq_bound - 1)
    lo, hi = 1.0, 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if lhs(mid) >= rhs else (mid, hi)
    assert basic_bound(p, 0.0) == pytest.approx(hi, abs=1e-12)
    # the vacuous case 2/u + gain <= 2 needs u >= 1, outside delta <= 1/4;
    # the root helper handles it by returning t = 0
    assert _positive_root(1.0, 0.0) == 0.0 and _positive_root(1.0, 0.5) == 0.0
    with pytest.raises(CertificateError):
        basic_bound(CertificateParams(0.138, k2sq_bound=1.0), 0.1)
    with pytest.raises(ValueError):
        basic_bound(p, -0.1)


def test_bounds_monotone_in_k2sq():
    a = GAIN_QUOTED
    prev_b = prev_l = math.inf
    for k in np.linspace(3.0, 8.0, 30):
        p = CertificateParams(0.138, k2sq_bound=float(k))
        b, l = basic_bound(p, a), modified_bound_l(p, a, 0.3)
        assert b <= prev_b + 1e-15 and l <= prev_l + 1e-15
        prev_b, prev_l = b, l


def test_lemma_h():
    assert lemma_h_bound(1e6) == pytest.approx(1.0, abs=1e-10)
    assert lemma_h_bound(2.0) == pytest.approx(2 / math.pi)
    assert lemma_h_bound(1.0) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        lemma_h_bound(0.9)
    assert z1_threshold(1.2748) < 0.50426
    assert z1_threshold(1.2748) == pytest.approx(0.5042537246527534, abs=1e-12)


def test_modified_bound(params):
    assert modified_bound_l(params, GAIN_QUOTED, 0.50426) == pytest.approx(1.27481, abs=5e-5)
    zs = np.linspace(0, 0.50426, 100)
    ls = [modified_bound_l(params, GAIN_QUOTED, z) for z in zs]
    assert all(b < a for a, b in zip(ls, ls[1:]))


def test_modified_reduces_to_basic_without_k1():
    # with k1 = 0 every z1 term disappears at z1 = 0
    for delta in (0.1, 0.13, 0.138, 0.2):
        p = CertificateParams(delta, k1=0.0)
        for a in (0.0, 0.03, 0.0713, 0.2):
            assert modified_bound_l(p, a, 0.0) == pytest.approx(basic_bound(p, a), abs=1e-12)


def test_modified_at_zero_with_default_k1(params):
    # the -2 k1^2 term under the root makes l(0) exceed the basic bound
    assert modified_bound_l(params, GAIN_QUOTED, 0.0) > basic_bound(params, GAIN_QUOTED)


def test_modified_domain_error():
    with pytest.raises(CertificateError):
        modified_bound_l(CertificateParams(0.138, k2sq_bound=1.5, k1=0.5), 0.07, 0.3)


def test_forbidden_set(params):
    lo, hi = forbidden_set(params, GAIN_QUOTED, 1.2748)
    assert lo == pytest.approx(0.504433, abs=1e-3)
    assert hi == pytest.approx(0.529849, abs=1e-3)
    assert forbidden_set(params, GAIN_QUOTED, 1.0) is None
    assert forbidden_set(params, GAIN_QUOTED, 100.0) == (0.0, 1.0)
    with pytest.raises(ValueError):
        forbidden_set(params, GAIN_QUOTED, 0.5)


def test_certify(params, report):
    assert report.certified_bound >= 1.2748
    assert report.certified_bound == pytest.approx(1.2748336791992188, abs=2e-5)
    assert report.gain > GAIN_QUOTED
    assert report.certified_bound <= report.l_at_threshold
    assert report.forbidden_interval[0] >= report.z1_threshold
    assert not report.diagnostics
    again = certify(params)
    assert again.to_dict() == report.to_dict()


def test_report_serialization(report):
    d = report.to_dict()
    assert d["schema_version"] == 1
    names = [e["quantity"] for e in d["audit"]]
    for q in ("gain", "basic_bound", "z1_threshold", "certified_bound"):
        assert q in names
    assert all(e["formula"] for e in d["audit"])


def test_certify_without_g_falls_back():
    rep = certify(CertificateParams(0.13))
    assert rep.gain == 0.0
    assert rep.diagnostics
    assert 1.0 <= rep.certified_bound < 1.2748
    assert rep.certified_bound >= basic_bound(CertificateParams(0.13), 0.0)


def test_bounds_monotone_in_gain(params):
    gains = np.linspace(0, 0.15, 31)
    b = [basic_bound(params, a) for a in gains]
    l = [modified_bound_l(params, a, 0.45) for a in gains]
    assert all(y >= x for x, y in zip(b, b[1:]))
    assert all(y >= x for x, y in zip(l, l[1:]))
    full = certify(params).certified_bound
    weaker = certify(CertificateParams(0.138, params.g_coeffs[:20])).certified_bound
    assert weaker <= full
