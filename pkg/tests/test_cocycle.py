import numpy as np
import pytest

from skewcmv.cocycle import (
    SL2R_CONJUGATOR,
    CocycleError,
    ConjugationError,
    circle_sqrt,
    product_batch,
    scaling_factor,
    sl2r_conjugate,
    spectral_norms_2x2,
    szego_matrix,
    transfer_product,
    transfer_via_determinants,
)
from skewcmv.model import Frequency, Phase, TrigPolynomial, VerblunskyScheme, orbit_point


def make_scheme(coeffs, lam, omega, base=(0.0, 0.0)):
    return VerblunskyScheme(TrigPolynomial(coeffs), lam, Frequency(omega), Phase(*base))


def random_scheme(rng, max_coupling=0.9):
    coeffs = {}
    for _ in range(int(rng.integers(1, 4))):
        kl = (int(rng.integers(-2, 3)), int(rng.integers(-2, 3)))
        coeffs[kl] = (0.2 + rng.random()) * np.exp(2j * np.pi * rng.random())
    poly = TrigPolynomial(coeffs)
    coeffs = {kl: c / poly.ell1() for kl, c in poly.coefficients.items()}
    return make_scheme(coeffs, float(rng.uniform(0, max_coupling)), float(rng.random()),
                       base=(float(rng.random()), float(rng.random())))


class TestSzegoMatrix:
    def test_free_at_one_is_identity(self):
        assert np.max(np.abs(szego_matrix(0.0, 1.0) - np.eye(2))) == 0.0

    def test_branch_convention_at_minus_one(self):
        m = szego_matrix(0.0, -1.0)
        assert np.max(np.abs(m - np.diag([1j, -1j]))) < 1e-15

    def test_half_coefficient_example(self):
        m = szego_matrix(0.5, 1.0)
        want = np.array([[1.0, -0.5], [-0.5, 1.0]]) / np.sqrt(0.75)
        assert np.max(np.abs(m - want)) < 1e-15
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-14)

    def test_determinant_one_generic(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            a = 0.97 * rng.random() * np.exp(2j * np.pi * rng.random())
            z = np.exp(2j * np.pi * rng.random())
            assert np.linalg.det(szego_matrix(a, z)) == pytest.approx(1.0, abs=1e-12)

    def test_rejects_boundary_coefficient(self):
        with pytest.raises(CocycleError):
            szego_matrix(1.0, 1.0)

    def test_principal_branch_range(self):
        for theta in (0.1, 1.5, np.pi, 4.0, 6.2):
            s = circle_sqrt(np.exp(1j * theta))
            half = np.angle(s)
            assert -1e-12 <= half <= np.pi + 1e-12  # theta/2 in [0, pi)


class TestTransferProduct:
    def test_free_case(self):
        s = make_scheme({(1, 0): 0.5}, 0.0, 0.37)
        fp = transfer_product(s, 10, 1.0)
        assert fp.log_scale == 0.0
        assert np.max(np.abs(fp.matrix - np.eye(2))) == 0.0

    def test_single_factor_matches_szego(self):
        s = make_scheme({(1, 0): 0.5, (0, 1): 0.3}, 0.8, 0.41, base=(0.2, 0.7))
        z = np.exp(0.9j)
        m = szego_matrix(s.alpha_at(0), z)
        fp = transfer_product(s, 1, z)
        nrm = float(spectral_norms_2x2(m))
        assert fp.log_scale == pytest.approx(np.log(nrm), abs=1e-12)
        assert np.max(np.abs(fp.value() - m)) < 1e-12

    def test_constant_sampler_growth_rate(self):
        # alpha == 5/9 at coupling 0.9 gives lambda*c = 0.5; the top eigenvalue of the
        # constant factor is (1 + 0.5)/sqrt(0.75) = sqrt(3)
        s = make_scheme({(0, 0): 5 / 9}, 0.9, 0.123, base=(0.6, 0.1))
        fp = transfer_product(s, 200, 1.0)
        assert fp.log_scale / 200 == pytest.approx(0.5 * np.log(3.0), abs=2e-3)

    def test_ordering_leftmost_is_last_factor(self):
        s = make_scheme({(1, 0): 0.5, (0, 1): 0.2}, 0.7, 0.3, base=(0.15, 0.85))
        z = np.exp(0.4j)
        direct = szego_matrix(s.alpha_at(2), z) @ szego_matrix(s.alpha_at(1), z) @ szego_matrix(s.alpha_at(0), z)
        fp = transfer_product(s, 3, z)
        assert np.max(np.abs(fp.value() - direct)) < 1e-12

    def test_determinant_preserved_long_products(self):
        rng = np.random.default_rng(17)
        s = random_scheme(rng)
        for n in (10, 100, 1000, 10000):
            fp = transfer_product(s, n, np.exp(0.31j))
            assert abs(fp.det() - 1.0) < 1e-6

    def test_unit_norm_invariant(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            s = random_scheme(rng)
            fp = transfer_product(s, int(rng.integers(1, 400)), np.exp(2j * np.pi * rng.random()))
            assert abs(float(spectral_norms_2x2(fp.matrix)) - 1.0) < 1e-12

    def test_cocycle_composition_law(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            s = random_scheme(rng)
            z = np.exp(2j * np.pi * rng.random())
            n1 = int(rng.integers(1, 120))
            n2 = int(rng.integers(1, 120))
            shifted = orbit_point(s.base, s.frequency, n1)
            left = transfer_product(s, n2, z, base=np.array([shifted.x, shifted.y]))
            right = transfer_product(s, n1, z)
            assert left.compose(right).distance(transfer_product(s, n1 + n2, z)) < 1e-8

    def test_branch_flip_negates_but_preserves_norms(self):
        s = make_scheme({(1, 0): 0.4, (0, 1): 0.4}, 0.85, 0.7, base=(0.3, 0.9))
        z = np.exp(2.2j)
        plus = transfer_product(s, 7, z, branch=1)
        minus = transfer_product(s, 7, z, branch=-1)
        assert minus.log_scale == plus.log_scale
        assert np.max(np.abs(minus.matrix + plus.matrix)) < 1e-14  # odd n: global -1
        assert abs(minus.det() - plus.det()) < 1e-12

    def test_norm_bounded_by_scaling_factor(self):
        rng = np.random.default_rng(41)
        for _ in range(15):
            s = random_scheme(rng)
            z = np.exp(2j * np.pi * rng.random())
            P = scaling_factor(s, z).value
            n = int(rng.integers(1, 1000))
            fp = transfer_product(s, n, z)
            assert fp.log_scale / n <= P + 1e-12


class TestSL2RConjugation:
    def test_identity_fixed(self):
        assert np.max(np.abs(sl2r_conjugate(np.eye(2)) - np.eye(2))) < 1e-14

    def test_conjugator_unitary(self):
        Q = SL2R_CONJUGATOR
        assert np.max(np.abs(Q.conj().T @ Q - np.eye(2))) < 1e-15

    def test_real_symmetric_for_real_coefficient(self):
        m = szego_matrix(0.5, 1.0)
        A = sl2r_conjugate(m)
        assert np.max(np.abs(A - A.T)) < 1e-12
        assert float(spectral_norms_2x2(A)) == pytest.approx(1.5 / np.sqrt(0.75), abs=1e-12)

    def test_norms_and_determinant_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            a = 0.95 * rng.random() * np.exp(2j * np.pi * rng.random())
            z = np.exp(2j * np.pi * rng.random())
            m = szego_matrix(a, z)
            A = sl2r_conjugate(m)
            sv_m = np.linalg.svd(m, compute_uv=False)
            sv_A = np.linalg.svd(A, compute_uv=False)
            assert np.max(np.abs(sv_m - sv_A)) < 1e-12
            assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-10)

    def test_products_stay_real(self):
        s = make_scheme({(1, 0): 0.5, (0, 1): 0.3}, 0.9, 0.618, base=(0.1, 0.2))
        fp = transfer_product(s, 50, np.exp(1.1j))
        A = sl2r_conjugate(fp.matrix)  # the unit-norm factor is in the same group
        assert A.shape == (2, 2)

    def test_rejects_off_family_input(self):
        with pytest.raises(ConjugationError):
            sl2r_conjugate(np.array([[2.0, 1.0], [0.0, 0.5]]))


class TestScalingFactor:
    def test_zero_coupling_components(self):
        s = make_scheme({(1, 0): 0.25, (0, 1): 0.25}, 0.0, 0.3)
        sf = scaling_factor(s, 1.0)
        assert sf.sup_inv_rho == 1.0
        assert sf.coupling_term == 1.0
        assert sf.abs_z == 1.0
        assert sf.value == pytest.approx(np.log(3.0 + sf.c_alpha), abs=1e-12)
        assert sf.value >= 1.0

    def test_strip_bound_arithmetic(self):
        s = make_scheme({(1, 0): 0.5, (0, 1): 0.5}, 0.5, 0.3)
        sf = scaling_factor(s, 1.0, h1=0.5, h2=0.5)
        assert sf.c_alpha == pytest.approx(np.exp(np.pi), rel=1e-12)

    def test_monotone_in_coupling(self):
        lo = scaling_factor(make_scheme({(1, 0): 0.5, (0, 1): 0.5}, 0.9, 0.3), 1.0)
        hi = scaling_factor(make_scheme({(1, 0): 0.5, (0, 1): 0.5}, 0.99, 0.3), 1.0)
        assert lo.value < hi.value


class TestDeterminantRoute:
    def test_free_case_identity_up_to_sign(self):
        s = make_scheme({(1, 0): 0.5}, 0.0, 0.3)
        md = transfer_via_determinants(s, 2, 1.0)
        assert min(np.max(np.abs(md - np.eye(2))), np.max(np.abs(md + np.eye(2)))) < 1e-12

    def test_two_step_symbolic_entry(self):
        # (1,1) entry of M_2 equals z (z + conj(a1) a0) / (rho0 rho1 sqrt(z)^2)
        s = make_scheme({(1, 0): 0.4, (0, 1): 0.3}, 0.8, 0.27, base=(0.35, 0.65))
        z = np.exp(0.7j)
        a0, a1 = s.alpha_at(0), s.alpha_at(1)
        r0, r1 = np.sqrt(1 - abs(a0) ** 2), np.sqrt(1 - abs(a1) ** 2)
        md = transfer_via_determinants(s, 2, z)
        want = z * (z + np.conj(a1) * a0) / (r0 * r1 * circle_sqrt(z) ** 2)
        assert md[0, 0] == pytest.approx(want, rel=1e-12)

    def test_matches_product_route(self):
        rng = np.random.default_rng(77)
        for _ in range(30):
            s = random_scheme(rng)
            n = int(rng.integers(2, 13))
            z = np.exp(2j * np.pi * rng.random())
            md = transfer_via_determinants(s, n, z)
            direct = transfer_product(s, n, z).value()
            scale = np.max(np.abs(direct))
            rel = min(np.max(np.abs(md - direct)), np.max(np.abs(md + direct))) / scale
            assert rel < 1e-8

    def test_requires_circle(self):
        s = make_scheme({(1, 0): 0.5}, 0.5, 0.3)
        with pytest.raises(CocycleError):
            transfer_via_determinants(s, 4, 1.2)
