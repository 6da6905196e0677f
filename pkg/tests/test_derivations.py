"""D_n, Δ_n, 흐름, 사영 테스트"""
import random
from fractions import Fraction

import pytest

from sepinv.algebra import NEG_INFINITY, Polynomial, RationalPoint, RingDescriptor, poly_eval
from sepinv.derivations import (
    DerivationKind,
    derive,
    exp_derivation,
    flow_point,
    isobaric_weight,
    iterate,
    nilpotency_index,
    project,
    weight_operator,
)

W = DerivationKind.WEITZENBOECK
D = DerivationKind.DELTA


def _random_poly(rng: random.Random, n: int, terms: int = 4, max_degree: int = 3) -> Polynomial:
    """정수 계수, 차수 ≤ max_degree 인 임의 다항식"""
    r = RingDescriptor(n)
    f = r.zero()
    for _ in range(terms):
        mono = r.const(rng.choice([-3, -2, -1, 1, 2, 3]))
        for _ in range(rng.randint(0, max_degree)):
            mono = mono * r.x(rng.randint(0, n))
        f = f + mono
    return f


def _random_point(rng: random.Random, n: int) -> RationalPoint:
    return RationalPoint.of(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n + 1))


class TestDerive:
    """미분의 정의 작용"""

    def test_weitzenboeck_shifts_down(self):
        """D(x_1) = x_0, D(x_0) = 0"""
        r = RingDescriptor(3)
        assert derive(W, 3, r.x(1)) == r.x(0)
        assert derive(W, 3, r.x(0)) == r.zero()

    def test_slice_identity_n3(self):
        """D_3((3/2)x_0x_3 - ½x_1x_2) = x_0x_2 - ½x_1²"""
        r = RingDescriptor(3)
        s1 = Fraction(3, 2) * r.x(0) * r.x(3) - Fraction(1, 2) * r.x(1) * r.x(2)
        assert derive(W, 3, s1) == r.x(0) * r.x(2) - Fraction(1, 2) * r.x(1) ** 2

    def test_delta_coefficient(self):
        """Δ_2(x_0) = 2x_1, Δ_2(x_2) = 0"""
        r = RingDescriptor(2)
        assert derive(D, 2, r.x(0)) == 2 * r.x(1)
        assert derive(D, 2, r.x(2)) == r.zero()

    def test_string_kind(self):
        """문자열 태그도 허용"""
        r = RingDescriptor(2)
        assert derive("Weitzenboeck", 2, r.x(1)) == r.x(0)

    def test_extended_rejected(self):
        """확장환 입력 거부"""
        ext = RingDescriptor(2, extended=True)
        with pytest.raises(ValueError):
            derive(W, 2, ext.x(1))

    def test_ring_mismatch_rejected(self):
        """n 이 다르면 거부"""
        with pytest.raises(ValueError):
            derive(W, 3, RingDescriptor(2).x(1))

    def test_iterate(self):
        """D^3(x_3) = x_0"""
        r = RingDescriptor(3)
        assert iterate(W, 3, r.x(3), 3) == r.x(0)
        assert iterate(W, 3, r.x(3), 4) == r.zero()

    @pytest.mark.parametrize("kind", [W, D])
    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_leibniz_rule(self, kind, n):
        """d(fg) = d(f)g + f d(g)"""
        rng = random.Random(10 * n + (kind is D))
        for _ in range(10):
            f, g = _random_poly(rng, n), _random_poly(rng, n)
            assert derive(kind, n, f * g) == derive(kind, n, f) * g + f * derive(kind, n, g)


class TestCommutator:
    """[D, Δ] = 무게 연산자"""

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_commutator_on_random(self, n):
        """D(Δf) - Δ(Df) = Σ(n-2k)x_k∂_k f"""
        rng = random.Random(n)
        r = RingDescriptor(n)
        for _ in range(5):
            f = r.zero()
            for _ in range(3):
                f = f + rng.randint(-3, 3) * r.x(rng.randint(0, n)) * r.x(rng.randint(0, n))
            lhs = derive(W, n, derive(D, n, f)) - derive(D, n, derive(W, n, f))
            assert lhs == weight_operator(n, f)


class TestNilpotency:
    """멱영 지수와 등무게"""

    def test_index_of_variable(self):
        """ν(x_j) = j"""
        r = RingDescriptor(4)
        for j in range(5):
            assert nilpotency_index(W, 4, r.x(j)) == j

    def test_zero_is_neg_infinity(self):
        """ν(0) = -∞"""
        assert nilpotency_index(W, 2, RingDescriptor(2).zero()) is NEG_INFINITY

    def test_delta_index(self):
        """Δ_2 에 대한 x_0 의 멱영 지수는 2"""
        assert nilpotency_index(D, 2, RingDescriptor(2).x(0)) == 2

    def test_isobaric_weight(self):
        """x_0 의 무게 n, f_1 의 무게 2n-4"""
        r = RingDescriptor(4)
        f1 = r.x(0) * r.x(2) - Fraction(1, 2) * r.x(1) ** 2
        assert isobaric_weight(4, r.x(0)) == 4
        assert isobaric_weight(4, f1) == 4
        assert isobaric_weight(4, r.x(0) + r.x(1)) is None

    def test_weight_of_zero(self):
        """영다항식 무게는 오류"""
        with pytest.raises(ValueError):
            isobaric_weight(2, RingDescriptor(2).zero())


class TestFlow:
    """가법군 흐름"""

    def test_example_point(self):
        """flow(2, 1, (1,2,3)) = (1,3,11/2)"""
        assert flow_point(2, 1, RationalPoint.of([1, 2, 3])) == RationalPoint.of([1, 3, Fraction(11, 2)])

    def test_zero_translation(self):
        """a = 0 은 항등"""
        v = RationalPoint.of([3, -1, 2, 5])
        assert flow_point(3, 0, v) == v

    def test_group_law(self):
        """flow(a, flow(b, v)) = flow(a+b, v)"""
        v = RationalPoint.of([2, -1, 4, 1])
        assert flow_point(3, 2, flow_point(3, -5, v)) == flow_point(3, -3, v)

    @pytest.mark.parametrize("n", [1, 4, 7])
    def test_group_law_random(self, n):
        """임의의 유리수 a, b 와 점에서 flow(a)∘flow(b) = flow(a+b)"""
        rng = random.Random(n)
        for _ in range(20):
            v = _random_point(rng, n)
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            b = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            assert flow_point(n, a, flow_point(n, b, v)) == flow_point(n, a + b, v)

    def test_length_checked(self):
        """점 길이 검증"""
        with pytest.raises(ValueError):
            flow_point(3, 1, RationalPoint.of([1, 2]))

    def test_exp_derivation_matches_flow(self):
        """exp(aD)f 를 v 에서 평가하면 f 를 flow(a, v) 에서 평가한 값"""
        r = RingDescriptor(3)
        f = r.x(3) * r.x(1) - r.x(2) ** 2 + 5 * r.x(3)
        v = RationalPoint.of([1, -2, 3, Fraction(1, 2)])
        a = Fraction(-3, 2)
        assert poly_eval(exp_derivation(3, a, f), v) == poly_eval(f, flow_point(3, a, v))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_exp_derivation_matches_flow_random(self, n):
        """n ≤ 6, 임의의 (a, v, f)"""
        rng = random.Random(50 + n)
        for _ in range(10):
            f = _random_poly(rng, n)
            v = _random_point(rng, n)
            a = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            assert poly_eval(exp_derivation(n, a, f), v) == poly_eval(f, flow_point(n, a, v))

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_kernel_elements_constant_on_orbits(self, n):
        """D_n f = 0 이면 f(flow(a, v)) = f(v)"""
        from sepinv.separating import build_f

        rng = random.Random(n)
        for m in range(n // 2 + 1):
            f = build_f(n, m)
            for _ in range(5):
                v = _random_point(rng, n)
                assert poly_eval(f, flow_point(n, rng.randint(-5, 5), v)) == poly_eval(f, v)


class TestProject:
    """π_{m,n}"""

    def test_drops_leading_variables(self):
        """π_{1,3}(x_0 + x_2 x_3) = x_0 x_1"""
        r3, r1 = RingDescriptor(3), RingDescriptor(1)
        assert project(1, 3, r3.x(0) + r3.x(2) * r3.x(3)) == r1.x(0) * r1.x(1)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_f_m_middle_image(self, m):
        """π_{m,2m}(f_m) = ½(-1)^m x_0²"""
        from sepinv.separating import build_f

        n = 2 * m
        image = project(m, n, build_f(n, m))
        assert image == Fraction((-1) ** m, 2) * RingDescriptor(m).x(0) ** 2

    @pytest.mark.parametrize("n", range(1, 9))
    def test_intertwines_derivation(self, n):
        """π_{m,n}(D_n f) = D_m(π_{m,n} f), 0 ≤ m < n"""
        rng = random.Random(n)
        for m in range(n):
            for _ in range(4):
                f = _random_poly(rng, n)
                assert project(m, n, derive(W, n, f)) == derive(W, m, project(m, n, f))

    @pytest.mark.parametrize("m,n", [(3, 3), (-1, 2), (4, 3)])
    def test_range(self, m, n):
        """0 ≤ m < n 밖이면 오류"""
        with pytest.raises(ValueError):
            project(m, n, RingDescriptor(n).x(0))
