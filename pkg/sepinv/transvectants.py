"""Roberts 동형사상 Φ / Φ⁻¹, 고전 transvectant, semitransvectant 와 특수 불변식 w"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Optional

from sepinv.algebra import (
    Fixed,
    Polynomial,
    RingDescriptor,
    embed,
    partial_derivative,
    poly_add,
    poly_mul,
    poly_scale,
    scalar_ratio,
    substitute,
)
from sepinv.derivations import DerivationKind, derive, isobaric_weight, iterate, project

logger = logging.getLogger("sepinv.transvectants")

DELTA = DerivationKind.DELTA


# ---------- 차수(ord) ----------

def order(n: int, f: Polynomial) -> int:
    """ker D_n 의 등무게 원소 f 의 ord = 무게 Σ(n-2k)a_k"""
    if not f:
        raise ValueError("영다항식의 ord 는 정의되지 않습니다.")
    weight = isobaric_weight(n, f)
    if weight is None:
        raise ValueError("등무게(isobaric) 다항식이 아닙니다.")
    if derive(DerivationKind.WEITZENBOECK, n, f):
        raise ValueError("D_n 의 핵에 속하지 않는 다항식입니다.")
    if weight < 0:
        raise ValueError(f"ker D_n 원소의 무게가 음수입니다: {weight}")
    return weight


def y_order(F: Polynomial) -> int:
    """(y_0, y_1) 에 대한 동차 차수"""
    ring = F.ring
    if not ring.extended:
        raise ValueError("공변식은 확장환 R_n[y_0, y_1] 의 원소여야 합니다.")
    if not F:
        raise ValueError("영다항식의 order 는 정의되지 않습니다.")
    i0, i1 = ring.y_index(0), ring.y_index(1)
    degrees = {mono[i0] + mono[i1] for mono in F.terms}
    if len(degrees) != 1:
        raise ValueError("(y_0, y_1) 에 대해 동차가 아닙니다.")
    return degrees.pop()


# ---------- Φ, Φ⁻¹ ----------

def roberts_forward(n: int, F: Polynomial) -> Polynomial:
    """Φ(F) = F(x_0..x_n, 0, 1)"""
    ring = F.ring
    if not ring.extended or ring.n != n:
        raise ValueError(f"R_{n}[y_0, y_1] 의 원소가 아닙니다.")
    index_map = list(range(n + 1)) + [Fixed.ZERO, Fixed.ONE]
    return substitute(F, RingDescriptor(n), index_map)


def roberts_inverse(n: int, f: Polynomial) -> Polynomial:
    """Φ⁻¹(f) = Σ_i (-1)^i Δ^i f / i! · y_0^i y_1^{ord f - i}"""
    ord_f = order(n, f)
    ext = RingDescriptor(n, extended=True)
    y0, y1 = ext.y(0), ext.y(1)
    result = ext.zero()
    delta_f = f
    for i in range(ord_f + 1):
        if i:
            delta_f = derive(DELTA, n, delta_f)
        if not delta_f:
            break
        coeff = Fraction((-1) ** i, factorial(i))
        term = poly_mul(embed(delta_f, ext), y0 ** i * y1 ** (ord_f - i))
        result = poly_add(result, poly_scale(term, coeff))
    return result


# ---------- transvectant ----------

def _y_derivative(F: Polynomial, times_y0: int, times_y1: int) -> Polynomial:
    i0, i1 = F.ring.y_index(0), F.ring.y_index(1)
    for _ in range(times_y0):
        F = partial_derivative(F, i0)
    for _ in range(times_y1):
        F = partial_derivative(F, i1)
    return F


def classical_transvectant(F: Polynomial, G: Polynomial, r: int) -> Polynomial:
    """⟨F,G⟩^(r) = Σ_k (-1)^k C(r,k) ∂^r F/∂y_0^{r-k}∂y_1^k · ∂^r G/∂y_0^k∂y_1^{r-k}"""
    if F.ring != G.ring:
        raise ValueError("서로 다른 환의 공변식입니다.")
    if r < 0 or r > min(y_order(F), y_order(G)):
        raise ValueError(f"r 은 0 ≤ r ≤ min(order F, order G) 이어야 합니다: r={r}")
    result = F.ring.zero()
    for k in range(r + 1):
        left = _y_derivative(F, r - k, k)
        right = _y_derivative(G, k, r - k)
        result = poly_add(result, poly_scale(poly_mul(left, right), (-1) ** k * comb(r, k)))
    return result


def semitransvectant(n: int, f: Polynomial, g: Polynomial, r: int) -> Polynomial:
    """
    [f,g]^(r) = Σ_k (-1)^k C(r,k) Δ^k(f)·(ord f-k)!/(ord f-r)! · Δ^{r-k}(g)·(ord g-r+k)!/(ord g-r)!

    Φ(⟨Φ⁻¹f, Φ⁻¹g⟩^(r)) 를 확장환을 거치지 않고 계산한다.
    """
    ord_f, ord_g = order(n, f), order(n, g)
    if r < 0 or r > min(ord_f, ord_g):
        raise ValueError(f"r 은 0 ≤ r ≤ min(ord f, ord g) = {min(ord_f, ord_g)} 이어야 합니다: r={r}")
    f_iter = [f]
    g_iter = [g]
    for _ in range(r):
        f_iter.append(derive(DELTA, n, f_iter[-1]))
        g_iter.append(derive(DELTA, n, g_iter[-1]))
    result = f.ring.zero()
    for k in range(r + 1):
        a, b = f_iter[k], g_iter[r - k]
        if not a or not b:
            continue
        coeff = Fraction(
            (-1) ** k * comb(r, k)
            * factorial(ord_f - k) * factorial(ord_g - r + k),
            factorial(ord_f - r) * factorial(ord_g - r),
        )
        result = poly_add(result, poly_scale(poly_mul(a, b), coeff))
    return result


# ---------- w ----------

@dataclass(frozen=True)
class WConstruction:
    n: int
    wbar: Polynomial
    scalar: Fraction
    w: Polynomial


def construct_w(n: int) -> WConstruction:
    """w̄ = [x_0, f_p]^(n) (n = 4p) 를 π_{n/2,n}(w̄) 의 x_0³ 계수로 나눠 w 를 얻는다"""
    if n < 4 or n % 4:
        raise ValueError(f"w 는 4 의 배수인 n 에서만 정의됩니다: n={n}")
    from sepinv.separating import build_f

    ring = RingDescriptor(n)
    wbar = semitransvectant(n, ring.x(0), build_f(n, n // 4), n)
    m = n // 2
    image = project(m, n, wbar)
    scalar = image.coefficient((3,) + (0,) * m)
    if not scalar or len(image) != 1:
        raise ValueError(f"π_(m,n)(w̄) 가 x_0³ 의 0 이 아닌 배수가 아닙니다: n={n}")
    logger.info("w 구성 완료: n=%d, 정규화 상수 %s", n, scalar)
    return WConstruction(n, wbar, scalar, poly_scale(wbar, 1 / scalar))


def build_w(n: int) -> Polynomial:
    return construct_w(n).w


def w_scalar_closed_form(n: int) -> Fraction:
    """n!²·((2p)!)²/2·S(p), 구성 과정에서 계산되는 정규화 상수와 같아야 한다"""
    if n < 4 or n % 4:
        raise ValueError(f"n 은 4 의 배수여야 합니다: n={n}")
    from sepinv.wz import closed_form

    p = n // 4
    return Fraction(factorial(n) ** 2 * factorial(2 * p) ** 2, 2) * closed_form(p)


def wbar_alternate(n: int) -> Polynomial:
    """Σ_k (-1)^k x_k D^k g,  g = Δ_n^n(f_p).  n!·(결과) = w̄"""
    if n < 4 or n % 4:
        raise ValueError(f"w 는 4 의 배수인 n 에서만 정의됩니다: n={n}")
    from sepinv.separating import build_f

    ring = RingDescriptor(n)
    g = iterate(DELTA, n, build_f(n, n // 4), n)
    result = ring.zero()
    d_g = g
    for k in range(n + 1):
        if k:
            d_g = derive(DerivationKind.WEITZENBOECK, n, d_g)
        if not d_g:
            break
        result = poly_add(result, poly_scale(poly_mul(ring.x(k), d_g), (-1) ** k))
    return result


# ---------- ε_{s_m}(x_j) 와 [x_0, f_m^j]^(j) 비교 ----------

@dataclass(frozen=True)
class ExploreResult:
    n: int
    m: int
    j: int
    epsilon: Polynomial
    transvectant: Polynomial
    ratio: Optional[Fraction]


def explore(n: int, m: int, j: int) -> ExploreResult:
    """transvectant = ratio · epsilon 인 ratio 를 찾는다 (없으면 None)"""
    from sepinv.separating import build_f, build_s, epsilon

    if j < 1 or j > n:
        raise ValueError(f"j 는 1 ≤ j ≤ n 이어야 합니다: j={j}")
    ring = RingDescriptor(n)
    eps = epsilon(n, build_s(n, m), ring.x(j))
    tv = semitransvectant(n, ring.x(0), build_f(n, m) ** j, j)
    ratio = scalar_ratio(tv, eps)
    logger.debug("explore n=%d m=%d j=%d: ratio=%s", n, m, j, ratio)
    return ExploreResult(n, m, j, eps, tv, ratio)
