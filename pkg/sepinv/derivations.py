"""Weitzenböck 미분 D_n, 짝 미분 Δ_n, 가법군 흐름, 사영 π_{m,n}"""
import logging
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Optional, Union

from sepinv.algebra import (
    NEG_INFINITY,
    Fixed,
    Monomial,
    NegInfinity,
    Polynomial,
    RationalPoint,
    RingDescriptor,
    Scalar,
    partial_derivative,
    poly_add,
    poly_scale,
    substitute,
)

logger = logging.getLogger("sepinv.derivations")


class DerivationKind(str, Enum):
    """WEITZENBOECK: x_k -> x_{k-1}, x_0 -> 0 / DELTA: x_k -> (n-k)(k+1) x_{k+1}, x_n -> 0"""
    WEITZENBOECK = "Weitzenboeck"
    DELTA = "Delta"


def _require_base(n: int, f: Polynomial) -> None:
    if f.ring.extended:
        raise ValueError("미분은 R_n 의 원소에만 적용됩니다 (확장환 입력).")
    if f.ring.n != n:
        raise ValueError(f"다항식의 환 R_{f.ring.n} 이 R_{n} 과 다릅니다.")


def derive(kind: DerivationKind, n: int, f: Polynomial) -> Polynomial:
    _require_base(n, f)
    kind = DerivationKind(kind)
    acc: dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        for k, e in enumerate(mono):
            if not e:
                continue
            if kind is DerivationKind.WEITZENBOECK:
                if k == 0:
                    continue
                target, factor = k - 1, e
            else:
                if k == n:
                    continue
                target, factor = k + 1, e * (n - k) * (k + 1)
            new = list(mono)
            new[k] -= 1
            new[target] += 1
            key = tuple(new)
            s = acc.get(key, 0) + c * factor
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return Polynomial._raw(f.ring, acc)


def iterate(kind: DerivationKind, n: int, f: Polynomial, times: int) -> Polynomial:
    if times < 0:
        raise ValueError(f"반복 횟수는 0 이상이어야 합니다: {times}")
    for _ in range(times):
        if not f:
            break
        f = derive(kind, n, f)
    return f


def nilpotency_index(kind: DerivationKind, n: int, f: Polynomial) -> Union[int, NegInfinity]:
    """derive^{m+1}(f) = 0 인 최소 m. f = 0 이면 NEG_INFINITY"""
    _require_base(n, f)
    if not f:
        return NEG_INFINITY
    m = 0
    g = derive(kind, n, f)
    while g:
        m += 1
        g = derive(kind, n, g)
    return m


def isobaric_weight(n: int, f: Polynomial) -> Optional[int]:
    """모든 항의 Σ(n-2k)·a_k 가 같으면 그 값, 아니면 None"""
    _require_base(n, f)
    if not f:
        raise ValueError("영다항식의 무게는 정의되지 않습니다.")
    weights = {sum((n - 2 * k) * e for k, e in enumerate(mono)) for mono in f.terms}
    return weights.pop() if len(weights) == 1 else None


def weight_operator(n: int, f: Polynomial) -> Polynomial:
    """Σ_k (n-2k) x_k ∂f/∂x_k  (= D_n Δ_n f - Δ_n D_n f)"""
    _require_base(n, f)
    result = f.ring.zero()
    for k in range(n + 1):
        if n - 2 * k:
            result = poly_add(result, poly_scale(f.ring.x(k) * partial_derivative(f, k), n - 2 * k))
    return result


def flow_point(n: int, a: Scalar, v: RationalPoint) -> RationalPoint:
    """기본 작용: i 번째 좌표 = Σ_{j≤i} a^j/j! · v_{i-j}"""
    if len(v) != n + 1:
        raise ValueError(f"점의 길이가 맞지 않습니다: {len(v)} != {n + 1}")
    a = Fraction(a)
    weights = [a ** j / factorial(j) for j in range(n + 1)]
    return RationalPoint(tuple(
        sum((weights[j] * v[i - j] for j in range(i + 1)), Fraction(0))
        for i in range(n + 1)
    ))


def exp_derivation(n: int, a: Scalar, f: Polynomial) -> Polynomial:
    """exp(aD_n) f = Σ_k a^k D^k f / k!  (국소 멱영이므로 유한합)"""
    _require_base(n, f)
    a = Fraction(a)
    result = f.ring.zero()
    term = f
    k = 0
    while term:
        result = poly_add(result, poly_scale(term, a ** k / factorial(k)))
        k += 1
        term = derive(DerivationKind.WEITZENBOECK, n, term)
    return result


def project(m: int, n: int, f: Polynomial) -> Polynomial:
    """π_{m,n}: f(x_0..x_n) -> f(0,..,0,x_0,..,x_m)  (앞의 n-m 개 변수에 0 대입)"""
    if not 0 <= m < n:
        raise ValueError(f"사영 π_(m,n) 은 0 ≤ m < n 이어야 합니다: m={m}, n={n}")
    _require_base(n, f)
    shift = n - m
    index_map = [Fixed.ZERO if i < shift else i - shift for i in range(n + 1)]
    return substitute(f, RingDescriptor(m), index_map)
