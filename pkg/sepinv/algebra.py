"""정확한 유리수 계수 희소 다변수 다항식 (R_n = Q[x_0..x_n], 확장 시 y_0, y_1 추가)"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import lcm
from operator import add
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

logger = logging.getLogger("sepinv.algebra")

Rational = Fraction
Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class NegInfinity:
    """ν(0) = −∞ 를 나타내는 구분 값. 숫자가 아니므로 산술 연산은 TypeError."""

    _instance: Optional["NegInfinity"] = None

    def __new__(cls) -> "NegInfinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INFINITY"


NEG_INFINITY = NegInfinity()


class Fixed(Enum):
    """substitute() 에서 변수에 대입할 상수"""
    ZERO = 0
    ONE = 1


@dataclass(frozen=True)
class RingDescriptor:
    """다항식환 설명자. n: 가장 큰 x 인덱스, extended: y_0, y_1 포함 여부"""
    n: int
    extended: bool = False

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"n 은 0 이상이어야 합니다: {self.n}")

    @property
    def nvars(self) -> int:
        return self.n + 1 + (2 if self.extended else 0)

    def y_index(self, k: int) -> int:
        if not self.extended:
            raise ValueError("y 변수는 확장환에서만 사용할 수 있습니다.")
        if k not in (0, 1):
            raise ValueError(f"y 인덱스는 0 또는 1 입니다: {k}")
        return self.n + 1 + k

    def var_name(self, index: int) -> str:
        if index <= self.n:
            return f"x{index}"
        return f"y{index - self.n - 1}"

    def base(self) -> "RingDescriptor":
        return RingDescriptor(self.n, False)

    def extend(self) -> "RingDescriptor":
        return RingDescriptor(self.n, True)

    # ---------- 생성자 ----------

    def zero(self) -> "Polynomial":
        return Polynomial(self)

    def const(self, c: Scalar) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def one(self) -> "Polynomial":
        return self.const(1)

    def gen(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise ValueError(f"변수 인덱스 범위를 벗어났습니다: {index} (변수 {self.nvars}개)")
        mono = [0] * self.nvars
        mono[index] = 1
        return Polynomial(self, {tuple(mono): 1})

    def x(self, i: int) -> "Polynomial":
        if not 0 <= i <= self.n:
            raise ValueError(f"x 인덱스 범위를 벗어났습니다: {i} (n={self.n})")
        return self.gen(i)

    def y(self, k: int) -> "Polynomial":
        return self.gen(self.y_index(k))


def monomial_sort_key(mono: Monomial) -> tuple:
    """직렬화 정렬 키: 차수 내림차순, 같은 차수면 x_0 > x_1 > ... > y_1 사전식"""
    return (-sum(mono), tuple(-e for e in mono))


def _to_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"유리수 계수만 허용됩니다: {c!r}")


class Polynomial:
    """
    희소 표현 다항식. terms: 단항식(지수 튜플) -> 0 이 아닌 Fraction.
    생성 후 변경되지 않는다.
    """

    def __init__(self, ring: RingDescriptor, terms: Optional[Mapping[Monomial, Scalar]] = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != ring.nvars or any(e < 0 for e in mono):
                raise ValueError(f"단항식 지수가 환과 맞지 않습니다: {mono} (변수 {ring.nvars}개)")
            c = _to_fraction(c)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._ring = ring
        self._terms = MappingProxyType(clean)

    @classmethod
    def _raw(cls, ring: RingDescriptor, terms: dict[Monomial, Fraction]) -> "Polynomial":
        """이미 정규형(0 계수 없음)인 dict 로 검증 없이 생성"""
        poly = cls.__new__(cls)
        poly._ring = ring
        poly._terms = MappingProxyType(terms)
        return poly

    @property
    def ring(self) -> RingDescriptor:
        return self._ring

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    @cached_property
    def _integer_form(self) -> tuple[dict[Monomial, int], int]:
        """(정수 계수, 공통 분모): self = 정수다항식 / 분모"""
        den = lcm(*(c.denominator for c in self._terms.values())) if self._terms else 1
        return {m: c.numerator * (den // c.denominator) for m, c in self._terms.items()}, den

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: monomial_sort_key(item[0]))

    def lead_term(self) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("영다항식에는 선도항이 없습니다.")
        return min(self._terms.items(), key=lambda item: monomial_sort_key(item[0]))

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def variables(self) -> set[int]:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self._terms.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self._ring == other._ring and dict(self._terms) == dict(other._terms)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self == self._ring.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        # 상수는 같은 값의 int/Fraction 과 같다고 비교되므로 해시도 맞춘다
        if self.is_constant():
            return hash(self.coefficient((0,) * self._ring.nvars))
        return hash((self._ring, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        from sepinv.codec import format_pretty

        return f"Polynomial({format_pretty(self)})"

    # ---------- 연산자 ----------

    def _coerce(self, other: object) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._ring.const(other)
        return None

    def __add__(self, other: object) -> "Polynomial":
        g = self._coerce(other)
        return NotImplemented if g is None else poly_add(self, g)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Polynomial":
        g = self._coerce(other)
        return NotImplemented if g is None else poly_sub(self, g)

    def __rsub__(self, other: object) -> "Polynomial":
        g = self._coerce(other)
        return NotImplemented if g is None else poly_sub(g, self)

    def __neg__(self) -> "Polynomial":
        return poly_neg(self)

    def __mul__(self, other: object) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return poly_scale(self, other)
        if isinstance(other, Polynomial):
            return poly_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("0 으로 나눌 수 없습니다.")
            return poly_scale(self, 1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        return poly_pow(self, k)


@dataclass(frozen=True)
class RationalPoint:
    """V_n 의 점 (a_0, ..., a_n)"""
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(_to_fraction(c) for c in self.coords))

    @classmethod
    def of(cls, values: Iterable[Scalar]) -> "RationalPoint":
        return cls(tuple(values))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coords)


# ---------- 환 연산 ----------

def _check_same_ring(f: Polynomial, g: Polynomial) -> None:
    if f.ring != g.ring:
        raise ValueError(f"서로 다른 환의 다항식입니다: {f.ring} vs {g.ring}")


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    _check_same_ring(f, g)
    if len(f) < len(g):
        f, g = g, f
    acc = dict(f.terms)
    for mono, c in g.terms.items():
        s = acc.get(mono, 0) + c
        if s:
            acc[mono] = s
        else:
            acc.pop(mono, None)
    return Polynomial._raw(f.ring, acc)


def poly_neg(f: Polynomial) -> Polynomial:
    return Polynomial._raw(f.ring, {m: -c for m, c in f.terms.items()})


def poly_sub(f: Polynomial, g: Polynomial) -> Polynomial:
    return poly_add(f, poly_neg(g))


def poly_scale(f: Polynomial, c: Scalar) -> Polynomial:
    c = _to_fraction(c)
    if not c:
        return f.ring.zero()
    return Polynomial._raw(f.ring, {m: c * v for m, v in f.terms.items()})


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    """정수 계수로 곱한 뒤 공통 분모로 한 번만 나눈다"""
    _check_same_ring(f, g)
    if not f or not g:
        return f.ring.zero()
    (fi, fd), (gi, gd) = f._integer_form, g._integer_form
    if len(fi) > len(gi):
        fi, gi = gi, fi
    acc: dict[Monomial, int] = {}
    get = acc.get
    g_items = list(gi.items())
    for m1, c1 in fi.items():
        for m2, c2 in g_items:
            m = tuple(map(add, m1, m2))
            acc[m] = get(m, 0) + c1 * c2
    den = fd * gd
    return Polynomial._raw(f.ring, {m: Fraction(c, den) for m, c in acc.items() if c})


def poly_pow(f: Polynomial, k: int) -> Polynomial:
    if k < 0:
        raise ValueError(f"지수는 0 이상이어야 합니다: {k}")
    result = f.ring.one()
    base = f
    while k:
        if k & 1:
            result = poly_mul(result, base)
        k >>= 1
        if k:
            base = poly_mul(base, base)
    return result


def poly_eval(f: Polynomial, v: RationalPoint) -> Fraction:
    """
    정확한 대입값. 좌표를 공통 분모 L 로 정수화하고 차수별로 모아
    마지막에 한 번만 나눈다 (f(v) = Σ_d S_d / L^d).
    """
    if f.ring.extended:
        raise ValueError("확장환 다항식은 V_n 의 점에서 평가할 수 없습니다.")
    if len(v) != f.ring.n + 1:
        raise ValueError(f"점의 길이가 맞지 않습니다: {len(v)} != {f.ring.n + 1}")
    if not f:
        return Fraction(0)
    L = lcm(*(c.denominator for c in v.coords))
    u = [c.numerator * (L // c.denominator) for c in v.coords]
    int_terms, den = f._integer_form
    powers: dict[tuple[int, int], int] = {}
    by_degree: dict[int, int] = {}
    for mono, c in int_terms.items():
        t = c
        deg = 0
        for i, e in enumerate(mono):
            if e:
                key = (i, e)
                p = powers.get(key)
                if p is None:
                    p = powers[key] = u[i] ** e
                t *= p
                deg += e
            if not t:
                break
        if t:
            by_degree[deg] = by_degree.get(deg, 0) + t
    if not by_degree:
        return Fraction(0)
    top = max(by_degree)
    num = sum(s * L ** (top - d) for d, s in by_degree.items())
    return Fraction(num, den * L ** top)


def partial_derivative(f: Polynomial, var_index: int) -> Polynomial:
    if not 0 <= var_index < f.ring.nvars:
        raise ValueError(f"변수 인덱스 범위를 벗어났습니다: {var_index} (변수 {f.ring.nvars}개)")
    acc: dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        e = mono[var_index]
        if e:
            new = list(mono)
            new[var_index] = e - 1
            acc[tuple(new)] = c * e
    return Polynomial._raw(f.ring, acc)


def total_degree(f: Polynomial) -> Union[int, NegInfinity]:
    if not f:
        return NEG_INFINITY
    return max(sum(m) for m in f.terms)


def is_homogeneous(f: Polynomial) -> bool:
    return len({sum(m) for m in f.terms}) <= 1


def scalar_ratio(f: Polynomial, g: Polynomial) -> Optional[Fraction]:
    """f = λ·g 인 0 이 아닌 λ. 비례하지 않거나 어느 한쪽이 0 이면 None"""
    _check_same_ring(f, g)
    if not f or not g or f.terms.keys() != g.terms.keys():
        return None
    mono, c = next(iter(g.terms.items()))
    ratio = f.terms[mono] / c
    if all(f.terms[m] == ratio * v for m, v in g.terms.items()):
        return ratio
    return None


def substitute(
    f: Polynomial,
    target: RingDescriptor,
    index_map: Sequence[Union[int, Fixed]],
) -> Polynomial:
    """
    변수 치환. index_map[i] 가 정수면 f 의 i 번째 변수를 target 의 그 변수로,
    Fixed.ZERO / Fixed.ONE 이면 해당 상수로 바꾼다.
    """
    if len(index_map) != f.ring.nvars:
        raise ValueError(f"index_map 길이가 변수 개수와 다릅니다: {len(index_map)} != {f.ring.nvars}")
    acc: dict[Monomial, Fraction] = {}
    for mono, c in f.terms.items():
        new = [0] * target.nvars
        for i, e in enumerate(mono):
            if not e:
                continue
            image = index_map[i]
            if image is Fixed.ZERO:
                break
            if image is Fixed.ONE:
                continue
            new[image] += e
        else:
            key = tuple(new)
            s = acc.get(key, 0) + c
            if s:
                acc[key] = s
            else:
                acc.pop(key, None)
    return Polynomial._raw(target, acc)


def embed(f: Polynomial, target: RingDescriptor) -> Polynomial:
    """R_n -> R_n[y_0, y_1] 포함사상 (변수 순서 유지)"""
    if target.n != f.ring.n or target.nvars < f.ring.nvars:
        raise ValueError(f"{f.ring} 를 {target} 에 넣을 수 없습니다.")
    return substitute(f, target, list(range(f.ring.nvars)))
