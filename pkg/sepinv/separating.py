"""불변식 f_m, 국소 슬라이스 s_m, 슬라이스 불변식 ε_s(a) 와 분리 집합 E_n 구성"""
import logging
import os
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Iterator, Optional

from sepinv.algebra import (
    Monomial,
    Polynomial,
    RingDescriptor,
    poly_add,
    poly_mul,
    poly_scale,
    total_degree,
)
from sepinv.cache import BoundedCache
from sepinv.derivations import DerivationKind, derive, nilpotency_index, project

logger = logging.getLogger("sepinv.separating")

W = DerivationKind.WEITZENBOECK

# |E_n| 기준값 (n = 4..20)
REFERENCE_SIZES: dict[int, int] = {
    4: 11, 5: 16, 6: 20, 7: 28, 8: 34, 9: 43, 10: 49, 11: 61, 12: 69,
    13: 82, 14: 90, 15: 106, 16: 116, 17: 133, 18: 143, 19: 163, 20: 175,
}

# 전개 다항식을 실제로 만드는 최대 n (n = 12 에서 수십 초, 약 1GB). 환경변수 SEPINV_MAX_BUILD_N
MAX_BUILD_N = int(os.getenv("SEPINV_MAX_BUILD_N", "12"))


class ElementKind(str, Enum):
    F = "F"
    EPS = "EPS"
    W = "W"


_LABEL_RE = re.compile(r"^(?:F\((\d+)\)|EPS\((\d+),(\d+)\)|W)$")


@dataclass(frozen=True)
class ElementLabel:
    """F(m) = f_m, EPS(m,j) = ε_{s_m}(x_j), W = w"""
    kind: ElementKind
    m: Optional[int] = None
    j: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is ElementKind.F:
            return f"F({self.m})"
        if self.kind is ElementKind.EPS:
            return f"EPS({self.m},{self.j})"
        return "W"

    @classmethod
    def parse(cls, text: str) -> "ElementLabel":
        match = _LABEL_RE.match(text.strip())
        if not match:
            raise ValueError(f"알 수 없는 원소 라벨입니다: {text!r}")
        f_m, eps_m, eps_j = match.groups()
        if f_m is not None:
            return cls(ElementKind.F, int(f_m))
        if eps_m is not None:
            return cls(ElementKind.EPS, int(eps_m), int(eps_j))
        return cls(ElementKind.W)


@dataclass(frozen=True)
class SeparatingSet:
    """나열 순서 그대로의 (라벨, 다항식) 목록"""
    n: int
    elements: tuple[tuple[ElementLabel, Polynomial], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[tuple[ElementLabel, Polynomial]]:
        return iter(self.elements)

    @property
    def labels(self) -> list[ElementLabel]:
        return [label for label, _ in self.elements]

    def get(self, label: ElementLabel) -> Polynomial:
        for lab, poly in self.elements:
            if lab == label:
                return poly
        raise KeyError(str(label))

    @property
    def max_degree(self) -> int:
        degrees = [total_degree(p) for _, p in self.elements if p]
        return max(degrees) if degrees else 0


# ---------- f_m, s_m, ε_s ----------

def build_f(n: int, m: int) -> Polynomial:
    """f_m = Σ_{k<m} (-1)^k x_k x_{2m-k} + ½(-1)^m x_m², f_0 = x_0"""
    if not 0 <= m <= n // 2:
        raise ValueError(f"f_m 은 0 ≤ m ≤ [n/2] 에서 정의됩니다: m={m}, n={n}")
    ring = RingDescriptor(n)
    if m == 0:
        return ring.x(0)
    terms: dict[Monomial, Fraction] = {}
    for k in range(m):
        mono = [0] * (n + 1)
        mono[k] += 1
        mono[2 * m - k] += 1
        terms[tuple(mono)] = Fraction((-1) ** k)
    mono = [0] * (n + 1)
    mono[m] = 2
    terms[tuple(mono)] = Fraction((-1) ** m, 2)
    return Polynomial(ring, terms)


def build_s(n: int, m: int) -> Polynomial:
    """s_m = Σ_{k≤m} (-1)^k (2m+1-2k)/2 · x_k x_{2m+1-k}, s_0 = x_1"""
    if not 0 <= m <= (n - 1) // 2:
        raise ValueError(f"s_m 은 0 ≤ m ≤ [(n-1)/2] 에서 정의됩니다: m={m}, n={n}")
    ring = RingDescriptor(n)
    if m == 0:
        return ring.x(1)
    terms: dict[Monomial, Fraction] = {}
    for k in range(m + 1):
        mono = [0] * (n + 1)
        mono[k] += 1
        mono[2 * m + 1 - k] += 1
        terms[tuple(mono)] = Fraction((-1) ** k * (2 * m + 1 - 2 * k), 2)
    return Polynomial(ring, terms)


def epsilon(n: int, s: Polynomial, a: Polynomial) -> Polynomial:
    """
    ε_s(a) = Σ_{k=0}^{ν(a)} (-1)^k/k! · D^k(a) · s^k · (Ds)^{ν(a)-k}.
    s 에 대한 호너 전개로 큰 다항식끼리의 곱을 피한다.
    """
    ds = derive(W, n, s)
    if not ds or derive(W, n, ds):
        raise ValueError("s 는 국소 슬라이스가 아닙니다 (D_n s 가 0 이 아닌 불변식이어야 함).")
    if not a:
        return a
    nu = nilpotency_index(W, n, a)
    iterates = [a]
    for _ in range(nu):
        iterates.append(derive(W, n, iterates[-1]))

    def coeff(k: int) -> Fraction:
        return Fraction((-1) ** k, factorial(k))

    result = poly_scale(iterates[nu], coeff(nu))
    ds_power = s.ring.one()
    for i in range(1, nu + 1):
        ds_power = poly_mul(ds_power, ds)
        k = nu - i
        result = poly_add(poly_mul(result, s), poly_scale(poly_mul(iterates[k], ds_power), coeff(k)))
    return result


# ---------- E_n ----------

def element_labels(n: int) -> list[ElementLabel]:
    """나열 순서: f_0..f_[n/2], ε_{s_0}(x_2..x_n), ε_{s_m}(x_m..x_n) (m ≥ 1), [w]"""
    if n < 1:
        raise ValueError(f"n 은 1 이상이어야 합니다: {n}")
    labels = [ElementLabel(ElementKind.F, m) for m in range(n // 2 + 1)]
    labels += [ElementLabel(ElementKind.EPS, 0, j) for j in range(2, n + 1)]
    for m in range(1, (n - 1) // 2 + 1):
        labels += [ElementLabel(ElementKind.EPS, m, j) for j in range(m, n + 1)]
    if n % 4 == 0:
        labels.append(ElementLabel(ElementKind.W))
    return labels


def expected_size(n: int) -> int:
    """나열을 세는 닫힌 식 (s_1 행은 n ≥ 3 에서만 존재)"""
    if n < 1:
        raise ValueError(f"n 은 1 이상이어야 합니다: {n}")
    size = (n // 2 + 1) + (n - 1)
    if n >= 3:
        size += n
    size += sum(n - m + 1 for m in range(2, (n - 1) // 2 + 1))
    if n % 4 == 0:
        size += 1
    return size


def build_element(n: int, label: ElementLabel) -> Polynomial:
    if label.kind is ElementKind.F:
        return build_f(n, label.m)
    if label.kind is ElementKind.EPS:
        return epsilon(n, build_s(n, label.m), RingDescriptor(n).x(label.j))
    from sepinv.transvectants import build_w

    return build_w(n)


def build_E(n: int) -> SeparatingSet:
    labels = element_labels(n)
    if n > MAX_BUILD_N:
        raise ValueError(
            f"n = {n} 의 E_n 전개는 지원 범위(n ≤ {MAX_BUILD_N})를 넘습니다. "
            "크기·차수 검사는 table 명령으로 가능합니다 (상한은 SEPINV_MAX_BUILD_N)."
        )
    elements = tuple((label, build_element(n, label)) for label in labels)
    logger.info("E_%d 구성 완료: 원소 %d개, 최대 차수 %d", n, len(elements), max(total_degree(p) for _, p in elements))
    return SeparatingSet(n, elements)


# 분리 판정이 같은 n 을 반복 조회하므로 구성 결과를 보관
_separating_cache: BoundedCache[int, SeparatingSet] = BoundedCache("separating-set")


def get_separating_set(n: int) -> SeparatingSet:
    return _separating_cache.get_or_build(n, lambda: build_E(n))


# ---------- 검사 ----------

@dataclass
class KernelReport:
    n: int
    checked: int
    violations: list[tuple[ElementLabel, Polynomial]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_kernel_membership(E: SeparatingSet) -> KernelReport:
    report = KernelReport(E.n, len(E))
    for label, poly in E:
        image = derive(W, E.n, poly)
        if image:
            logger.warning("D_%d(%s) ≠ 0", E.n, label)
            report.violations.append((label, image))
    return report


@dataclass
class StratumReport:
    n: int
    ideal_violations: list[ElementLabel] = field(default_factory=list)
    projection_violations: list[ElementLabel] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.ideal_violations and not self.projection_violations


def in_low_ideal(n: int, poly: Polynomial) -> bool:
    """상수항을 뺀 모든 항이 x_0..x_[n/2] 중 하나를 포함하는지"""
    bound = n // 2
    return all(
        any(mono[i] for i in range(bound + 1))
        for mono in poly.terms if any(mono)
    )


def check_stratum_properties(E: SeparatingSet) -> StratumReport:
    """(i) 양의 차수 원소는 (x_0..x_[n/2]) 에 속함 (ii) π_{n-[n/2]-1,n}(e) 는 상수"""
    n = E.n
    report = StratumReport(n)
    target = n - n // 2 - 1
    for label, poly in E:
        if not in_low_ideal(n, poly):
            report.ideal_violations.append(label)
        if not project(target, n, poly).is_constant():
            report.projection_violations.append(label)
    if not report.ok:
        logger.warning("층 성질 위반: ideal=%s, projection=%s",
                       [str(x) for x in report.ideal_violations],
                       [str(x) for x in report.projection_violations])
    return report


def element_degree(label: ElementLabel) -> int:
    """
    전개 없이 정한 원소의 차수. f_0 = x_0 은 1, f_m (m ≥ 1) 은 2, w 는 3.
    ε_{s_m}(x_j) 의 각 항 D^k(x_j)·s_m^k·f_m^{j-k} 는 차수가 1 + j·deg s_m 으로 같다.
    """
    if label.kind is ElementKind.F:
        return 1 if label.m == 0 else 2
    if label.kind is ElementKind.EPS:
        return 1 + label.j * (1 if label.m == 0 else 2)
    return 3


@dataclass
class DegreeReport:
    n: int
    max_degree: int
    bound: int
    # 전개 다항식과 비교했을 때 차수가 다른 원소
    mismatches: list[ElementLabel] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.max_degree <= self.bound and not self.mismatches


def check_degree_bound(n: int, E: Optional[SeparatingSet] = None) -> DegreeReport:
    """
    나열된 라벨로 최대 차수 ≤ 2n+1 을 확인한다 (n ≤ 20 에서도 전개 불필요).
    E 를 주면 각 원소의 실제 차수가 element_degree 와 같은지도 본다.
    """
    labels = element_labels(n)
    report = DegreeReport(n, max(element_degree(label) for label in labels), 2 * n + 1)
    if E is not None:
        if E.n != n:
            raise ValueError(f"E 의 n({E.n}) 과 검사할 n({n}) 이 다릅니다.")
        report.mismatches = [label for label, poly in E if total_degree(poly) != element_degree(label)]
        if report.mismatches:
            logger.warning("차수 불일치: %s", [str(x) for x in report.mismatches])
    return report


def check_slice_identities(n: int) -> list[int]:
    """D_n s_m ≠ f_m 인 m 목록 (비어 있어야 함)"""
    return [m for m in range((n - 1) // 2 + 1) if derive(W, n, build_s(n, m)) != build_f(n, m)]


@dataclass
class MiddleProjectionReport:
    n: int
    not_in_x0: list[ElementLabel] = field(default_factory=list)
    odd_powers: list[ElementLabel] = field(default_factory=list)
    w_image_ok: Optional[bool] = None

    @property
    def ok(self) -> bool:
        return not self.not_in_x0 and not self.odd_powers and self.w_image_ok is not False


def check_middle_projection(E: SeparatingSet) -> MiddleProjectionReport:
    """
    n = 2m 일 때 π_{m,2m}(e) ∈ k[x_0]. m 이 홀수면 x_0 의 짝수 거듭제곱만,
    m 이 짝수면 π(w) = x_0³. n 이 홀수면 검사할 것이 없다.
    """
    n = E.n
    report = MiddleProjectionReport(n)
    if n % 2:
        return report
    m = n // 2
    for label, poly in E:
        image = project(m, n, poly)
        if image.variables() - {0}:
            report.not_in_x0.append(label)
        elif m % 2 and any(mono[0] % 2 for mono in image.terms):
            report.odd_powers.append(label)
        if label.kind is ElementKind.W:
            report.w_image_ok = image == RingDescriptor(m).x(0) ** 3
    return report
