"""
독립 검증용 오라클: 차수 d 동차 성분에서 D_n 의 핵을 정확한 영공간 계산으로 구한다.
E_n 구성에 쓰인 공식은 하나도 사용하지 않는다.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from sepinv.algebra import Monomial, Polynomial, RationalPoint, RingDescriptor, monomial_sort_key, poly_eval
from sepinv.cache import BoundedCache
from sepinv.derivations import DerivationKind, derive

logger = logging.getLogger("sepinv.oracle")


@dataclass(frozen=True)
class GradedComponent:
    n: int
    d: int
    monomials: tuple[Monomial, ...]

    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.monomials)}


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def graded_component(n: int, d: int) -> GradedComponent:
    """x_0..x_n 의 차수 d 단항식 전부 (직렬화 순서)"""
    if n < 0 or d < 0:
        raise ValueError(f"n, d 는 0 이상이어야 합니다: n={n}, d={d}")
    monomials = tuple(sorted(_compositions(d, n + 1), key=monomial_sort_key))
    return GradedComponent(n, d, monomials)


def derivation_matrix(n: int, d: int) -> DomainMatrix:
    """차수 d 성분 위의 D_n 행렬 (열: 원본 단항식, 행: 상 단항식), 정수 성분"""
    if n < 1:
        raise ValueError(f"n 은 1 이상이어야 합니다: {n}")
    component = graded_component(n, d)
    index = component.index()
    size = len(component.monomials)
    rows = [[0] * size for _ in range(size)]
    for col, mono in enumerate(component.monomials):
        for k in range(1, n + 1):
            e = mono[k]
            if not e:
                continue
            target = list(mono)
            target[k] -= 1
            target[k - 1] += 1
            rows[index[tuple(target)]][col] += e
    return DomainMatrix([[ZZ(c) for c in row] for row in rows], (size, size), ZZ)


@dataclass(frozen=True)
class KernelBasis:
    n: int
    d: int
    basis: tuple[Polynomial, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def _compute_kernel_basis(n: int, d: int) -> KernelBasis:
    component = graded_component(n, d)
    matrix = derivation_matrix(n, d)
    # 분수 없는 기약 행사다리꼴: 피벗 성분은 모두 den
    rref, den, pivots = matrix.rref_den()
    den = int(den)
    entries = [[int(c) for c in row] for row in rref.to_list()]
    ring = RingDescriptor(n)
    basis = []
    pivot_set = set(pivots)
    for free in (j for j in range(len(component.monomials)) if j not in pivot_set):
        vector = {component.monomials[free]: Fraction(den)}
        for row, pivot in enumerate(pivots):
            if entries[row][free]:
                vector[component.monomials[pivot]] = Fraction(-entries[row][free])
        poly = Polynomial(ring, vector)
        _, lead = poly.lead_term()
        poly = poly / lead
        if derive(DerivationKind.WEITZENBOECK, n, poly):
            raise ArithmeticError(f"영공간 벡터가 D_{n} 의 핵에 속하지 않습니다 (d={d}).")
        basis.append(poly)
    logger.info("ker D_%d 차수 %d 성분: 차원 %d (단항식 %d개)", n, d, len(basis), len(component.monomials))
    return KernelBasis(n, d, tuple(basis))


_basis_cache: BoundedCache[tuple[int, int], KernelBasis] = BoundedCache("kernel-basis")


def kernel_basis(n: int, d: int) -> KernelBasis:
    if n < 1 or d < 0:
        raise ValueError(f"n ≥ 1, d ≥ 0 이어야 합니다: n={n}, d={d}")
    return _basis_cache.get_or_build((n, d), lambda: _compute_kernel_basis(n, d))


def in_span(basis: KernelBasis, f: Polynomial) -> bool:
    """f 가 basis 의 유리수 일차결합인지 (계수 행렬 계수(rank) 비교)"""
    if f.ring != RingDescriptor(basis.n):
        raise ValueError(f"R_{basis.n} 의 다항식이 아닙니다.")
    if not f:
        return True
    component = graded_component(basis.n, basis.d)
    index = component.index()
    if any(m not in index for m in f.terms):
        return False
    columns = list(basis.basis) + [f]
    rows = [[QQ(0)] * len(columns) for _ in component.monomials]
    for col, poly in enumerate(columns):
        for mono, c in poly.terms.items():
            rows[index[mono]][col] = QQ(c.numerator, c.denominator)
    matrix = DomainMatrix(rows, (len(rows), len(columns)), QQ)
    return matrix.rank() == basis.dimension


def default_dmax(n: int) -> int:
    if n < 1:
        raise ValueError(f"n 은 1 이상이어야 합니다: {n}")
    if n <= 3:
        return 6
    return 5 if n == 4 else 4


def oracle_equivalent(n: int, d_max: int, v: RationalPoint, w: RationalPoint) -> bool:
    """차수 1..d_max 의 모든 핵 기저 원소가 v, w 에서 같은 값을 가지면 True"""
    if d_max < 1:
        raise ValueError(f"d_max 는 1 이상이어야 합니다: {d_max}")
    if len(v) != n + 1 or len(w) != n + 1:
        raise ValueError(f"점의 길이는 {n + 1} 이어야 합니다.")
    if v == w:
        return True
    return find_separating_invariant(n, d_max, v, w) is None


def find_separating_invariant(n: int, d_max: int, v: RationalPoint, w: RationalPoint) -> Optional[Polynomial]:
    for d in range(1, d_max + 1):
        for b in kernel_basis(n, d).basis:
            if poly_eval(b, v) != poly_eval(b, w):
                return b
    return None
