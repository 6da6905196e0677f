"""
교대 이항합 S(p) = Σ_k (-1)^k C(2p,k) C(4p-k,2p) C(2p+k,k) 의 닫힌 식,
두 항 점화식, WZ 증명서 G(p,k) 의 정확한 검증
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb, factorial

logger = logging.getLogger("sepinv.wz")


def _require_p(p: int, minimum: int = 1) -> None:
    if p < minimum:
        raise ValueError(f"p 는 {minimum} 이상이어야 합니다: {p}")


def summand_F(p: int, k: int) -> Fraction:
    """F(p,k) = (-1)^k C(2p,k) C(4p-k,2p) C(2p+k,k), 0 ≤ k ≤ 2p 밖에서는 0"""
    _require_p(p, 0)
    if k < 0 or k > 2 * p:
        return Fraction(0)
    return Fraction((-1) ** k * comb(2 * p, k) * comb(4 * p - k, 2 * p) * comb(2 * p + k, k))


def partial_sum_S(p: int) -> Fraction:
    _require_p(p, 0)
    return sum((summand_F(p, k) for k in range(2 * p + 1)), Fraction(0))


def closed_form(p: int) -> Fraction:
    """(-1)^p (3p)!/(p!)³"""
    _require_p(p, 0)
    num, den = factorial(3 * p), factorial(p) ** 3
    if num % den:
        raise ArithmeticError(f"(p!)³ 이 (3p)! 를 나누지 않습니다: p={p}")
    return Fraction((-1) ** p * (num // den))


def _Q(p: int, k: int) -> int:
    return (
        180 - 184 * k + 1036 * p + 59 * k ** 2 + 2192 * p ** 2 - 790 * p * k
        - 1116 * p ** 2 * k + 168 * p * k ** 2 + 2024 * p ** 3 - 8 * k ** 3
        + 688 * p ** 4 + k ** 4 - 520 * p ** 3 * k + 120 * p ** 2 * k ** 2
        - 10 * p * k ** 3
    )


def _R(p: int, k: int) -> int:
    return (2 * p + 1) * (-2 * p - 2 + k) ** 2 * (-2 * p - 1 + k) ** 2


def certificate_G(p: int, k: int) -> Fraction:
    """G(p,k) = ½k²·Q(p,k)·(-4p+k-1)·F(p,k)/R(p,k),  0 ≤ k ≤ 2p"""
    _require_p(p)
    if k < 0 or k > 2 * p:
        raise ValueError(f"G(p,k) 는 0 ≤ k ≤ 2p 에서만 사용합니다: p={p}, k={k}")
    return Fraction(k * k * _Q(p, k) * (-4 * p + k - 1), 2 * _R(p, k)) * summand_F(p, k)


def _lhs_coeffs(p: int) -> tuple[int, int]:
    return 6 * (3 * p + 2) * (3 * p + 1), 2 * (p + 1) ** 2


def pair_residuals(p: int) -> list[Fraction]:
    """k = 0..2p-1 에 대한 G(p,k+1) - G(p,k) - [6(3p+2)(3p+1)F(p,k) + 2(p+1)²F(p+1,k)]"""
    _require_p(p)
    a, b = _lhs_coeffs(p)
    return [
        certificate_G(p, k + 1) - certificate_G(p, k) - (a * summand_F(p, k) + b * summand_F(p + 1, k))
        for k in range(2 * p)
    ]


def check_wz_pair(p: int) -> bool:
    return not any(pair_residuals(p))


def recurrence_residual(p: int) -> Fraction:
    """6(3p+2)(3p+1)S(p) + 2(p+1)²S(p+1)"""
    _require_p(p)
    a, b = _lhs_coeffs(p)
    return a * partial_sum_S(p) + b * partial_sum_S(p + 1)


def check_recurrence(p: int) -> bool:
    return recurrence_residual(p) == 0


def boundary_residual(p: int) -> Fraction:
    """
    텔레스코핑 합 G(p,2p) - G(p,0) 에 k = 2p 의 F(p,·) 와
    k = 2p..2p+2 의 F(p+1,·) 를 더한 값에서 점화식 좌변을 뺀 나머지
    """
    _require_p(p)
    a, b = _lhs_coeffs(p)
    telescoped = certificate_G(p, 2 * p) - certificate_G(p, 0)
    remaining = a * summand_F(p, 2 * p) + b * sum(
        (summand_F(p + 1, k) for k in range(2 * p, 2 * p + 3)), Fraction(0)
    )
    return telescoped + remaining - recurrence_residual(p)


def normalized_summand(p: int, k: int) -> Fraction:
    """F(p,k) / ((-1)^p (3p)!/(p!)³)"""
    return summand_F(p, k) / closed_form(p)


def normalized_sum(p: int) -> Fraction:
    return sum((normalized_summand(p, k) for k in range(2 * p + 1)), Fraction(0))


@dataclass(frozen=True)
class WzInstance:
    """고정된 p 에서의 F, S, G 평가기"""
    p: int

    def __post_init__(self) -> None:
        _require_p(self.p)

    def summand(self, k: int) -> Fraction:
        return summand_F(self.p, k)

    def partial_sum(self) -> Fraction:
        return partial_sum_S(self.p)

    def certificate(self, k: int) -> Fraction:
        return certificate_G(self.p, k)


class WzMode(str, Enum):
    SUM = "sum"
    PAIR = "pair"
    RECURRENCE = "recurrence"
    ALL = "all"


@dataclass
class WzReport:
    p: int
    mode: WzMode
    residuals: dict[str, Fraction] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not any(self.residuals.values())


def run_checks(p: int, mode: WzMode = WzMode.ALL) -> WzReport:
    """선택한 검사의 잔차를 모은다. 모든 잔차가 0 이면 통과"""
    _require_p(p)
    mode = WzMode(mode)
    report = WzReport(p, mode)
    if mode in (WzMode.SUM, WzMode.ALL):
        report.residuals["sum"] = partial_sum_S(p) - closed_form(p)
        report.residuals["normalized_sum"] = normalized_sum(p) - 1
    if mode in (WzMode.PAIR, WzMode.ALL):
        # 첫 번째로 어긋나는 k 의 잔차, 없으면 0
        report.residuals["pair"] = next((r for r in pair_residuals(p) if r), Fraction(0))
        report.residuals["boundary"] = boundary_residual(p)
    if mode in (WzMode.RECURRENCE, WzMode.ALL):
        report.residuals["recurrence"] = recurrence_residual(p)
    if not report.ok:
        logger.warning("WZ 검사 실패 (p=%d): %s", p, {k: str(v) for k, v in report.residuals.items() if v})
    return report
