"""E_n 으로 점 분리 판정, 궤도 동치 판정, 오라클과의 교차 검증"""
import logging
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional

from sepinv.algebra import RationalPoint, poly_eval, total_degree
from sepinv.derivations import flow_point
from sepinv.oracle import default_dmax, oracle_equivalent
from sepinv.separating import ElementLabel, get_separating_set

logger = logging.getLogger("sepinv.separation")

# 좌표와 흐름 매개변수를 [-R, R] 정수에서 뽑는다
SAMPLE_RANGE = int(os.getenv("SEPINV_SAMPLE_RANGE", "9"))
# SIGN_FLIP 쌍 하나당 시도할 후보 수
MAX_REJECTIONS = int(os.getenv("SEPINV_MAX_REJECTIONS", "64"))


def _require_length(n: int, *points: RationalPoint) -> None:
    for p in points:
        if len(p) != n + 1:
            raise ValueError(f"점의 길이는 {n + 1} 이어야 합니다: {len(p)}")


# ---------- 분리 판정 ----------

@dataclass(frozen=True)
class Witness:
    label: ElementLabel
    value_v: Fraction
    value_w: Fraction


@dataclass(frozen=True)
class SeparationVerdict:
    separated: bool
    witness: Optional[Witness] = None

    def __post_init__(self) -> None:
        if self.separated != (self.witness is not None):
            raise ValueError("separated 는 witness 가 있을 때만 True 입니다.")
        if self.witness is not None and self.witness.value_v == self.witness.value_w:
            raise ValueError("witness 의 두 값이 같습니다.")


def decide_separated(n: int, v: RationalPoint, w: RationalPoint) -> SeparationVerdict:
    """E_n 의 원소를 나열 순서대로 평가해 처음으로 값이 다른 원소를 증인으로 돌려준다"""
    _require_length(n, v, w)
    if v == w:
        return SeparationVerdict(False)
    for label, element in get_separating_set(n):
        a, b = poly_eval(element, v), poly_eval(element, w)
        if a != b:
            return SeparationVerdict(True, Witness(label, a, b))
    return SeparationVerdict(False)


# ---------- 궤도 판정 ----------

@dataclass(frozen=True)
class OrbitVerdict:
    same_orbit: bool
    translation: Optional[Fraction] = None


def same_orbit(n: int, v: RationalPoint, w: RationalPoint) -> OrbitVerdict:
    """
    처음으로 0 이 아닌 좌표 i 는 흐름에 대해 불변이고, 다음 좌표가
    v_{i+1} + a·v_i 로 바뀌므로 후보 a 는 하나뿐이다.
    """
    _require_length(n, v, w)
    nonzero = [i for i in range(n + 1) if v[i] or w[i]]
    if not nonzero:
        return OrbitVerdict(True, Fraction(0))
    i = nonzero[0]
    if v[i] != w[i]:
        return OrbitVerdict(False)
    if i == n:
        return OrbitVerdict(True, Fraction(0)) if v == w else OrbitVerdict(False)
    a = (w[i + 1] - v[i + 1]) / v[i]
    if flow_point(n, a, v) != w:
        return OrbitVerdict(False)
    return OrbitVerdict(True, a)


# ---------- 쌍 생성 ----------

class PairStrategy(str, Enum):
    ORBIT_TRANSLATE = "ORBIT_TRANSLATE"
    SIGN_FLIP = "SIGN_FLIP"
    NULL_CONE = "NULL_CONE"


@dataclass(frozen=True)
class PointPair:
    v: RationalPoint
    w: RationalPoint
    strategy: PairStrategy
    equivalent_by_construction: bool = True


def _rand(rng: random.Random) -> int:
    return rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)


def _rand_nonzero(rng: random.Random) -> int:
    value = 0
    while not value:
        value = _rand(rng)
    return value


def _point(coords: list[int]) -> RationalPoint:
    return RationalPoint.of(Fraction(c) for c in coords)


def _values_agree(n: int, v: RationalPoint, w: RationalPoint) -> bool:
    return all(poly_eval(e, v) == poly_eval(e, w) for _, e in get_separating_set(n))


def _orbit_translate(n: int, rng: random.Random) -> PointPair:
    v = _point([_rand_nonzero(rng)] + [_rand(rng) for _ in range(n)])
    return PointPair(v, flow_point(n, _rand(rng), v), PairStrategy.ORBIT_TRANSLATE)


def _null_cone(n: int, rng: random.Random) -> PointPair:
    depth = n // 2 + 1

    def sample() -> RationalPoint:
        return _point([0] * depth + [_rand(rng) for _ in range(n + 1 - depth)])

    return PointPair(sample(), sample(), PairStrategy.NULL_CONE)


def _sign_flip_depth(n: int, rng: random.Random) -> int:
    """
    n = 2m' (m' 홀수) 이면 m = m' - 1. 이 층에서 모든 원소의 값은 v_{m'} 의 짝수 거듭제곱으로만
    정해지므로 부호만 바꾼 점이 항상 같은 값을 갖는다. 그 밖의 n 은 임의의 m.
    """
    if n % 4 == 2:
        return n // 2 - 1
    return rng.randint(0, n // 2 - 1)


def _sign_flip(n: int, rng: random.Random) -> PointPair:
    m = _sign_flip_depth(n, rng)
    lead = _rand_nonzero(rng)
    tail = [_rand(rng) for _ in range(n - m - 1)]
    v = _point([0] * (m + 1) + [lead] + tail)

    def candidate(attempt: int) -> list[int]:
        if attempt == 0:
            return tail
        if attempt == 1:
            return [(-1) ** (offset + 1) * c for offset, c in enumerate(tail)]
        return [_rand(rng) for _ in tail]

    w = v
    for attempt in range(MAX_REJECTIONS):
        w = _point([0] * (m + 1) + [-lead] + candidate(attempt))
        if _values_agree(n, v, w):
            return PointPair(v, w, PairStrategy.SIGN_FLIP)
    logger.debug("SIGN_FLIP 후보 %d개 소진 (n=%d, m=%d): %s", MAX_REJECTIONS, n, m, list(map(str, v)))
    return PointPair(v, w, PairStrategy.SIGN_FLIP, equivalent_by_construction=False)


def generate_equivalent_pairs(n: int, strategy: PairStrategy, count: int, seed: int) -> list[PointPair]:
    try:
        strategy = PairStrategy(strategy)
    except ValueError:
        raise ValueError(f"알 수 없는 전략입니다: {strategy!r} ({', '.join(s.value for s in PairStrategy)})")
    if n < 1:
        raise ValueError(f"n 은 1 이상이어야 합니다: {n}")
    if count < 0:
        raise ValueError(f"count 는 0 이상이어야 합니다: {count}")
    if strategy is PairStrategy.SIGN_FLIP and n < 2:
        raise ValueError("SIGN_FLIP 전략은 n ≥ 2 에서만 쓸 수 있습니다.")
    build = {
        PairStrategy.ORBIT_TRANSLATE: _orbit_translate,
        PairStrategy.SIGN_FLIP: _sign_flip,
        PairStrategy.NULL_CONE: _null_cone,
    }[strategy]
    rng = random.Random(seed)
    return [build(n, rng) for _ in range(count)]


# ---------- 교차 검증 ----------

@dataclass
class ValidationReport:
    n: int
    d_max: int
    trials: dict[PairStrategy, int] = field(default_factory=dict)
    separated: dict[PairStrategy, int] = field(default_factory=dict)
    # E_n 은 같다고 했는데 오라클은 분리
    soundness: list[PointPair] = field(default_factory=list)
    # 오라클이 분리했는데 E_n 이 증인을 못 찾음
    completeness: list[PointPair] = field(default_factory=list)
    # 증인의 차수가 d_max 이하인데 오라클은 동치
    oracle_consistency: list[PointPair] = field(default_factory=list)
    # 궤도 이동 쌍인데 same_orbit 이 거부
    orbit: list[PointPair] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.soundness or self.completeness or self.oracle_consistency or self.orbit)


def cross_validate(n: int, d_max: Optional[int], trials: int, seed: int) -> ValidationReport:
    if d_max is None:
        d_max = default_dmax(n)
    report = ValidationReport(n, d_max)
    E = get_separating_set(n)
    strategies = [s for s in PairStrategy if n >= 2 or s is not PairStrategy.SIGN_FLIP]
    for offset, strategy in enumerate(strategies):
        pairs = generate_equivalent_pairs(n, strategy, trials, seed + offset)
        report.trials[strategy] = len(pairs)
        report.separated[strategy] = 0
        for pair in pairs:
            verdict = decide_separated(n, pair.v, pair.w)
            equivalent = oracle_equivalent(n, d_max, pair.v, pair.w)
            if verdict.separated:
                report.separated[strategy] += 1
                if equivalent and total_degree(E.get(verdict.witness.label)) <= d_max:
                    report.oracle_consistency.append(pair)
            elif not equivalent:
                report.soundness.append(pair)
                report.completeness.append(pair)
            if strategy is PairStrategy.ORBIT_TRANSLATE and not same_orbit(n, pair.v, pair.w).same_orbit:
                report.orbit.append(pair)
    if report.ok:
        logger.info("교차 검증 통과: n=%d, d_max=%d, 시행 %s", n, d_max, {s.value: c for s, c in report.trials.items()})
    else:
        logger.warning(
            "교차 검증 위반: soundness=%d, completeness=%d, oracle=%d, orbit=%d",
            len(report.soundness), len(report.completeness), len(report.oracle_consistency), len(report.orbit),
        )
    return report
