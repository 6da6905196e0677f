"""다항식·점의 JSON 형식 (CLI 와 골든 파일의 계약) 및 사람이 읽는 표기"""
import json
import re
from fractions import Fraction
from typing import Any, Union

from pydantic import BaseModel, field_validator, model_validator

from sepinv.algebra import Polynomial, RationalPoint, RingDescriptor

_FRACTION_RE = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_fraction(value: Union[str, int, Fraction]) -> Fraction:
    """'p/q' 또는 정수 문자열/정수만 허용 (부동소수점 금지)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"유리수가 아닙니다: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"유리수는 'p/q' 문자열 또는 정수여야 합니다: {value!r}")
    text = value.strip()
    if not _FRACTION_RE.match(text):
        raise ValueError(f"올바른 분수 형식이 아닙니다: {value!r} ('p/q' 또는 정수)")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ValueError(f"분모가 0 입니다: {value!r}")


def format_fraction(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def parse_point(value: Any) -> RationalPoint:
    """JSON 배열(문자열 또는 리스트)을 RationalPoint 로"""
    if isinstance(value, RationalPoint):
        return value
    if isinstance(value, str):
        try:
            value = json.loads(value)
        except json.JSONDecodeError as e:
            raise ValueError(f"점은 JSON 배열이어야 합니다: {e}")
    if not isinstance(value, (list, tuple)) or not value:
        raise ValueError("점은 비어 있지 않은 JSON 배열이어야 합니다.")
    return RationalPoint.of(parse_fraction(c) for c in value)


def point_to_json(v: RationalPoint) -> list[str]:
    return [format_fraction(c) for c in v]


# ---------- 다항식 JSON 모델 ----------

class TermModel(BaseModel):
    coeff: str
    exps: list[int]

    @field_validator("coeff")
    @classmethod
    def validate_coeff(cls, v: str) -> str:
        if parse_fraction(v) == 0:
            raise ValueError("계수 0 인 항은 저장하지 않습니다.")
        return v

    @field_validator("exps")
    @classmethod
    def validate_exps(cls, v: list[int]) -> list[int]:
        if any(e < 0 for e in v):
            raise ValueError("지수는 0 이상이어야 합니다.")
        return v


class PolynomialModel(BaseModel):
    n: int
    extended: bool = False
    terms: list[TermModel]

    @field_validator("n")
    @classmethod
    def validate_n(cls, v: int) -> int:
        if v < 0:
            raise ValueError("n 은 0 이상이어야 합니다.")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "PolynomialModel":
        nvars = RingDescriptor(self.n, self.extended).nvars
        for term in self.terms:
            if len(term.exps) != nvars:
                raise ValueError(f"지수 벡터 길이가 {nvars} 가 아닙니다: {term.exps}")
        return self


def to_model(f: Polynomial) -> PolynomialModel:
    return PolynomialModel(
        n=f.ring.n,
        extended=f.ring.extended,
        terms=[TermModel(coeff=format_fraction(c), exps=list(m)) for m, c in f.sorted_terms()],
    )


def to_json(f: Polynomial) -> dict:
    return to_model(f).model_dump()


def from_json(doc: Union[dict, str]) -> Polynomial:
    model = PolynomialModel.model_validate_json(doc) if isinstance(doc, str) else PolynomialModel.model_validate(doc)
    ring = RingDescriptor(model.n, model.extended)
    terms: dict[tuple[int, ...], Fraction] = {}
    for term in model.terms:
        key = tuple(term.exps)
        if key in terms:
            raise ValueError(f"중복된 단항식입니다: {term.exps}")
        terms[key] = parse_fraction(term.coeff)
    return Polynomial(ring, terms)


def dumps(payload: Any) -> str:
    """정렬·공백이 고정된 JSON 문자열 (실행마다 바이트 단위로 동일)"""
    return json.dumps(payload, ensure_ascii=False, indent=2)


# ---------- 사람이 읽는 표기 ----------

def _format_monomial(ring: RingDescriptor, mono: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(mono):
        if e == 1:
            parts.append(ring.var_name(i))
        elif e > 1:
            parts.append(f"{ring.var_name(i)}^{e}")
    return "*".join(parts)


def format_pretty(f: Polynomial) -> str:
    """예: 'x0*x2 - 1/2*x1^2'"""
    if not f:
        return "0"
    out = []
    for i, (mono, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = _format_monomial(f.ring, mono)
        if not body:
            text = str(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{mag}*{body}"
        if i == 0:
            out.append(f"-{text}" if sign == "-" else text)
        else:
            out.append(f"{sign} {text}")
    return " ".join(out)
