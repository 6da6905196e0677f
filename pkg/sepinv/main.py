"""분리 불변식 E_n 생성·검증 명령줄 도구"""
import argparse
import logging
import os
import sys
from typing import Any, Optional, Sequence

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from sepinv.algebra import RationalPoint
from sepinv.codec import dumps, format_fraction, format_pretty, parse_point, point_to_json, to_json
from sepinv.oracle import kernel_basis
from sepinv.separating import (
    REFERENCE_SIZES,
    check_degree_bound,
    check_middle_projection,
    check_slice_identities,
    check_stratum_properties,
    element_labels,
    expected_size,
    get_separating_set,
    verify_kernel_membership,
)
from sepinv.separation import PointPair, cross_validate, decide_separated, same_orbit
from sepinv.transvectants import explore
from sepinv.wz import WzMode, run_checks

logger = logging.getLogger("sepinv.main")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


# ---------- 공통 검증 함수 ----------

def _validate_n(v: int) -> int:
    """n 검증"""
    if v < 1:
        raise ValueError("n 은 1 이상이어야 합니다.")
    return v


def _validate_point(v: Any) -> RationalPoint:
    """점 검증 (JSON 배열, 정수 또는 'p/q' 문자열)"""
    return parse_point(v)


# ---------- 요청 모델 ----------

class NRequest(BaseModel):
    n: int

    @field_validator("n")
    @classmethod
    def validate_n(cls, v: int) -> int:
        return _validate_n(v)


class PointPairRequest(NRequest):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    v: RationalPoint
    w: RationalPoint

    @field_validator("v", "w", mode="before")
    @classmethod
    def validate_point(cls, v: Any) -> RationalPoint:
        return _validate_point(v)

    @model_validator(mode="after")
    def validate_lengths(self) -> "PointPairRequest":
        for name, point in (("v", self.v), ("w", self.w)):
            if len(point) != self.n + 1:
                raise ValueError(f"{name} 의 길이는 n+1 = {self.n + 1} 이어야 합니다: {len(point)}")
        return self


class WzRequest(BaseModel):
    p: int
    mode: WzMode = WzMode.ALL

    @field_validator("p")
    @classmethod
    def validate_p(cls, v: int) -> int:
        if v < 1:
            raise ValueError("p 는 1 이상이어야 합니다.")
        return v


class KernelRequest(NRequest):
    d: int
    dump: Optional[str] = None

    @field_validator("d")
    @classmethod
    def validate_d(cls, v: int) -> int:
        if v < 0:
            raise ValueError("d 는 0 이상이어야 합니다.")
        return v


class TableRequest(BaseModel):
    max: int

    @field_validator("max")
    @classmethod
    def validate_max(cls, v: int) -> int:
        if v < 4:
            raise ValueError("--max 는 4 이상이어야 합니다.")
        return v


class ValidateRequest(NRequest):
    dmax: Optional[int] = None
    trials: int = 100
    seed: int = 0

    @field_validator("dmax")
    @classmethod
    def validate_dmax(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 1:
            raise ValueError("dmax 는 1 이상이어야 합니다.")
        return v

    @field_validator("trials")
    @classmethod
    def validate_trials(cls, v: int) -> int:
        if v < 1:
            raise ValueError("trials 는 1 이상이어야 합니다.")
        return v


class ExploreRequest(NRequest):
    m: int
    j: int

    @model_validator(mode="after")
    def validate_indices(self) -> "ExploreRequest":
        if not 0 <= self.m <= (self.n - 1) // 2:
            raise ValueError(f"m 은 0 ≤ m ≤ [(n-1)/2] = {(self.n - 1) // 2} 이어야 합니다.")
        if not 1 <= self.j <= self.n:
            raise ValueError("j 는 1 ≤ j ≤ n 이어야 합니다.")
        return self


# ---------- 출력 ----------

def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _pair_json(pair: PointPair) -> dict:
    return {"v": point_to_json(pair.v), "w": point_to_json(pair.w), "strategy": pair.strategy.value}


# ---------- 명령 ----------

def cmd_gen(args: argparse.Namespace) -> int:
    req = NRequest(n=args.n)
    E = get_separating_set(req.n)
    if args.pretty:
        text = "\n".join(f"{label}: {format_pretty(poly)}" for label, poly in E)
    else:
        text = dumps([{"label": str(label), "poly": to_json(poly)} for label, poly in E])
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    req = NRequest(n=args.n)
    E = get_separating_set(req.n)
    kernel = verify_kernel_membership(E)
    stratum = check_stratum_properties(E)
    degree = check_degree_bound(req.n, E)
    slices = check_slice_identities(req.n)
    middle = check_middle_projection(E)
    checks = {
        "kernel": {"ok": kernel.ok, "checked": kernel.checked,
                   "violations": [str(label) for label, _ in kernel.violations]},
        "stratum": {"ok": stratum.ok,
                    "ideal_violations": [str(x) for x in stratum.ideal_violations],
                    "projection_violations": [str(x) for x in stratum.projection_violations]},
        "degree": {"ok": degree.ok, "max_degree": degree.max_degree, "bound": degree.bound,
                   "mismatches": [str(x) for x in degree.mismatches]},
        "slices": {"ok": not slices, "violations": slices},
        "middle_projection": {"ok": middle.ok,
                              "not_in_x0": [str(x) for x in middle.not_in_x0],
                              "odd_powers": [str(x) for x in middle.odd_powers],
                              "w_image_ok": middle.w_image_ok},
    }
    ok = all(c["ok"] for c in checks.values())
    if args.pretty:
        text = "\n".join(f"{name}: {'PASS' if c['ok'] else 'FAIL'}" for name, c in checks.items())
    else:
        text = dumps({"n": req.n, "ok": ok, "checks": checks})
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_separate(args: argparse.Namespace) -> int:
    req = PointPairRequest(n=args.n, v=args.v, w=args.w)
    verdict = decide_separated(req.n, req.v, req.w)
    witness = verdict.witness
    if args.pretty:
        if witness is None:
            text = "not separated"
        else:
            text = (f"separated by {witness.label}: "
                    f"{format_fraction(witness.value_v)} vs {format_fraction(witness.value_w)}")
    else:
        text = dumps({
            "separated": verdict.separated,
            "witness": None if witness is None else {
                "label": str(witness.label),
                "value_v": format_fraction(witness.value_v),
                "value_w": format_fraction(witness.value_w),
            },
        })
    _emit(text, args.out)
    return EXIT_OK


def cmd_orbit(args: argparse.Namespace) -> int:
    req = PointPairRequest(n=args.n, v=args.v, w=args.w)
    verdict = same_orbit(req.n, req.v, req.w)
    translation = None if verdict.translation is None else format_fraction(verdict.translation)
    if args.pretty:
        text = f"same orbit (a = {translation})" if verdict.same_orbit else "different orbits"
    else:
        text = dumps({"same_orbit": verdict.same_orbit, "translation": translation})
    _emit(text, args.out)
    return EXIT_OK


def cmd_wz(args: argparse.Namespace) -> int:
    req = WzRequest(p=args.p, mode=args.mode)
    report = run_checks(req.p, req.mode)
    residuals = {name: format_fraction(r) for name, r in report.residuals.items()}
    if args.pretty:
        text = "\n".join(f"{name}: residual {r}" for name, r in residuals.items())
    else:
        text = dumps({"p": req.p, "mode": req.mode.value, "ok": report.ok, "residuals": residuals})
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_kernel(args: argparse.Namespace) -> int:
    req = KernelRequest(n=args.n, d=args.d, dump=args.dump)
    basis = kernel_basis(req.n, req.d)
    payload = dumps({"n": req.n, "d": req.d, "dimension": basis.dimension,
                     "basis": [to_json(b) for b in basis.basis]})
    if req.dump:
        _emit(payload, req.dump)
    if args.pretty:
        text = "\n".join([f"dim = {basis.dimension}"] + [format_pretty(b) for b in basis.basis])
    else:
        text = payload
    _emit(text, args.out)
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    req = TableRequest(max=args.max)
    rows = []
    ok = True
    for n in range(4, req.max + 1):
        size = len(element_labels(n))
        degree = check_degree_bound(n)
        if size != expected_size(n) or not degree.ok:
            ok = False
        reference = REFERENCE_SIZES.get(n)
        if reference is None:
            status = "unreferenced"
        elif reference == size:
            status = "match"
        else:
            status = "mismatch"
            ok = False
        rows.append({"n": n, "size": size, "reference": reference, "status": status,
                     "max_degree": degree.max_degree, "degree_bound": degree.bound})
    if args.pretty:
        text = "\n".join(
            f"{r['n']:>3} {r['size']:>5} {r['max_degree']:>3}/{r['degree_bound']:<3} {r['status']}" for r in rows
        )
    else:
        text = dumps({"ok": ok, "rows": rows})
    _emit(text, args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_validate(args: argparse.Namespace) -> int:
    req = ValidateRequest(n=args.n, dmax=args.dmax, trials=args.trials, seed=args.seed)
    report = cross_validate(req.n, req.dmax, req.trials, req.seed)
    summary = {
        "n": req.n,
        "d_max": report.d_max,
        "ok": report.ok,
        "trials": {s.value: c for s, c in report.trials.items()},
        "separated": {s.value: c for s, c in report.separated.items()},
        "soundness": [_pair_json(p) for p in report.soundness],
        "completeness": [_pair_json(p) for p in report.completeness],
        "oracle_consistency": [_pair_json(p) for p in report.oracle_consistency],
        "orbit": [_pair_json(p) for p in report.orbit],
    }
    if args.pretty:
        text = "\n".join(
            [f"n={req.n} d_max={report.d_max}: {'PASS' if report.ok else 'FAIL'}"]
            + [f"  {s}: {c} trials, {summary['separated'][s]} separated" for s, c in summary["trials"].items()]
        )
    else:
        text = dumps(summary)
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_explore(args: argparse.Namespace) -> int:
    req = ExploreRequest(n=args.n, m=args.m, j=args.j)
    result = explore(req.n, req.m, req.j)
    ratio = None if result.ratio is None else format_fraction(result.ratio)
    if args.pretty:
        relation = f"transvectant = {ratio} * epsilon" if ratio is not None else "no scalar relation"
        text = "\n".join([
            f"epsilon: {format_pretty(result.epsilon)}",
            f"transvectant: {format_pretty(result.transvectant)}",
            relation,
        ])
    else:
        text = dumps({
            "n": req.n, "m": req.m, "j": req.j,
            "epsilon": to_json(result.epsilon),
            "transvectant": to_json(result.transvectant),
            "ratio": ratio,
            "relation": "scalar multiple" if ratio is not None else "no scalar relation",
        })
    _emit(text, args.out)
    return EXIT_OK


# ---------- 인자 파서 ----------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="사람이 읽는 형식으로 출력")
    common.add_argument("--out", help="출력 파일 (기본: 표준 출력)")

    parser = argparse.ArgumentParser(prog="sepinv", description="Weitzenböck 불변식의 분리 집합 E_n 도구")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="E_n 생성")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="E_n 의 기호 검사")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    for name, func, text in (("separate", cmd_separate, "두 점의 분리 판정"),
                             ("orbit", cmd_orbit, "두 점의 궤도 동치 판정")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--v", required=True, help='JSON 배열, 예: "[1, \\"1/2\\", 0]"')
        p.add_argument("--w", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("wz", parents=[common], help="S(p) 닫힌 식과 WZ 증명서 검증")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in WzMode], default=WzMode.ALL.value)
    p.set_defaults(func=cmd_wz)

    p = sub.add_parser("kernel", parents=[common], help="ker D_n 의 차수 d 기저")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--dump", help="기저 JSON 을 저장할 파일")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("table", parents=[common], help="|E_n| 와 최대 차수 표, 기준값 비교")
    p.add_argument("--max", type=int, default=20)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("validate", parents=[common], help="오라클과 교차 검증")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dmax", type=int, default=None)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("explore", parents=[common], help="ε_{s_m}(x_j) 와 [x_0, f_m^j]^(j) 비교")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.set_defaults(func=cmd_explore)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=os.getenv("SEPINV_LOG_LEVEL", "WARNING").upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        print(f"입력 오류: {messages}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as e:
        logger.debug("명령 실패", exc_info=True)
        print(f"오류: {e}", file=sys.stderr)
        return EXIT_USAGE
