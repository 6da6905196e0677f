"""명령줄 도구 테스트"""
import json

import pytest
from pydantic import ValidationError

from sepinv.codec import from_json
from sepinv.main import (
    EXIT_CHECK_FAILED,
    EXIT_OK,
    EXIT_USAGE,
    ExploreRequest,
    PointPairRequest,
    TableRequest,
    main,
)


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    """sepinv gen"""

    def test_n4(self, capsys):
        """|E_4| = 11"""
        code, out, _ = _run(capsys, "gen", "--n", "4")
        data = json.loads(out)
        assert code == EXIT_OK
        assert len(data) == 11
        assert data[0]["label"] == "F(0)"
        assert data[-1]["label"] == "W"
        assert set(data[0]) == {"label", "poly"}

    def test_n2(self, capsys):
        """|E_2| = 3, 다항식 JSON 복원"""
        code, out, _ = _run(capsys, "gen", "--n", "2")
        data = json.loads(out)
        assert [e["label"] for e in data] == ["F(0)", "F(1)", "EPS(0,2)"]
        assert from_json(data[0]["poly"]).ring.n == 2

    def test_byte_identical(self, capsys):
        """두 번 실행해도 같은 출력"""
        _, first, _ = _run(capsys, "gen", "--n", "3")
        _, second, _ = _run(capsys, "gen", "--n", "3")
        assert first == second

    def test_pretty(self, capsys):
        """라벨: 다항식"""
        _, out, _ = _run(capsys, "gen", "--n", "2", "--pretty")
        assert out.splitlines()[0] == "F(0): x0"

    def test_out_file(self, capsys, tmp_path):
        """--out 파일로 출력"""
        target = tmp_path / "e3.json"
        code, out, _ = _run(capsys, "gen", "--n", "3", "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert len(json.loads(target.read_text(encoding="utf-8"))) == 7

    def test_bad_n(self, capsys):
        """n = 0 은 사용 오류"""
        code, _, err = _run(capsys, "gen", "--n", "0")
        assert code == EXIT_USAGE
        assert "입력 오류" in err

    def test_beyond_build_limit(self, capsys):
        """n = 13 은 전개하지 않고 사용 오류로 끝남"""
        code, out, err = _run(capsys, "gen", "--n", "13")
        assert code == EXIT_USAGE
        assert out == ""
        assert "SEPINV_MAX_BUILD_N" in err


class TestVerifyAndTable:
    """sepinv verify / table"""

    def test_verify_n4(self, capsys):
        """모든 검사 통과"""
        code, out, _ = _run(capsys, "verify", "--n", "4")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["ok"]
        assert set(data["checks"]) == {"kernel", "stratum", "degree", "slices", "middle_projection"}

    def test_table_max4(self, capsys):
        """n = 4 한 줄"""
        code, out, _ = _run(capsys, "table", "--max", "4")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["rows"] == [
            {"n": 4, "size": 11, "reference": 11, "status": "match", "max_degree": 9, "degree_bound": 9},
        ]

    def test_table_default_matches_reference(self, capsys):
        """n = 4..20 전부 match"""
        code, out, _ = _run(capsys, "table")
        rows = json.loads(out)["rows"]
        assert code == EXIT_OK
        assert [r["n"] for r in rows] == list(range(4, 21))
        assert all(r["status"] == "match" for r in rows)
        assert all(r["max_degree"] == 2 * r["n"] + 1 == r["degree_bound"] for r in rows)

    def test_table_beyond_reference(self, capsys):
        """기준값이 없는 n 은 unreferenced, 실패 아님"""
        code, out, _ = _run(capsys, "table", "--max", "25")
        rows = json.loads(out)["rows"]
        assert code == EXIT_OK
        assert rows[-1]["status"] == "unreferenced"
        assert rows[-1]["reference"] is None

    def test_table_too_small(self, capsys):
        """--max < 4 는 사용 오류"""
        code, _, _ = _run(capsys, "table", "--max", "3")
        assert code == EXIT_USAGE


class TestPoints:
    """sepinv separate / orbit"""

    def test_separate_witness(self, capsys):
        """F(1) 이 0 과 1 로 분리"""
        code, out, _ = _run(capsys, "separate", "--n", "2", "--v", "[1,0,0]", "--w", "[1,0,1]")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data == {"separated": True, "witness": {"label": "F(1)", "value_v": "0/1", "value_w": "1/1"}}

    def test_separate_fraction_input(self, capsys):
        """'11/2' 문자열 좌표"""
        code, out, _ = _run(capsys, "separate", "--n", "2", "--v", "[1,2,3]", "--w", '[1,3,"11/2"]')
        assert code == EXIT_OK
        assert json.loads(out)["separated"] is False

    def test_orbit(self, capsys):
        """a = 1"""
        code, out, _ = _run(capsys, "orbit", "--n", "2", "--v", "[1,2,3]", "--w", '[1,3,"11/2"]')
        assert code == EXIT_OK
        assert json.loads(out) == {"same_orbit": True, "translation": "1/1"}

    def test_orbit_pretty(self, capsys):
        """다른 궤도"""
        _, out, _ = _run(capsys, "orbit", "--n", "2", "--v", "[0,1,0]", "--w", "[0,-1,0]", "--pretty")
        assert out.strip() == "different orbits"

    @pytest.mark.parametrize("v", ["[1,0]", "[1.5,0,0]", "not json", "[]"])
    def test_bad_point(self, capsys, v):
        """길이·부동소수점·형식 오류는 사용 오류"""
        code, _, _ = _run(capsys, "separate", "--n", "2", "--v", v, "--w", "[1,0,0]")
        assert code == EXIT_USAGE


class TestWzKernelExplore:
    """sepinv wz / kernel / explore / validate"""

    def test_wz_p1(self, capsys):
        """잔차 전부 0"""
        code, out, _ = _run(capsys, "wz", "--p", "1")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["ok"] and data["mode"] == "all"
        assert all(r == "0/1" for r in data["residuals"].values())

    def test_wz_mode(self, capsys):
        """--mode sum"""
        _, out, _ = _run(capsys, "wz", "--p", "3", "--mode", "sum")
        assert set(json.loads(out)["residuals"]) == {"sum", "normalized_sum"}

    def test_wz_bad_p(self, capsys):
        """p = 0"""
        code, _, _ = _run(capsys, "wz", "--p", "0")
        assert code == EXIT_USAGE

    def test_kernel_dump(self, capsys, tmp_path):
        """차원 2, --dump 파일"""
        target = tmp_path / "basis.json"
        code, out, _ = _run(capsys, "kernel", "--n", "2", "--d", "2", "--dump", str(target))
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["dimension"] == 2
        assert json.loads(target.read_text(encoding="utf-8")) == data

    def test_explore(self, capsys):
        """n=4, m=1, j=1 은 -16 배"""
        code, out, _ = _run(capsys, "explore", "--n", "4", "--m", "1", "--j", "1")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["ratio"] == "-16/1"
        assert data["relation"] == "scalar multiple"

    def test_explore_bad_m(self, capsys):
        """m > [(n-1)/2]"""
        code, _, _ = _run(capsys, "explore", "--n", "4", "--m", "2", "--j", "1")
        assert code == EXIT_USAGE

    def test_validate_small(self, capsys):
        """n = 2 교차 검증 통과"""
        code, out, _ = _run(capsys, "validate", "--n", "2", "--trials", "5")
        data = json.loads(out)
        assert code == EXIT_OK
        assert data["ok"] and data["d_max"] == 6
        assert data["trials"] == {"ORBIT_TRANSLATE": 5, "SIGN_FLIP": 5, "NULL_CONE": 5}


class TestRequestModels:
    """요청 모델 검증"""

    def test_point_pair_length(self):
        """길이 n+1 강제"""
        with pytest.raises(ValidationError):
            PointPairRequest(n=3, v="[1,2,3]", w="[1,2,3,4]")

    def test_point_pair_parses(self):
        """JSON 문자열과 리스트 모두 허용"""
        req = PointPairRequest(n=1, v="[1, \"1/2\"]", w=[0, 3])
        assert len(req.v) == 2 and len(req.w) == 2

    def test_table_min(self):
        """max ≥ 4"""
        with pytest.raises(ValidationError):
            TableRequest(max=2)

    def test_explore_j_range(self):
        """1 ≤ j ≤ n"""
        with pytest.raises(ValidationError):
            ExploreRequest(n=4, m=1, j=5)
        assert ExploreRequest(n=4, m=1, j=4).j == 4


def test_exit_codes_distinct():
    """0, 1, 2"""
    assert (EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE) == (0, 1, 2)
