"""Weitzenböck 미분의 불변식 분리 집합 도구"""
from dotenv import load_dotenv

# 하위 모듈이 import 시점에 SEPINV_* 환경변수를 읽는다
load_dotenv()
