"""구성 결과(분리 집합, 핵 기저) 메모리 캐시"""
import logging
import os
import threading
from typing import Callable, Generic, Hashable, Optional, TypeVar

logger = logging.getLogger("sepinv.cache")

K = TypeVar("K", bound=Hashable)
V = TypeVar("V")

# 캐시당 최대 항목 수. 환경변수 SEPINV_CACHE_SIZE 로 변경 가능
DEFAULT_CACHE_SIZE = int(os.getenv("SEPINV_CACHE_SIZE", "32"))


class BoundedCache(Generic[K, V]):
    """
    크기 제한 캐시. 값은 키의 순수 함수라 만료(TTL)는 없고,
    가득 차면 가장 먼저 들어온 항목부터 제거한다.
    여러 스레드에서 공유해도 된다 (dict 변경은 모두 잠금 안에서).
    """

    def __init__(self, name: str, max_size: int = DEFAULT_CACHE_SIZE):
        if max_size < 1:
            raise ValueError(f"max_size 는 1 이상이어야 합니다: {max_size}")
        self.name = name
        self.max_size = max_size
        self._cache: dict[K, V] = {}
        self._lock = threading.Lock()

    def get(self, key: K) -> Optional[V]:
        """캐시에서 조회. 없으면 None"""
        with self._lock:
            value = self._cache.get(key)
        if value is not None:
            logger.debug("%s 캐시 히트: %s", self.name, key)
        return value

    def set(self, key: K, value: V) -> None:
        with self._lock:
            self._set_locked(key, value)

    def get_or_build(self, key: K, builder: Callable[[], V]) -> V:
        """
        없으면 builder() 로 만들어 저장. builder 는 잠금 밖에서 실행하므로
        서로 다른 키는 동시에 만들어진다. 같은 키를 두 스레드가 만들면 먼저 저장된 값을 돌려준다.
        """
        value = self.get(key)
        if value is not None:
            return value
        built = builder()
        with self._lock:
            existing = self._cache.get(key)
            if existing is not None:
                return existing
            self._set_locked(key, built)
        return built

    def _set_locked(self, key: K, value: V) -> None:
        if key not in self._cache and len(self._cache) >= self.max_size:
            self._evict_oldest()
        self._cache[key] = value

    def _evict_oldest(self) -> None:
        # 잠금을 잡은 상태에서만 호출
        if not self._cache:
            return
        oldest = next(iter(self._cache))
        del self._cache[oldest]
        logger.debug("%s 캐시 정리: %s 제거", self.name, oldest)

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()

    def __len__(self) -> int:
        with self._lock:
            return len(self._cache)

    def __contains__(self, key: object) -> bool:
        with self._lock:
            return key in self._cache
