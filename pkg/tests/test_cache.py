import threading

import pytest
from hypothesis import given, strategies as st

from crossmodal.cache import DiskCacheBackend, MemoryCacheBackend, TTLCache, make_key
from crossmodal.clock import ManualClock

HOUR = 3600.0


@pytest.fixture(params=["memory", "disk"])
def cache(request, tmp_path, clock):
    backend = (
        MemoryCacheBackend()
        if request.param == "memory"
        else DiskCacheBackend(tmp_path / "cache")
    )
    return TTLCache(backend, clock=clock, default_ttl=24 * HOUR, capacity=64)


def test_put_then_get_within_ttl(cache, clock):
    cache.put("k", b"payload")
    clock.advance(1 * HOUR)
    assert cache.get("k") == b"payload"


def test_expires_strictly_after_ttl(cache, clock):
    cache.put("k", b"payload")
    clock.advance(23 * HOUR + 59 * 60)
    assert cache.get("k") == b"payload"
    clock.advance(2 * 60)  # now at +24h01m
    assert cache.get("k") is None


def test_get_absent_key_is_miss(cache):
    assert cache.get("never-stored") is None


def test_empty_key_rejected(cache):
    with pytest.raises(ValueError):
        cache.get("")
    with pytest.raises(ValueError):
        cache.put("", b"x")


def test_custom_ttl_overrides_default(cache, clock):
    cache.put("short", b"x", ttl=10.0)
    clock.advance(11.0)
    assert cache.get("short") is None


def test_lru_eviction_over_capacity(clock):
    cache = TTLCache(MemoryCacheBackend(), clock=clock, capacity=3)
    for name in ("a", "b", "c"):
        cache.put(name, name.encode())
    cache.get("a")  # refresh a; b becomes least recently used
    cache.put("d", b"d")
    assert cache.get("b") is None
    assert cache.get("a") == b"a"
    assert cache.get("d") == b"d"


def test_disk_cache_survives_reopen(tmp_path, clock):
    root = tmp_path / "cache"
    TTLCache(DiskCacheBackend(root), clock=clock).put("k", b"persisted")
    reopened = TTLCache(DiskCacheBackend(root), clock=clock)
    assert reopened.get("k") == b"persisted"


def test_disk_cache_lru_eviction_uses_access_times(tmp_path, clock):
    cache = TTLCache(DiskCacheBackend(tmp_path / "cache"), clock=clock, capacity=3)
    for name in ("a", "b", "c"):
        cache.put(name, name.encode())
        clock.advance(1.0)  # distinct stored_at/access times on disk
    cache.get("a")
    clock.advance(1.0)
    cache.put("d", b"d")
    assert cache.get("b") is None
    assert cache.get("a") == b"a"
    assert cache.get("d") == b"d"


def test_storage_failure_degrades_to_miss(tmp_path, clock):
    class BrokenBackend(MemoryCacheBackend):
        def load(self, key):
            raise OSError("disk on fire")

        def store(self, entry):
            raise OSError("disk on fire")

    cache = TTLCache(BrokenBackend(), clock=clock)
    cache.put("k", b"x")  # swallowed with a warning
    assert cache.get("k") is None


def test_make_key_namespacing():
    assert make_key("refset", "Q42", 5) == "refset/Q42/5"


@given(payload=st.binary(max_size=512), key=st.text(min_size=1, max_size=32))
def test_round_trip_byte_exact(payload, key):
    cache = TTLCache(MemoryCacheBackend(), clock=ManualClock())
    cache.put(key, payload)
    assert cache.get(key) == payload


def test_concurrent_readers_and_writers(clock):
    cache = TTLCache(MemoryCacheBackend(), clock=clock, capacity=128)
    errors = []

    def worker(i):
        try:
            for n in range(50):
                cache.put(f"k{i}-{n % 7}", bytes([i, n]))
                cache.get(f"k{(i + 1) % 8}-{n % 7}")
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
