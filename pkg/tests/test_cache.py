from nfactorial import ENGINE_VERSION
from nfactorial.cache import CachedResult, ResultCache, cache_key, serialize_result
from nfactorial.models import TaskResult


def _result(passed=True, elapsed=None):
    return TaskResult(
        task="dim",
        inputs={"sigma": "2,1", "mode": "exact", "field": "q"},
        outputs={"dim": 6},
        passed=passed,
        engine_version=ENGINE_VERSION,
        prime_seed=20011,
        elapsed_ms=elapsed,
    )


def test_cache_key_is_order_independent():
    a = cache_key("dim", {"sigma": "2,1", "mode": "exact"}, "1.0.0")
    b = cache_key("dim", {"mode": "exact", "sigma": "2,1"}, "1.0.0")
    assert a == b
    assert a != cache_key("dim", {"sigma": "2,1", "mode": "exact"}, "1.0.1")
    assert len(a) == 64


def test_serialize_drops_timings():
    payload = serialize_result(_result(elapsed=12))
    assert "elapsed_ms" not in payload
    assert '"pass": true' in payload


def test_put_and_get(tmp_path):
    cache = ResultCache(tmp_path / "cache")
    result = _result()
    assert cache.get(result.task, result.inputs, ENGINE_VERSION) is None
    cache.put(result)
    hit = cache.get(result.task, result.inputs, ENGINE_VERSION)
    assert hit is not None
    assert hit.to_json() == result.to_json()
    assert cache.get(result.task, result.inputs, "0.0.0") is None
    cache.dispose()


def test_put_overwrites(tmp_path):
    cache = ResultCache(tmp_path)
    cache.put(_result(passed=False))
    cache.put(_result(passed=True))
    assert cache.get("dim", _result().inputs, ENGINE_VERSION).passed
    assert cache.clear() == 1
    cache.dispose()


def test_corrupt_entry_is_dropped(tmp_path):
    cache = ResultCache(tmp_path)
    result = _result()
    cache.put(result)
    db = cache.SessionLocal()
    row = db.query(CachedResult).first()
    row.payload_json = "{not json"
    db.commit()
    db.close()
    assert cache.get(result.task, result.inputs, ENGINE_VERSION) is None
    db = cache.SessionLocal()
    assert db.query(CachedResult).count() == 0
    db.close()
    cache.dispose()


def test_cache_key_includes_context():
    inputs = {"sigma": "2,1"}
    plain = cache_key("hilb", inputs, "1.0.0")
    assert plain == cache_key("hilb", inputs, "1.0.0", {})
    seeded = cache_key("hilb", inputs, "1.0.0", {"prime_seed": 1, "max_n": 5, "deep": False})
    assert seeded != plain
    reseeded = {"prime_seed": 2, "max_n": 5, "deep": False}
    assert seeded != cache_key("hilb", inputs, "1.0.0", reseeded)
    assert seeded != cache_key("hilb", inputs, "1.0.0", {"prime_seed": 1, "max_n": 6, "deep": True})


def test_other_settings_miss(tmp_path):
    cache = ResultCache(tmp_path)
    stale = TaskResult(
        task="hilb",
        inputs={"sigma": "2,1"},
        outputs={"maximal_rank": None},
        passed=True,
        engine_version=ENGINE_VERSION,
        prime_seed=1,
    )
    seed_one = {"prime_seed": 1, "max_n": 2, "deep": False}
    cache.put(stale, seed_one)
    assert cache.get("hilb", stale.inputs, ENGINE_VERSION, seed_one) is not None
    assert cache.get("hilb", stale.inputs, ENGINE_VERSION,
                     {"prime_seed": 2, "max_n": 2, "deep": False}) is None
    assert cache.get("hilb", stale.inputs, ENGINE_VERSION,
                     {"prime_seed": 1, "max_n": 6, "deep": True}) is None
    cache.dispose()
