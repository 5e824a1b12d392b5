"""Shared fixtures: every test runs against its own cache directory"""
import pytest

from nfactorial.config import get_settings
from nfactorial.partitions import Partition


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    cache_dir = tmp_path / "cache"
    monkeypatch.setenv("NFACT_CACHE_DIR", str(cache_dir))
    for name in ("NFACT_WORKERS", "NFACT_MAX_N", "NFACT_DEEP", "NFACT_USE_CACHE",
                 "NFACT_PRIME_SEED"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return cache_dir


@pytest.fixture
def settings():
    return get_settings()


@pytest.fixture
def sigma21():
    return Partition((2, 1))
