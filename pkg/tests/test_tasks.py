import pytest

from nfactorial import tasks
from nfactorial.cache import ResultCache
from nfactorial.config import get_settings
from nfactorial.errors import BoundExceeded, UsageError
from nfactorial.partitions import Partition
from nfactorial.tasks import _job, cache_context, execute, run_task, verify_all, verify_all_jobs


def test_dim_task(settings):
    result = execute("dim", {"sigma": "2,1", "mode": "exact", "field": "q"}, settings)
    assert result.passed
    assert result.certificate == "exact"
    out = result.outputs
    assert (out["dim"], out["expected"]) == (6, 6)
    assert out["bigraded"] == [[0, 0, 1], [0, 1, 2], [1, 0, 2], [1, 1, 1]]
    assert out["sign_multiplicities"] == [[1, 1, 1]]
    assert out["vanishing_cases"] == 6
    assert out["traces"]["long_cycle"] == [[0, 0, 1], [0, 1, -1], [1, 0, -1], [1, 1, 1]]


def test_dim_task_over_prime_field(settings):
    result = execute("dim", {"sigma": "2,1", "mode": "exact", "field": "fp:5"}, settings)
    assert result.certificate == "fp:5"
    assert result.outputs["gorenstein"] is None
    assert result.passed


def test_dim_task_rejects(settings):
    with pytest.raises(UsageError):
        execute("dim", {"sigma": "2,1", "mode": "consensus", "field": "fp:5"}, settings)
    with pytest.raises(UsageError):
        execute("dim", {"sigma": "2,1", "mode": "bogus"}, settings)
    with pytest.raises(BoundExceeded):
        execute("dim", {"sigma": "4,2"}, settings)
    with pytest.raises(UsageError):
        execute("nope", {}, settings)


def test_sign_tasks(settings):
    lowest = execute("sign", {"n": 4}, settings)
    assert lowest.outputs["degree"] == 4
    assert lowest.outputs["multiplicity"] == 3
    assert lowest.passed
    analysis = execute("sign", {"sigma": "2,2", "mode": "exact"}, settings)
    assert analysis.outputs["sign_multiplicities"] == [[2, 2, 1]]
    assert analysis.outputs["top_bidegree"] == [2, 2]
    assert analysis.passed


def test_springer_task(settings):
    result = execute("springer", {"sigma": "2,1", "field": "q"}, settings)
    assert result.outputs["tanisaki_dims"] == [1, 2]
    assert result.outputs["dcp_dual_dims"] == [1, 2]
    assert result.passed


def test_gr_task(settings):
    result = execute("gr", {"p": 2, "q": 1, "r": 1, "mode": "exact"}, settings)
    assert result.outputs["gr_dims"] == [1, 4, 1]
    assert result.outputs["coinvariant_model"] is True
    assert result.passed


def test_charp_tasks(settings):
    result = execute("charp", {"n": 4, "p": 2}, settings)
    assert result.outputs["dim_divided"] == 24
    assert result.outputs["conjecture_status"] == "pass"
    assert result.outputs["box"]["passed"]
    assert result.certificate == "fp:2"
    counter = execute("counterexample", {"p": 2}, settings)
    assert (counter.outputs["dim_divided"], counter.outputs["dim_rational"]) == (2, 4)
    assert counter.passed


def test_charp_identities_use_500_samples(settings, monkeypatch):
    seen = []

    def recording(n, p, samples, seed):
        seen.append(samples)
        return {"commutes": True, "divided": True}

    monkeypatch.setattr(tasks, "phi_identity_checks", recording)
    assert execute("charp", {"n": 3, "p": 2}, settings).passed
    assert seen == [500]


def test_nilpair_and_hilb_tasks(settings):
    nilpair = execute("nilpair", {"sigma": "3,1"}, settings)
    assert nilpair.outputs["jordan_types"] == ["3,1", "2,1,1"]
    assert nilpair.passed
    hilb = execute("hilb", {"sigma": "2,1"}, settings)
    assert hilb.outputs["colength"] == 3
    assert len(hilb.outputs["fibres"]) == 4
    assert hilb.passed


def test_tsigma_task(settings):
    result = execute("tsigma", {"sigma": "2,1"}, settings)
    assert result.outputs["t_dim"] == 6
    assert result.outputs["radical_bigraded"] == [[1, 1, 3]]
    assert result.passed


def test_run_task_uses_cache(settings, isolated_cache):
    cache = ResultCache(isolated_cache)
    inputs = {"sigma": "2,1"}
    first = run_task("nilpair", inputs, settings, cache)
    second = run_task("nilpair", inputs, settings, cache, timings=True)
    assert second.to_json() != first.to_json()
    second.elapsed_ms = None
    assert second.to_json() == first.to_json()
    cache.dispose()


def test_cache_follows_settings(isolated_cache):
    cache = ResultCache(isolated_cache)
    inputs = {"sigma": "2,1"}
    low = run_task("hilb", inputs, get_settings(max_n=2), cache)
    assert low.outputs["maximal_rank"] is None
    high = run_task("hilb", inputs, get_settings(max_n=3), cache)
    assert high.outputs["maximal_rank"] is True
    reseeded = run_task("hilb", inputs, get_settings(max_n=2, prime_seed=7), cache)
    assert reseeded.prime_seed == 7
    assert cache_context(get_settings(deep=True))["max_n"] == 6
    cache.dispose()


def test_failing_job_is_recorded():
    result = _job("dim", {"sigma": "3,3"}, get_settings(max_n=2))
    assert not result.passed
    assert result.certificate == "none"
    assert result.outputs["error"].startswith("BoundExceeded")
    assert result.elapsed_ms is not None


def test_verify_all_jobs():
    jobs = verify_all_jobs(3)
    tasks = {task for task, _ in jobs}
    assert tasks == {"dim", "springer", "tsigma", "hilb", "nilpair", "sign", "gr", "charp",
                     "counterexample"}
    gr_inputs = [inputs for task, inputs in jobs if task == "gr"]
    assert {(i["p"], i["q"], i["r"]) for i in gr_inputs} == {(2, 1, 0), (2, 1, 1), (3, 1, 0)}
    sizes = {
        task: {Partition.parse(inputs["sigma"]).n for t, inputs in jobs if t == task}
        for task in ("dim", "hilb", "nilpair")
    }
    assert sizes["dim"] == {1, 2, 3}
    assert sizes["hilb"] == set(range(1, 11))
    assert sizes["nilpair"] == set(range(1, 9))
    deep = verify_all_jobs(3, deep=True)
    assert ("charp", {"n": 4, "p": 2}) in deep
    assert ("charp", {"n": 9, "p": 3}) in deep


def test_verify_all_small(isolated_cache):
    settings = get_settings(max_n=2)
    cache = ResultCache(isolated_cache)
    results = verify_all(settings, cache)
    assert results
    assert all(r.passed for r in results), [r.task for r in results if not r.passed]
    assert all(r.elapsed_ms is None for r in results)
    assert [r.sort_key for r in results] == sorted(r.sort_key for r in results)
    again = verify_all(settings, cache)
    assert [r.to_json() for r in again] == [r.to_json() for r in results]
    cache.dispose()
