import itertools

import pytest

from esapi_lists.logic_lists import linked_ll, to_ll
from esapi_lists.memory_model import NIL, valid_bank
from esapi_lists import lemma_suite
from esapi_lists.lemma_suite import (LEMMAS, MUTANTS, HeapConfig,
                                     check_lemma, enumerate_heaps,
                                     expected_config_count,
                                     find_counterexamples, run_suite)


def brute_count(n_max):
    # count tables directly instead of using the closed form
    total = 0
    for n in range(n_max + 1):
        nexts = list(itertools.product([None] + list(range(n)), repeat=n))
        handles = list(itertools.product([0, 1], repeat=n))
        total += len(nexts) * len(handles)
    return total


def test_count_n1():
    assert expected_config_count(1) == brute_count(1) == 5


@pytest.mark.parametrize('n', [1, 2, 3, 4])
def test_enumeration_complete_and_unique(n):
    heaps = list(enumerate_heaps(n))
    assert len(heaps) == len(set(heaps)) == expected_config_count(n) \
        == brute_count(n)
    assert all(valid_bank(h.snapshot()) for h in heaps)


@pytest.mark.parametrize('n', [0, 7, -1])
def test_enumeration_guard(n):
    with pytest.raises(ValueError):
        next(enumerate_heaps(n))


def test_registry_has_nine_lemmas_each_with_mutant():
    assert len(LEMMAS) == 9
    assert set(MUTANTS) == set(LEMMAS)


def test_correspond_on_empty_heap():
    assert check_lemma('L-correspond', HeapConfig(1, 0, (), ()))


def test_split_on_chain():
    heap = HeapConfig.from_nexts((1, NIL))
    assert check_lemma('L-split', heap)
    mem = heap.snapshot()
    ll = to_ll(mem, 0, NIL)
    assert ll == [0, 1]
    assert to_ll(mem, 0, 1) == [0] and linked_ll(mem, 0, 1, [0])
    assert to_ll(mem, 1, NIL) == [1] and linked_ll(mem, 1, NIL, [1])


def test_cons_head_guard_and_mutant():
    loop = HeapConfig.from_nexts((0,))
    assert check_lemma('L-cons-head', loop)
    cex = find_counterexamples('L-cons-head', loop, mutant=True)
    assert {'r': 0, 'bgn': 0, 'end': 0, 'll': ()} in cex


def test_unknown_lemma():
    with pytest.raises(KeyError):
        check_lemma('L-nope', HeapConfig(1, 0, (), ()))


def test_suite_n3_passes():
    reports = run_suite(3)
    assert [r.lemma_name for r in reports] == list(LEMMAS)
    for r in reports:
        assert r.passed, r.counterexamples[:3]
        assert r.configs_checked == expected_config_count(3)


def test_distinct_mutant_n2():
    (rep,) = run_suite(2, names=['L-distinct'], mutant=True)
    assert rep.n_counterexamples >= 1


def test_reports_deterministic():
    a = run_suite(2, mutant=True)
    b = run_suite(2, mutant=True)
    strip = lambda r: (r.lemma_name, r.configs_checked, r.n_counterexamples,
                       r.counterexamples)
    assert list(map(strip, a)) == list(map(strip, b))


def test_registry_is_extensible(monkeypatch):
    monkeypatch.setattr(lemma_suite, 'LEMMAS', dict(LEMMAS))

    def heads_allocated(world):
        for b in world.refs:
            for ll in world.sat(b, NIL):
                if ll and not world.mem.is_allocated(b):
                    yield {'bgn': b}

    lemma_suite.register('L-head-alloc', 'head of a linked list is allocated',
                         heads_allocated)
    (rep,) = run_suite(2, names=['L-head-alloc'])
    assert rep.passed and rep.configs_checked == 41


def test_summary_is_json_ready():
    import json
    (rep,) = run_suite(1, names=['L-correspond'], mutant=True)
    json.dumps(rep.summary())
    assert rep.summary()['counterexamples'] == rep.n_counterexamples == 1
