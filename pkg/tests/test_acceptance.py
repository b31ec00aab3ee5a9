"""Exit criteria for the model, one test per criterion."""

import io
import itertools
import random
import time
from pathlib import Path

from esapi_lists.cli import EXIT_OK, cmd_fuzz, cmd_scenario, main
from esapi_lists.lemma_suite import (LEMMAS, enumerate_heaps,
                                     expected_config_count, run_suite)
from esapi_lists.logic_lists import CycleError, linked_ll, to_ll
from esapi_lists.marshal import (MU_INSUFFICIENT_BUFFER, MU_SUCCESS,
                                 marshal_u32, unmarshal_u32)
from esapi_lists.memory_model import (calloc_node, calloc_violations,
                                      new_bank, snapshot, valid_bank)

SCENARIOS = Path(__file__).parent / 'scenarios'


def test_lemma_suite_max_nodes_4(criterion, capsys):
    t0 = time.perf_counter()
    rc = main(['lemmas', '--max-nodes', '4'])
    elapsed = time.perf_counter() - t0
    lines = capsys.readouterr().out.splitlines()
    want = sum((n + 1) ** n * 2 ** n for n in range(5))
    rows = [l.split() for l in lines]
    ok = (rc == 0 and len(rows) == 9
          and {r[0] for r in rows} == set(LEMMAS)
          and all(int(r[1]) == want and int(r[2]) == 0 for r in rows)
          and elapsed < 120)
    criterion('lemma suite N=4: 9 lemmas, 0 counterexamples, %d configs '
              'each, < 120 s' % want, ok, '%.1f s' % elapsed)
    assert ok, lines


def test_mutant_sensitivity(criterion):
    reports = run_suite(3, mutant=True)
    counts = {r.lemma_name: r.n_counterexamples for r in reports}
    ok = len(counts) == len(LEMMAS) and all(c >= 1 for c in counts.values())
    criterion('mutant sensitivity at N<=3: every mutant refuted', ok,
              'min counterexamples %d' % min(counts.values()))
    assert ok, counts


def _scribble(bank, salt):
    for i, node in enumerate(bank.cells):
        node.handle = salt * 100 + i + 1
        node.rsrc.name[:] = bytes([salt & 0xFF or 1]) * len(node.rsrc.name)
        node.rsrc.name_size = len(node.rsrc.name)
        node.rsrc.aux = salt
        node.next = (i + salt) % bank.capacity


def test_allocator_contract(criterion):
    # Every interleaving of up to 8 calloc calls with "scribble" steps that
    # dirty all cells, so that zeroing and the frame are actually exercised.
    violations = []
    runs = calls = 0
    for cap in range(1, 9):
        for length in range(9):
            for seq in itertools.product(('calloc', 'scribble'),
                                         repeat=length):
                bank = new_bank(cap)
                runs += 1
                for step, op in enumerate(seq):
                    if op == 'scribble':
                        _scribble(bank, step + 1)
                        continue
                    before = snapshot(bank)
                    ref = calloc_node(bank)
                    calls += 1
                    for v in calloc_violations(before, snapshot(bank), ref):
                        violations.append((cap, seq, step, v))
                    if not valid_bank(bank):
                        violations.append((cap, seq, step, 'invalid bank'))
                n_calls = seq.count('calloc')
                if bank.alloc_idx != min(cap, n_calls):
                    violations.append((cap, seq, 'final alloc_idx'))
    ok = not violations
    criterion('allocator contract over all interleavings (caps 1..8)', ok,
              '%d runs, %d calls, %d violations'
              % (runs, calls, len(violations)))
    assert ok, violations[:5]


def test_get_node_trichotomy_fuzz(criterion):
    out = io.StringIO()
    t0 = time.perf_counter()
    rc = cmd_fuzz(10_000, 1, 64, out=out)
    elapsed = time.perf_counter() - t0
    text = out.getvalue()
    ok = rc == EXIT_OK and elapsed < 10 and '616=' in text \
        and '1611=' in text
    criterion('get_node fuzz: 10,000 ops, bank 64, every invariant, < 10 s',
              ok, '%.2f s; %s' % (elapsed, text.splitlines()[-1]))
    assert ok, text


def test_return_code_scenarios(criterion):
    results = {}
    for name, bank in [('found.jsonl', 64), ('created.jsonl', 64),
                       ('exhaustion.jsonl', 1)]:
        out = io.StringIO()
        results[name] = cmd_scenario(str(SCENARIOS / name), bank, out=out)
    ok = all(rc == EXIT_OK for rc in results.values())
    criterion('scripted scenarios: 616 found, 1611 created, 833 exhausted',
              ok, str(results))
    assert ok


def test_marshal(criterion):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    values = [0, 1, 0xFF, 0x0100, 0x01020304, 0xFFFFFFFF]
    values += [rng.getrandbits(32) for _ in range(10_000)]
    roundtrip = True
    for v in values:
        buf = bytearray(4)
        if marshal_u32(v, buf, 0) != (MU_SUCCESS, 4) \
                or unmarshal_u32(buf, 0) != (v, 4):
            roundtrip = False
    buf = bytearray(8)
    marshal_u32(0x01020304, buf, 2)
    msb_first = buf[2] == 0x01 and buf[5] == 0x04
    small = bytearray(b'\x10\x20\x30\x40')
    rc, off = marshal_u32(0xDEADBEEF, small, 1)
    atomic = (rc == MU_INSUFFICIENT_BUFFER and off == 1
              and small == bytearray(b'\x10\x20\x30\x40'))
    elapsed = time.perf_counter() - t0
    ok = roundtrip and msb_first and atomic and elapsed < 1
    criterion('marshal: round-trip, big-endian order, failure atomicity, '
              '< 1 s', ok, '%.3f s' % elapsed)
    assert ok


def test_to_ll_linked_ll_correspondence(criterion):
    disagreements = []
    heaps = pairs = 0
    for heap in enumerate_heaps(4):
        mem = heap.snapshot()
        heaps += 1
        refs = [None] + list(range(heap.max_nodes))
        for b in refs:
            # candidate lists: prefixes of the raw walk from b
            walk, cur = [], b
            while cur is not None and len(walk) <= mem.capacity:
                walk.append(cur)
                cur = mem.cells[cur].next
            for e in refs:
                pairs += 1
                try:
                    image = to_ll(mem, b, e)
                except CycleError:
                    image = None
                good = (image is not None
                        and all(x < mem.alloc_idx for x in image)
                        and len(set(image)) == len(image))
                for j in range(len(walk) + 1):
                    ll = walk[:j]
                    expect = good and ll == image
                    if linked_ll(mem, b, e, ll) != expect:
                        disagreements.append((heap, b, e, ll))
    ok = not disagreements and heaps == expected_config_count(4)
    criterion('to_ll / linked_ll correspondence at N=4', ok,
              '%d heaps, %d (bgn, end) pairs, %d disagreements'
              % (heaps, pairs, len(disagreements)))
    assert ok, disagreements[:5]
