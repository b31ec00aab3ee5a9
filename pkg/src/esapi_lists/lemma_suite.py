"""Exhaustive small-scope checking of the linked-list lemma family.

Every heap with up to ``max_nodes`` allocated cells is enumerated: each
allocated cell gets a ``next`` in ``{NIL, 0..n-1}`` and a handle in
``{0, 1}``.  The bank capacity is ``max_nodes`` so that references to
unallocated cells are part of every quantifier domain.

Logic-list variables are drawn from the prefixes of the raw ``next`` walk
starting at ``bgn``.  This loses nothing for hypotheses of the form
``linked_ll(m, bgn, end, ll)``: the step clause forces ``ll[0] == bgn`` and
the tail to start at ``next(bgn)``, so any satisfying ``ll`` is such a
prefix.  Second snapshots come from every single-field mutation of the heap
(a ``next`` or handle of one allocated cell, or the allocation cursor).
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterator, Optional

from .logic_lists import (BankCell, ContextLoc, CycleError, SlotLoc,
                          linked_ll, pairwise_distinct, sep_from_list,
                          separated, to_ll, unchanged_ll)
from .memory_model import NIL, CellState, MemorySnapshot, valid_bank

__all__ = [
    'MAX_NODES_LIMIT',
    'HeapConfig',
    'HeapWorld',
    'Lemma',
    'LemmaReport',
    'LEMMAS',
    'MUTANTS',
    'register',
    'expected_config_count',
    'enumerate_heaps',
    'find_counterexamples',
    'check_lemma',
    'run_suite',
]

MAX_NODES_LIMIT = 6
HANDLE_ALPHABET = (0, 1)


@dataclass(frozen=True)
class HeapConfig:
    max_nodes: int
    n_allocated: int
    nexts: tuple
    handles: tuple

    def snapshot(self) -> MemorySnapshot:
        cells = [CellState(h, b'', 0, 0, nx)
                 for h, nx in zip(self.handles, self.nexts)]
        cells += [CellState(0, b'', 0, 0, NIL)] * (
            self.max_nodes - self.n_allocated)
        return MemorySnapshot(self.max_nodes, self.n_allocated, tuple(cells))

    @classmethod
    def from_nexts(cls, nexts, max_nodes=None, handles=None):
        """Build a heap from an explicit ``next`` table, e.g. ``(1, NIL)``."""
        n = len(nexts)
        return cls(n if max_nodes is None else max_nodes, n, tuple(nexts),
                   tuple(handles) if handles else (0,) * n)


def _check_bound(max_nodes):
    if not 1 <= max_nodes <= MAX_NODES_LIMIT:
        raise ValueError('max_nodes must be in [1, %d], got %r'
                         % (MAX_NODES_LIMIT, max_nodes))


def expected_config_count(max_nodes: int) -> int:
    return sum((n + 1) ** n * len(HANDLE_ALPHABET) ** n
               for n in range(max_nodes + 1))


def enumerate_heaps(max_nodes: int) -> Iterator[HeapConfig]:
    _check_bound(max_nodes)
    for n in range(max_nodes + 1):
        targets = (NIL,) + tuple(range(n))
        for nexts in itertools.product(targets, repeat=n):
            for handles in itertools.product(HANDLE_ALPHABET, repeat=n):
                yield HeapConfig(max_nodes, n, nexts, handles)


class HeapWorld:
    """One heap plus lazily built, shared quantifier domains."""

    def __init__(self, heap: HeapConfig):
        self.heap = heap
        self.mem = heap.snapshot()
        self.cells = tuple(range(heap.max_nodes))
        self.refs = (NIL,) + self.cells
        self._prefixes = {}
        self._sat = None
        self._lists = None
        self._mutations = None

    def prefixes(self, bgn):
        try:
            return self._prefixes[bgn]
        except KeyError:
            pass
        walk = []
        cur = bgn
        while cur is not NIL and len(walk) <= self.mem.capacity:
            walk.append(cur)
            cur = self.mem.cells[cur].next
        out = [tuple(walk[:j]) for j in range(len(walk) + 1)]
        self._prefixes[bgn] = out
        return out

    def sat(self, bgn, end):
        """Every candidate ``ll`` with ``linked_ll(mem, bgn, end, ll)``."""
        if self._sat is None:
            mem = self.mem
            self._sat = {
                (b, e): [ll for ll in self.prefixes(b)
                         if linked_ll(mem, b, e, ll)]
                for b in self.refs for e in self.refs}
        return self._sat[bgn, end]

    def linked_lists(self):
        """Distinct logic lists that are linked somewhere in this heap."""
        if self._lists is None:
            seen = {}
            for b in self.refs:
                for e in self.refs:
                    for ll in self.sat(b, e):
                        seen.setdefault(ll, None)
            self._lists = list(seen)
        return self._lists

    def mutations(self):
        """``(description, snapshot)`` for every single-field mutation."""
        if self._mutations is None:
            mem = self.mem
            n = mem.alloc_idx
            out = []
            for i in range(n):
                cell = mem.cells[i]
                for v in (NIL,) + tuple(range(n)):
                    if v != cell.next:
                        out.append(('next[%d]=%r' % (i, v),
                                    _with_cell(mem, i, cell._replace(next=v))))
                out.append(('handle[%d]^=1' % i,
                            _with_cell(mem, i,
                                       cell._replace(handle=cell.handle ^ 1))))
            for k in range(mem.capacity + 1):
                if k != n:
                    out.append(('alloc_idx=%d' % k,
                                MemorySnapshot(mem.capacity, k, mem.cells)))
            self._mutations = out
        return self._mutations


def _with_cell(mem, i, cell):
    cells = mem.cells[:i] + (cell,) + mem.cells[i + 1:]
    return MemorySnapshot(mem.capacity, mem.alloc_idx, cells)


# Each lemma is a generator of falsifying bindings; ``mutant=True`` selects
# a deliberately broken variant used to show the harness can find failures.

def _correspond(w: HeapWorld, mutant=False):
    mem = w.mem
    for b in w.refs:
        for e in w.refs:
            try:
                image = tuple(to_ll(mem, b, e))
            except CycleError:
                image = None
            cands = w.prefixes(b)
            if image is not None and image not in cands:
                cands = cands + [image]
            for ll in cands:
                rhs = (image is not None and image == ll
                       and pairwise_distinct(ll)
                       and (mutant or all(mem.is_allocated(x) for x in ll)))
                if linked_ll(mem, b, e, ll) != rhs:
                    yield {'bgn': b, 'end': e, 'll': ll}


def _split(w: HeapWorld, mutant=False):
    mem = w.mem
    for b in w.refs:
        for e in w.refs:
            for ll in w.sat(b, e):
                for k in range(len(ll)):
                    l1, l2 = ll[:k], ll[k:]
                    q = l2[0]
                    left = linked_ll(mem, b, e if mutant else q, l1)
                    if not (left and linked_ll(mem, q, e, l2)):
                        yield {'bgn': b, 'end': e, 'mid': q, 'l1': l1,
                               'l2': l2}


def _merge(w: HeapWorld, mutant=False):
    mem = w.mem
    for b in w.refs:
        for q in w.refs:
            for l1 in w.sat(b, q):
                for e in w.refs:
                    for l2 in w.sat(q, e):
                        if not mutant:
                            others = [BankCell(y) for y in l2]
                            if e is not NIL:
                                others.append(BankCell(e))
                            if not all(separated(BankCell(x), o)
                                       for x in l1 for o in others):
                                continue
                        if not linked_ll(mem, b, e, l1 + l2):
                            yield {'bgn': b, 'mid': q, 'end': e, 'l1': l1,
                                   'l2': l2}


def _stable(w: HeapWorld, mutant=False):
    s1 = w.mem
    for b in w.refs:
        for e in w.refs:
            for ll in w.sat(b, e):
                for desc, s2 in w.mutations():
                    if not mutant and not unchanged_ll(s1, s2, ll):
                        continue
                    if not linked_ll(s2, b, e, ll):
                        yield {'bgn': b, 'end': e, 'll': ll, 's2': desc}


def _unchanged_trans(w: HeapWorld, mutant=False):
    s1 = w.mem
    snaps = [('id', s1)] + w.mutations()
    for ll in w.linked_lists():
        keeps = [unchanged_ll(s1, s, ll) for _, s in snaps]
        for (d2, s2), keep2 in zip(snaps, keeps):
            if not (keep2 or mutant):
                continue
            for (d3, s3), keep3 in zip(snaps, keeps):
                # Conclusion already true: the implication holds.
                if keep3:
                    continue
                if unchanged_ll(s2, s3, ll):
                    yield {'ll': ll, 's2': d2, 's3': d3}


def _cons_head(w: HeapWorld, mutant=False):
    mem = w.mem
    for r in w.cells:
        if not mem.is_allocated(r):
            continue
        for b in w.refs:
            if mem.cells[r].next != b:
                continue
            for e in w.refs:
                if r == e and not mutant:
                    continue
                for ll in w.sat(b, e):
                    if r in ll:
                        continue
                    if not linked_ll(mem, r, e, (r,) + ll):
                        yield {'r': r, 'bgn': b, 'end': e, 'll': ll}


def _distinct(w: HeapWorld, mutant=False):
    for b in w.refs:
        for e in w.refs:
            for ll in w.sat(b, e):
                if pairwise_distinct(ll) == mutant:
                    yield {'bgn': b, 'end': e, 'll': ll}


def _sep_cons(w: HeapWorld, mutant=False):
    locs = [BankCell(i) for i in w.cells] + [ContextLoc(0), SlotLoc(0)]
    for ll in w.linked_lists():
        for r in w.cells:
            for loc in locs:
                rhs = sep_from_list(loc, ll)
                if not mutant:
                    rhs = separated(loc, BankCell(r)) and rhs
                if sep_from_list(loc, (r,) + ll) != rhs:
                    yield {'loc': loc, 'r': r, 'll': ll}


def _nth_bounds(w: HeapWorld, mutant=False):
    mem = w.mem
    for b in w.refs:
        for e in w.refs:
            for ll in w.sat(b, e):
                ok = all(mem.is_allocated(ll[k]) for k in range(len(ll)))
                if ll:
                    ok = ok and mem.cells[ll[-1]].next == (b if mutant else e)
                if not ok:
                    yield {'bgn': b, 'end': e, 'll': ll}


@dataclass(frozen=True)
class Lemma:
    name: str
    statement: str
    counterexamples: Callable[[HeapWorld], Iterator[dict]]


LEMMAS = {}
MUTANTS = {}


def register(name, statement, fn, mutant_fn=None):
    """Add a lemma (and optionally its falsified variant) to the registry."""
    LEMMAS[name] = Lemma(name, statement, fn)
    if mutant_fn is not None:
        MUTANTS[name] = Lemma(name + '~mutant', 'falsified ' + name,
                              mutant_fn)


for _name, _statement, _fn in [
    ('L-correspond',
     'linked_ll(m,b,e,ll) <=> to_ll(m,b,e) = ll, distinct and allocated',
     _correspond),
    ('L-split',
     'linked_ll(m,b,e,l1++l2), l2 = q::_ => linked_ll(m,b,q,l1) and '
     'linked_ll(m,q,e,l2)', _split),
    ('L-merge',
     'linked_ll(m,b,q,l1), linked_ll(m,q,e,l2), l1 separated from l2 and '
     'e => linked_ll(m,b,e,l1++l2)', _merge),
    ('L-stable',
     'linked_ll(s1,b,e,ll), unchanged_ll(s1,s2,ll) => linked_ll(s2,b,e,ll)',
     _stable),
    ('L-unchanged-trans',
     'unchanged_ll(s1,s2,ll), unchanged_ll(s2,s3,ll) => unchanged_ll(s1,s3,ll)',
     _unchanged_trans),
    ('L-cons-head',
     'r allocated, r not in ll, r != e, next(r) = b, linked_ll(m,b,e,ll) => '
     'linked_ll(m,r,e,r::ll)', _cons_head),
    ('L-distinct', 'linked_ll(m,b,e,ll) => ll pairwise distinct', _distinct),
    ('L-sep-cons',
     'sep_from_list(loc, r::ll) <=> separated(loc, r) and sep_from_list(loc, ll)',
     _sep_cons),
    ('L-nth-bounds',
     'linked_ll(m,b,e,ll) => every element allocated and next(last) = e',
     _nth_bounds),
]:
    register(_name, _statement, _fn, partial(_fn, mutant=True))


@dataclass
class LemmaReport:
    lemma_name: str
    configs_checked: int = 0
    counterexamples: list = field(default_factory=list)
    n_counterexamples: int = 0
    elapsed_ms: float = 0.0

    @property
    def passed(self):
        return self.n_counterexamples == 0

    def line(self):
        return '%s %d %d %.0f' % (self.lemma_name, self.configs_checked,
                                  self.n_counterexamples, self.elapsed_ms)

    def summary(self):
        return {
            'lemma': self.lemma_name,
            'configs_checked': self.configs_checked,
            'counterexamples': self.n_counterexamples,
            'examples': [{'heap': _heap_dict(h), 'binding': _jsonable(b)}
                         for h, b in self.counterexamples],
            'elapsed_ms': round(self.elapsed_ms, 3),
        }


def _heap_dict(heap):
    return {'max_nodes': heap.max_nodes, 'n_allocated': heap.n_allocated,
            'nexts': list(heap.nexts), 'handles': list(heap.handles)}


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (tuple, list)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (BankCell, ContextLoc, SlotLoc)):
        return repr(value)
    return value


def _lookup(name, registry):
    try:
        return registry[name]
    except KeyError:
        raise KeyError('unknown lemma %r; known: %s'
                       % (name, ', '.join(registry))) from None


def find_counterexamples(name, heap: HeapConfig, mutant=False) -> list:
    lemma = _lookup(name, MUTANTS if mutant else LEMMAS)
    return list(lemma.counterexamples(HeapWorld(heap)))


def check_lemma(name, heap: HeapConfig, mutant=False) -> bool:
    lemma = _lookup(name, MUTANTS if mutant else LEMMAS)
    return next(iter(lemma.counterexamples(HeapWorld(heap))), None) is None


def run_suite(max_nodes: int, names=None, mutant=False,
              keep: int = 20) -> list:
    """Check every named lemma on every heap up to ``max_nodes`` cells.

    Heaps are walked once and their quantifier domains shared between
    lemmas.  At most ``keep`` counterexamples are stored per lemma; all are
    counted.
    """
    _check_bound(max_nodes)
    registry = MUTANTS if mutant else LEMMAS
    lemmas = [_lookup(n, registry) for n in (names or list(registry))]
    reports = [LemmaReport(lem.name) for lem in lemmas]
    clock = time.perf_counter
    for heap in enumerate_heaps(max_nodes):
        world = HeapWorld(heap)
        if not valid_bank(world.mem):
            raise AssertionError('enumerated an invalid bank: %r' % (heap,))
        for lem, rep in zip(lemmas, reports):
            t0 = clock()
            for binding in lem.counterexamples(world):
                rep.n_counterexamples += 1
                if len(rep.counterexamples) < keep:
                    rep.counterexamples.append((heap, binding))
            rep.elapsed_ms += (clock() - t0) * 1000.0
            rep.configs_checked += 1
    return reports
