"""Exhaustive small-scope lemma checking, and a mutant it must refute.

Run with ``python demos/05_lemma_suite.py``.
"""
from esapi_lists.lemma_suite import (LEMMAS, HeapConfig, expected_config_count,
                                     find_counterexamples, run_suite)

for name, lemma in LEMMAS.items():
    print('%-18s %s' % (name, lemma.statement))

print('\nheaps up to 3 cells:', expected_config_count(3))
for report in run_suite(3):
    print(report.line())

# Dropping the `r != end` guard from L-cons-head breaks it on a self loop.
loop = HeapConfig.from_nexts((0,))
print('\nmutant counterexamples on 0->0:',
      find_counterexamples('L-cons-head', loop, mutant=True))
