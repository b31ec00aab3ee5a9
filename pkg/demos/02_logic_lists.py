"""From a concrete chain of cells to its logic list, and back.

Run with ``python demos/02_logic_lists.py``.
"""
from esapi_lists.logic_lists import (BankCell, ContextLoc, CycleError,
                                     linked_ll, sep_from_list, to_ll,
                                     unchanged_ll)
from esapi_lists.memory_model import NIL, calloc_node, new_bank, snapshot

bank = new_bank(4)
a, b, c = (calloc_node(bank) for _ in range(3))
bank.cells[a].next = b
bank.cells[b].next = c

# to_ll stops just before `end`; NIL gives the whole list, a cell gives a segment.
print('to_ll(a, NIL):', to_ll(bank, a, NIL))
print('to_ll(a, c):  ', to_ll(bank, a, c))

# linked_ll accepts exactly that list and nothing else.
print('linked_ll [a,b,c]:', linked_ll(bank, a, NIL, [a, b, c]))
print('linked_ll [a,c]:  ', linked_ll(bank, a, NIL, [a, c]))

# Separation in the index model is just distinct location or class.
print('ctx separated from list:', sep_from_list(ContextLoc(0), [a, b, c]))
print('cell b separated:       ', sep_from_list(BankCell(b), [a, b, c]))

# Stability: a write outside the list keeps unchanged_ll, a write inside breaks it.
s1 = snapshot(bank)
bank.cells[3].next = a
s2 = snapshot(bank)
print('unchanged after foreign write:', unchanged_ll(s1, s2, [a, b, c]))
bank.cells[c].next = a
print('unchanged after closing a loop:', unchanged_ll(s2, snapshot(bank), [a, b, c]))

try:
    to_ll(bank, a, NIL)
except CycleError as e:
    print('cycle detected:', e)
