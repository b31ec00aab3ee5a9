"""Command-line harness: lemma suite, scenario replay and contract fuzzing.

Exit status is 0 on success, 1 on a contract or expectation failure and 2
on usage or parse errors.

Scenario files hold one JSON object per line (blank lines and ``#``
comments are skipped)::

    {"op": "get_node", "handle": 5, "expect": 1611}
    {"op": "create_node", "handle": "0x40000001"}
    {"op": "expect_code", "code": 616}
    {"op": "expect_list", "handles": [5, 7]}
    {"op": "snapshot", "label": "before"}
    {"op": "assert_unchanged", "label": "before", "strict": true}

``expect_list`` gives handles from the head of the list.
``assert_unchanged`` checks ``unchanged_ll`` over the list recorded at the
label; with ``strict`` the whole bank and context must be identical.
"""

from __future__ import annotations

import argparse
import collections
import json
import random
import sys
import time

from .contracts import ContractViolation
from .lemma_suite import MAX_NODES_LIMIT, run_suite
from .logic_lists import unchanged_ll
from .memory_model import DEFAULT_CAPACITY, new_bank
from .resource_store import (Context, Slot, capture, checked_create_node,
                             checked_get_node, list_handles, resource_list)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_FIELDS = {
    'get_node': {'handle': True, 'expect': False, 'slot': False},
    'create_node': {'handle': True, 'expect': False, 'slot': False},
    'expect_code': {'code': True},
    'expect_list': {'handles': True},
    'snapshot': {'label': True},
    'assert_unchanged': {'label': True, 'strict': False},
}


class ScenarioError(ValueError):
    def __init__(self, lineno, message):
        super().__init__('line %d: %s' % (lineno, message))
        self.lineno = lineno


def _u32(value, what):
    if isinstance(value, str):
        value = int(value, 0)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError('%s must be an integer' % what)
    if not 0 <= value <= 0xFFFFFFFF:
        raise ValueError('%s out of 32-bit range' % what)
    return value


def parse_scenario(lines):
    """Parse and type-check scenario text; returns ``[(lineno, cmd)]``."""
    commands = []
    for lineno, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text or text.startswith('#'):
            continue
        try:
            cmd = json.loads(text)
        except json.JSONDecodeError as e:
            raise ScenarioError(lineno, 'invalid JSON: %s' % e) from None
        if not isinstance(cmd, dict) or cmd.get('op') not in _FIELDS:
            raise ScenarioError(lineno, 'unknown or missing op')
        spec = _FIELDS[cmd['op']]
        extra = set(cmd) - set(spec) - {'op'}
        if extra:
            raise ScenarioError(lineno, 'unexpected fields %s' % sorted(extra))
        missing = [k for k, req in spec.items() if req and k not in cmd]
        if missing:
            raise ScenarioError(lineno, 'missing fields %s' % missing)
        try:
            for key in ('handle', 'expect', 'code', 'slot'):
                if key in cmd:
                    cmd[key] = _u32(cmd[key], key)
            if 'handles' in cmd:
                if not isinstance(cmd['handles'], list):
                    raise ValueError('handles must be a list')
                cmd['handles'] = [_u32(h, 'handle') for h in cmd['handles']]
            if 'label' in cmd and not isinstance(cmd['label'], str):
                raise ValueError('label must be a string')
            if 'strict' in cmd and not isinstance(cmd['strict'], bool):
                raise ValueError('strict must be a boolean')
        except ValueError as e:
            raise ScenarioError(lineno, str(e)) from None
        commands.append((lineno, cmd))
    return commands


def run_scenario(commands, bank_capacity=DEFAULT_CAPACITY, out=None):
    """Replay parsed commands on a fresh store; returns an exit status."""
    out = out or sys.stdout
    bank = new_bank(bank_capacity)
    ctx = Context()
    slots = {}
    labels = {}
    last_code = None

    def fail(lineno, message):
        print('FAIL line %d: %s' % (lineno, message), file=out)
        return EXIT_FAIL

    for lineno, cmd in commands:
        op = cmd['op']
        try:
            if op in ('get_node', 'create_node'):
                slot = slots.setdefault(cmd.get('slot', 0),
                                        Slot(cmd.get('slot', 0)))
                call = checked_get_node if op == 'get_node' \
                    else checked_create_node
                last_code = call(bank, ctx, cmd['handle'], slot)
                print('%d: %s(%#x) -> %d list=%s' % (
                    lineno, op, cmd['handle'], last_code,
                    list_handles(bank, ctx)), file=out)
                if 'expect' in cmd and last_code != cmd['expect']:
                    return fail(lineno, 'expected code %d, got %d'
                                % (cmd['expect'], last_code))
            elif op == 'expect_code':
                if last_code != cmd['code']:
                    return fail(lineno, 'expected code %d, last was %r'
                                % (cmd['code'], last_code))
            elif op == 'expect_list':
                got = list_handles(bank, ctx)
                if got != cmd['handles']:
                    return fail(lineno, 'expected list %s, got %s'
                                % (cmd['handles'], got))
            elif op == 'snapshot':
                labels[cmd['label']] = (capture(bank, ctx, Slot()),
                                        resource_list(bank, ctx))
                print('%d: snapshot %s' % (lineno, cmd['label']), file=out)
            elif op == 'assert_unchanged':
                if cmd['label'] not in labels:
                    return fail(lineno, 'unknown label %r' % cmd['label'])
                then, ll = labels[cmd['label']]
                now = capture(bank, ctx, Slot())
                if not unchanged_ll(then.mem, now.mem, ll):
                    return fail(lineno, 'list changed since %s'
                                % cmd['label'])
                if cmd.get('strict') and then != now:
                    return fail(lineno, 'state changed since %s'
                                % cmd['label'])
        except ContractViolation as e:
            return fail(lineno, 'contract violation: %s' % e)
    print('OK %d commands' % len(commands), file=out)
    return EXIT_OK


def cmd_scenario(path, bank_capacity=DEFAULT_CAPACITY, out=None,
                 err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path) as f:
            commands = parse_scenario(f)
    except OSError as e:
        print('error: %s' % e, file=err)
        return EXIT_USAGE
    except ScenarioError as e:
        print('parse error: %s' % e, file=err)
        return EXIT_USAGE
    return run_scenario(commands, bank_capacity, out)


def cmd_lemmas(max_nodes, json_path=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    if not 1 <= max_nodes <= MAX_NODES_LIMIT:
        print('error: --max-nodes must be in [1, %d]' % MAX_NODES_LIMIT,
              file=err)
        return EXIT_USAGE
    t0 = time.perf_counter()
    reports = run_suite(max_nodes)
    for rep in reports:
        print(rep.line(), file=out)
    ok = all(rep.passed for rep in reports)
    if json_path:
        summary = {
            'max_nodes': max_nodes,
            'passed': ok,
            'elapsed_s': round(time.perf_counter() - t0, 3),
            'lemmas': [rep.summary() for rep in reports],
        }
        with open(json_path, 'w') as f:
            json.dump(summary, f, indent=2)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_fuzz(ops, seed, bank_capacity=DEFAULT_CAPACITY, alphabet=None,
             out=None):
    """Random ``get_node`` calls with the full contract checked each time."""
    out = out or sys.stdout
    if alphabet is None:
        alphabet = 2 * bank_capacity
    rng = random.Random(seed)
    bank = new_bank(bank_capacity)
    ctx = Context()
    slot = Slot()
    histogram = collections.Counter()
    for i in range(ops):
        handle = rng.randrange(alphabet)
        try:
            code = checked_get_node(bank, ctx, handle, slot)
        except ContractViolation as e:
            print('violation at op %d: %s' % (i + 1, e), file=out)
            print('minimal reproducing prefix: %d ops (seed %d)'
                  % (i + 1, seed), file=out)
            return EXIT_FAIL
        histogram[code] += 1
    print('list_length=%d allocated=%d' % (
        len(resource_list(bank, ctx)), bank.alloc_idx), file=out)
    print('histogram ' + ' '.join('%d=%d' % kv
                                  for kv in sorted(histogram.items())),
          file=out)
    return EXIT_OK


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError('must be a positive integer')
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog='esapi-lists',
        description='Resource-list model: lemma checks, scenarios, fuzzing.')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('lemmas', help='exhaustive small-scope lemma check')
    p.add_argument('--max-nodes', type=int, default=3)
    p.add_argument('--json', dest='json_path',
                   help='also write a machine-readable summary here')

    p = sub.add_parser('scenario', help='replay a scenario file')
    p.add_argument('path')
    p.add_argument('--bank', type=_positive, default=DEFAULT_CAPACITY)

    p = sub.add_parser('fuzz', help='seeded random get_node calls')
    p.add_argument('--ops', type=_positive, default=10000)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--bank', type=_positive, default=DEFAULT_CAPACITY)
    p.add_argument('--alphabet', type=_positive, default=None,
                   help='handle alphabet size (default: 2 x bank)')
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.command == 'lemmas':
        return cmd_lemmas(args.max_nodes, args.json_path)
    if args.command == 'scenario':
        return cmd_scenario(args.path, args.bank)
    return cmd_fuzz(args.ops, args.seed, args.bank, args.alphabet)
