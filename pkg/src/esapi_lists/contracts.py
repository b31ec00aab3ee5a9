"""Minimal design-by-contract helpers shared by the model modules."""

__all__ = ['ContractViolation', 'require', 'ensure']


class ContractViolation(AssertionError):
    """A pre- or postcondition of a modeled function does not hold."""


def require(cond, message='precondition fails', *args):
    if not cond:
        raise ContractViolation(message % args if args else message)


def ensure(cond, message='postcondition fails', *args):
    if not cond:
        raise ContractViolation(message % args if args else message)
