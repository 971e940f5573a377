"""Search budgets, read at call time so the CLI can override them.

Each budget caps the number of candidates a brute-force search may
examine before raising BudgetExceeded.
"""
from contextlib import contextmanager

DEFAULTS = {
    "semigroup_homs": 10**7,
    "monoid_iso": 10**6,
    "functors": 10**7,
    "mset_homs": 10**6,
    "mset_actions": 2 * 10**7,
}

_current = dict(DEFAULTS)


def budget(name, override=None):
    return _current[name] if override is None else override


def set_max_candidates(n):
    """Use n for every budget (None restores the defaults)."""
    for k in _current:
        _current[k] = DEFAULTS[k] if n is None else int(n)


@contextmanager
def max_candidates(n):
    saved = dict(_current)
    set_max_candidates(n)
    try:
        yield
    finally:
        _current.update(saved)
