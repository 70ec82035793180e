"""Per-run work counters.

The planner installs a fresh :class:`Counters` for every run through
:func:`counting`; the geometric oracles bump whatever instance is active.
Using a context variable keeps concurrent runs (threads or tasks) isolated.
"""

from __future__ import annotations

import contextlib
from contextvars import ContextVar
from dataclasses import asdict, dataclass


@dataclass
class Counters:
    corridor_tests: int = 0
    beta_evals: int = 0
    relocate_calls: int = 0
    histogram_builds: int = 0

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


_active: ContextVar[Counters | None] = ContextVar("clutterplan_counters", default=None)


def tally(**increments: int) -> None:
    c = _active.get()
    if c is None:
        return
    for name, n in increments.items():
        setattr(c, name, getattr(c, name) + n)


def current() -> Counters | None:
    return _active.get()


@contextlib.contextmanager
def counting(counters: Counters | None = None):
    """Activate ``counters`` (or a new instance) for the duration of the block."""
    c = counters if counters is not None else Counters()
    token = _active.set(c)
    try:
        yield c
    finally:
        _active.reset(token)
