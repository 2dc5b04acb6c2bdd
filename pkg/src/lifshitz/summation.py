"""Compensated (Neumaier) summation.

The Matsubara sums and quadrature totals are accumulated with this so that
a result depends only on the order in which terms are fed in, never on how
the work was split across workers.  All callers feed terms in a fixed,
documented order (ascending index, ascending interval position).
"""


class CompensatedSum:
    """Neumaier variant of Kahan summation."""

    __slots__ = ("_total", "_carry")

    def __init__(self, start=0.0):
        self._total = float(start)
        self._carry = 0.0

    def add(self, x):
        t = self._total + x
        if abs(self._total) >= abs(x):
            self._carry += (self._total - t) + x
        else:
            self._carry += (x - t) + self._total
        self._total = t

    @property
    def value(self):
        return self._total + self._carry


def kahan_sum(values):
    """Sum an iterable of floats with compensation, in iteration order."""
    acc = CompensatedSum()
    for v in values:
        acc.add(v)
    return acc.value
