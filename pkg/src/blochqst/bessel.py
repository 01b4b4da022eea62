"""First-kind Bessel values J_n(x) for free-propagator matrix elements.

Evaluation uses Miller's downward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}
started well above max(n, x) from an arbitrary tiny seed, normalized with
J_0(x) + 2 sum_k J_{2k}(x) = 1.  Tiny arguments short-circuit to the leading
power-series terms.  The supported window is |order| <= 200, |x| <= 100
(accuracy target 1e-12 there); inputs outside it are rejected rather than
silently degraded.
"""

from __future__ import annotations

import math

MAX_ORDER = 200
MAX_ARGUMENT = 100.0

_SERIES_CUTOFF = 1e-8
_RESCALE_LIMIT = 1e250


def bessel_jn(order: int, x: float) -> float:
    """J_order(x) for integer order, accurate to 1e-12 on the supported window."""
    if abs(order) > MAX_ORDER:
        raise ValueError(f"|order| must not exceed {MAX_ORDER}")
    if abs(x) > MAX_ARGUMENT:
        raise ValueError(f"|x| must not exceed {MAX_ARGUMENT}")

    # J_{-n}(x) = (-1)^n J_n(x),  J_n(-x) = (-1)^n J_n(x)
    sign = 1.0
    n = order
    if n < 0:
        n = -n
        if n % 2:
            sign = -sign
    if x < 0.0:
        x = -x
        if n % 2:
            sign = -sign

    if x == 0.0:
        return sign if n == 0 else 0.0
    if x < _SERIES_CUTOFF:
        # leading series terms; next correction is O((x/2)^4) < 1e-33 relative
        half = 0.5 * x
        lead = 1.0
        for k in range(1, n + 1):
            lead *= half / k  # (x/2)^n / n! without huge intermediates
        return sign * lead * (1.0 - half * half / (n + 1))

    # start above both the order and the turning point (index ~ x), deep in the
    # regime where J decays, so the downward recurrence locks onto it
    start = max(n, math.ceil(x)) + 20 + int(6.0 * math.sqrt(max(n, x)))
    if start % 2:
        start += 1

    j_above = 0.0  # J at index k+1
    j_here = 1e-30  # J at index k
    even_sum = 0.0  # accumulates 2 * sum of even-order values (order >= 2)
    result = 0.0
    for k in range(start, 0, -1):
        j_below = (2.0 * k / x) * j_here - j_above
        j_above = j_here
        j_here = j_below  # now J at index k-1
        if abs(j_here) > _RESCALE_LIMIT:
            j_here *= 1e-250
            j_above *= 1e-250
            even_sum *= 1e-250
            result *= 1e-250
        idx = k - 1
        if idx == n:
            result = j_here
        if idx > 0 and idx % 2 == 0:
            even_sum += 2.0 * j_here
    norm = even_sum + j_here  # j_here is now the unnormalized J_0
    return sign * result / norm
