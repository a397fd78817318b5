"""Arithmetic on the extended real line [-inf, +inf].

Values are plain Python floats; the IEEE infinities stand for the two
points at infinity.  Every helper here refuses to produce NaN, raising
:class:`IndeterminateSum` instead, so that a bad path fails loudly rather
than poisoning a later infimum or supremum.
"""

from __future__ import annotations

import math
from typing import Iterable

from .errors import IndeterminateSum, InvalidParam

ExtReal = float

INF = math.inf
NINF = -math.inf


def as_ext(value) -> ExtReal:
    """Coerce ``value`` to an extended real, rejecting NaN."""
    v = float(value)
    if math.isnan(v):
        raise IndeterminateSum("NaN is not an extended real")
    return v


def ext_add(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended addition; ``inf + (-inf)`` raises :class:`IndeterminateSum`."""
    if (a == INF and b == NINF) or (a == NINF and b == INF):
        raise IndeterminateSum("inf + (-inf) is undefined")
    return as_ext(a + b)


def ext_sum(values: Iterable[ExtReal]) -> ExtReal:
    """Left fold of :func:`ext_add`; the empty sum is 0."""
    total = 0.0
    for v in values:
        total = ext_add(total, as_ext(v))
    return total


def ext_neg(a: ExtReal) -> ExtReal:
    return -as_ext(a)


def ext_mul(a: ExtReal, b: ExtReal) -> ExtReal:
    """Extended product.  ``0 * (+-inf)`` is not used anywhere and raises."""
    a, b = as_ext(a), as_ext(b)
    if (a == 0.0 and math.isinf(b)) or (b == 0.0 and math.isinf(a)):
        raise IndeterminateSum("0 * inf is undefined")
    return a * b


def ext_inf(values: Iterable[ExtReal]) -> ExtReal:
    """Infimum under the total order; the infimum of nothing is +inf."""
    return min((as_ext(v) for v in values), default=INF)


def ext_sup(values: Iterable[ExtReal]) -> ExtReal:
    """Supremum under the total order; the supremum of nothing is -inf."""
    return max((as_ext(v) for v in values), default=NINF)


def ext_exp(a: ExtReal) -> ExtReal:
    """``exp`` with ``exp(-inf) = 0`` and ``exp(+inf) = +inf``."""
    a = as_ext(a)
    if a == NINF:
        return 0.0
    try:
        return math.exp(a)
    except OverflowError:
        return INF


def format_ext(value: ExtReal, digits: int = 12) -> str:
    """Render as ``"inf"``, ``"-inf"`` or a decimal literal."""
    v = as_ext(value)
    if v == INF:
        return "inf"
    if v == NINF:
        return "-inf"
    return f"{v:.{digits}g}"


def parse_ext(text: str) -> ExtReal:
    s = text.strip().lower()
    if s in ("inf", "+inf", "infinity", "+infinity"):
        return INF
    if s in ("-inf", "-infinity"):
        return NINF
    try:
        return as_ext(float(s))
    except (ValueError, IndeterminateSum) as exc:
        raise InvalidParam(f"not an extended real: {text!r}") from exc
