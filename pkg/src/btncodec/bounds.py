"""Closed-form size and width bounds for threshold decoders."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import code_length
from .perfect import optimal_B


def lower_bound(n: int, D: int, d: int) -> float:
    """sqrt((D-1)/(3d)) * sqrt(n): no perfect decoder for every set is smaller."""
    if n < 0 or D < 1 or d < 1:
        raise ValueError("need n >= 0, D >= 1, d >= 1")
    return math.sqrt((D - 1) / (3 * d)) * math.sqrt(n)


def lower_bound_meaningful(n: int, D: int, d: int) -> bool:
    """True when the bound is at least D, the output-layer size alone."""
    return (D - 1) * n >= 3 * d * D * D


def size_meets_lower_bound(size: int, n: int, D: int, d: int) -> bool:
    """Exact test of size >= sqrt((D-1)/(3d)) * sqrt(n) by comparing squares."""
    return 3 * d * size * size >= (D - 1) * n


def lower_bound_applicable(D: int, d: int) -> bool:
    return 3 * d <= D - 1


def counting_inequality(N: int, n: int, d: int, D: int) -> bool:
    """N + d*N^2 > n(D-1)/3, evaluated in integers."""
    if min(N, n, d, D) < 0:
        raise ValueError("arguments must be nonnegative")
    return 3 * (N + d * N * N) > n * (D - 1)


def perfect_width(n: int, D: int, B: int) -> int:
    if B < 2:
        raise ValueError(f"perfect width needs B >= 2, got {B}")
    return max(-(-n // B) + B, B * D)


def approx_width(n: int, D: int, B: int) -> int:
    if B < 3:
        raise ValueError(f"approximate width needs B >= 3, got {B}")
    return max(-(-n // B) + B, (B - 1) * D + 1)


def width_formulas(n: int, D: int, B: int) -> tuple[int, int | None]:
    """(perfect width, approximate width); the latter is None for B = 2."""
    return perfect_width(n, D, B), approx_width(n, D, B) if B >= 3 else None


def perfect_size(n: int, D: int, B: int) -> int:
    """Node count of the single-gamma-layer perfect decoder (B a power of two)."""
    return -(-n // B) + B + B * D + D


def approx_error_bound(n: int, D: int, B: int) -> Fraction:
    """D * (1/(B*2^B) + 1/n) as an exact rational."""
    return D * (Fraction(1, B * 2**B) + Fraction(1, n))


@dataclass(frozen=True)
class BoundsReport:
    n: int
    D: int
    d: int
    B: int
    lower_bound: float
    meaningful: bool
    perfect_width: int
    approx_width: int | None
    perfect_size: int
    counting_lhs: int
    counting_rhs: Fraction
    counting_holds: bool
    applicable: bool

    def lines(self) -> list[str]:
        def fmt(v):
            if isinstance(v, bool):
                return str(int(v))
            if isinstance(v, float):
                return f"{v:.12g}"
            if v is None:
                return "-"
            return str(v)

        return [f"{k}={fmt(v)}" for k, v in self.__dict__.items()]


def bounds_report(n: int, D: int, d: int | None = None, B: int | None = None) -> BoundsReport:
    if d is None:
        d = code_length(n)
    if B is None:
        B = optimal_B(n, D) if n > D else 2
    N = perfect_size(n, D, B)
    return BoundsReport(
        n=n,
        D=D,
        d=d,
        B=B,
        lower_bound=lower_bound(n, D, d),
        meaningful=lower_bound_meaningful(n, D, d),
        perfect_width=perfect_width(n, D, B),
        approx_width=approx_width(n, D, B) if B >= 3 else None,
        perfect_size=N,
        counting_lhs=N + d * N * N,
        counting_rhs=Fraction(n * (D - 1), 3),
        counting_holds=counting_inequality(N, n, d, D),
        applicable=lower_bound_applicable(D, d),
    )
