"""Hotelling linear-city demand layer.

Consumers sit uniformly on [0, 1]; the innovative equipment (IPTE) is located
at 0 and the traditional one (TPTE) at 1. The indifferent consumer splits the
market, and the split times each firm's margin gives the profits that feed the
evolutionary game.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameterError


class FormulaMode(str, Enum):
    """How the indifference point is computed.

    CORRECTED solves U1(X) = U2(X) exactly, which puts ``+T`` in the numerator.
    PAPER_VERBATIM keeps the ``-T`` printed in the original formula, for
    reproducing published numbers.
    """

    CORRECTED = "corrected"
    PAPER_VERBATIM = "paper-verbatim"


@dataclass(frozen=True)
class DemandParams:
    T: float
    p1: float
    p2: float
    P1: float
    P2: float
    C1: float
    C2: float
    V1: float = 0.0
    V2: float = 0.0
    q: float = 0.0
    e1: float = 0.0
    e2: float = 0.0
    h1: float = 0.0
    mu1: float = 0.0
    assume_equal_base_value: bool = True

    def __post_init__(self) -> None:
        for name in ("T", "p1", "p2", "P1", "P2", "C1", "C2", "V1", "V2", "q", "e1", "e2", "h1", "mu1"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be finite, got {value!r}")
        if self.T <= 0:
            raise InvalidParameterError(f"T must be > 0, got {self.T!r}")
        for name in ("q", "h1", "mu1", "p1", "p2", "P1", "P2", "C1", "C2"):
            if getattr(self, name) < 0:
                raise InvalidParameterError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if self.assume_equal_base_value and self.V1 != self.V2:
            raise InvalidParameterError(
                f"V1 ({self.V1!r}) != V2 ({self.V2!r}) while assume_equal_base_value is on"
            )


@dataclass(frozen=True)
class MarketOutcome:
    x_star_raw: float
    x_star: float
    share_new: float
    share_traditional: float
    pi1: float
    pi2: float
    clamped: bool
    # T*X < T*(1-X): consumers find the new equipment less inconvenient at the split
    inconvenience_asymmetry: bool


def utility_new(params: DemandParams, X: float) -> float:
    """Utility of a consumer at location X who buys the innovative equipment."""
    return params.V1 - params.p1 + params.q * params.e1 - params.T * X + params.h1 * params.mu1


def utility_traditional(params: DemandParams, X: float) -> float:
    """Utility of a consumer at location X who buys the traditional equipment."""
    return params.V2 - params.p2 + params.q * params.e2 - params.T * (1.0 - X)


def indifference_point(
    params: DemandParams, mode: FormulaMode | str = FormulaMode.CORRECTED
) -> tuple[float, float]:
    """Location of the consumer indifferent between the two technologies.

    Returns ``(x_star_raw, x_star)`` where ``x_star`` is the raw value clamped
    to [0, 1]. With ``assume_equal_base_value`` off, a ``V1 - V2`` term enters
    the numerator.
    """
    mode = FormulaMode(mode)
    if params.T <= 0:
        raise InvalidParameterError(f"T must be > 0, got {params.T!r}")
    numerator = (params.p2 - params.p1) + params.q * (params.e1 - params.e2) + params.h1 * params.mu1
    if not params.assume_equal_base_value:
        numerator += params.V1 - params.V2
    numerator += params.T if mode is FormulaMode.CORRECTED else -params.T
    raw = numerator / (2.0 * params.T)
    return raw, min(max(raw, 0.0), 1.0)


def market_outcome(
    params: DemandParams, mode: FormulaMode | str = FormulaMode.CORRECTED
) -> MarketOutcome:
    raw, x_star = indifference_point(params, mode)
    share_traditional = 1.0 - x_star
    return MarketOutcome(
        x_star_raw=raw,
        x_star=x_star,
        share_new=x_star,
        share_traditional=share_traditional,
        pi1=(params.P1 - params.C1) * x_star,
        pi2=(params.P2 - params.C2) * share_traditional,
        clamped=raw != x_star,
        inconvenience_asymmetry=params.T * x_star < params.T * share_traditional,
    )
