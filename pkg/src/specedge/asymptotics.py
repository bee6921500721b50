"""Assembly of the resolvent-norm estimate near an order-2 boundary point.

All arithmetic stays in log space; the leading factor is

    log_leading = im_action/h + ln(sqrt(pi)) - (1/2) ln h
                  - (1/4) ln(bracket_plus) - (1/4) ln(-bracket_minus),

carrying a multiplicative (1 + O(h~)) correction with h~ = h/alpha^{3/2}
and an additive floor of order 1/(sqrt(h) alpha^{1/4}).  The estimate is
meaningful in the window h^{2/3}/c0 <= alpha <= c1 (h ln(1/h))^{2/3}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .branches import TurningPair
from .errors import ClassificationError, DomainError
from .symbols import SymbolModel

LOG_SQRT_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class ValidityWindow:
    c0: float
    c1: float
    h: float
    alpha: float
    ok: bool
    reason: str


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Log-space resolvent-norm estimate with correction scale and floor."""

    log_leading: float
    correction_scale: float   # h~ = h / alpha^{3/2}
    floor_log: float          # ln(1/(sqrt(h) alpha^{1/4})), implied constant 1
    branch_tag: Optional[int] = None

    def band(self, kappa: float = 1.0) -> Tuple[float, float]:
        """Heuristic uncertainty band for the unconstanted (1 + O(h~)) factor."""
        w = kappa * self.correction_scale
        return (self.log_leading - w, self.log_leading + w)

    @property
    def log_with_floor(self) -> float:
        """max(leading, floor) semantics for comparisons against numerics."""
        return max(self.log_leading, self.floor_log)

    def norm_display(self) -> str:
        if self.log_leading > 700.0:  # exp overflows double
            return f"exp({self.log_leading:.6g})"
        return repr(math.exp(self.log_leading))


def validity(h: float, alpha: float, c0: float = 10.0, c1: float = 10.0) -> ValidityWindow:
    """Check h^{2/3}/c0 <= alpha <= c1 (h ln(1/h))^{2/3} with h < 1/e."""
    if not (0.0 < h < 1.0):
        raise DomainError(f"h must lie in (0, 1), got {h}")
    if alpha < 0:
        raise DomainError(f"alpha must be nonnegative, got {alpha}")
    if alpha < h ** (2.0 / 3.0) / c0:
        return ValidityWindow(c0, c1, h, alpha, False, "below-elliptic-floor")
    if h >= 1.0 / math.e:
        # ln(1/h) <= 1: the log window degenerates
        return ValidityWindow(c0, c1, h, alpha, False, "beyond-log-window")
    upper = c1 * (h * math.log(1.0 / h)) ** (2.0 / 3.0)
    if alpha > upper:
        return ValidityWindow(c0, c1, h, alpha, False, "beyond-log-window")
    return ValidityWindow(c0, c1, h, alpha, True, "ok")


def assemble_log_leading(im_action: float, h: float,
                         bracket_plus: float, bracket_minus: float) -> float:
    return (im_action / h + LOG_SQRT_PI - 0.5 * math.log(h)
            - 0.25 * math.log(bracket_plus) - 0.25 * math.log(-bracket_minus))


def estimate_single(model: SymbolModel, z: complex, h: float, pair: TurningPair,
                    action_value: float, alpha: float) -> AsymptoticEstimate:
    """Single-branch estimate from a classified pair and its action."""
    if not h > 0:
        raise DomainError(f"h must be positive, got {h}")
    if pair.bracket_plus <= 0 or pair.bracket_minus >= 0:
        raise ClassificationError(
            f"{model.label}: bracket signs ({pair.bracket_plus}, {pair.bracket_minus})"
        )
    if action_value < 0:
        raise DomainError(f"action must be nonnegative inside the range, got {action_value}")
    if alpha <= 0:
        raise DomainError(f"alpha must be positive for the estimate, got {alpha}")
    return AsymptoticEstimate(
        log_leading=assemble_log_leading(action_value, h, pair.bracket_plus, pair.bracket_minus),
        correction_scale=h / alpha ** 1.5,
        floor_log=-0.5 * math.log(h) - 0.25 * math.log(alpha),
        branch_tag=pair.branch_tag,
    )


def estimate_double(model: SymbolModel, z: complex, h: float,
                    pairs_actions: Sequence[Tuple[TurningPair, float]],
                    alphas: Sequence[float], region: str = "both") -> AsymptoticEstimate:
    """Two-branch estimate: branchwise sup of the single displays.

    `region` selects "both" (sup over branches), "only-1" or "only-2".
    The floor uses alpha = max over the contributing branches; ties keep
    the first branch's tag.
    """
    if not pairs_actions:
        raise DomainError("pairs_actions must be nonempty")
    if region == "only-1":
        keep = [0]
    elif region == "only-2":
        keep = [1] if len(pairs_actions) > 1 else [0]
    elif region == "both":
        keep = list(range(len(pairs_actions)))
    else:
        raise DomainError(f"unknown region {region!r}")
    alpha = max(alphas[i] for i in keep)
    best = None
    for i in keep:
        pair, act = pairs_actions[i]
        est = estimate_single(model, z, h, pair, act, alphas[i])
        if best is None or est.log_leading > best.log_leading + 1e-15:
            best = est
    return AsymptoticEstimate(
        log_leading=best.log_leading,
        correction_scale=h / alpha ** 1.5,
        floor_log=-0.5 * math.log(h) - 0.25 * math.log(alpha),
        branch_tag=best.branch_tag,
    )
