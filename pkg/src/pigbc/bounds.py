"""Published capacity bounds for phase-insensitive Gaussian channels.

All values are in bits per channel use. ``math.inf`` marks an unbounded
value (identity channel, noiseless amplifier with the twist bound, ...).
For additive-noise channels (``x == 1``) the attenuator and amplifier
formulas are evaluated as the one-sided limits ``x -> 1-`` and ``x -> 1+``
and both are reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .channel import Channel
from .errors import DomainError
from .regions import m_ad, m_eb

__all__ = [
    "LOG2E",
    "h",
    "plob_upper",
    "plob_att",
    "plob_amp",
    "plob_additive",
    "exact_m0",
    "twist_upper",
    "degext_att_upper",
    "degext_amp_upper",
    "degext_additive_from_att",
    "degext_composite",
    "lower_q2_k",
    "lower_q",
    "zero_predicates",
    "BoundEntry",
    "BoundReport",
    "report",
]

LOG2E = math.log2(math.e)
LN2 = math.log(2.0)


def _tail(x):
    """``x log2(1 + 1/x)`` for ``x >= 0`` (0 at 0), accurate for tiny and huge ``x``."""
    safe = np.where(x > 0, x, 1.0)
    big = safe >= 1.0
    out = np.where(big, safe * np.log1p(1.0 / np.maximum(safe, 1.0)), safe * (np.log1p(safe) - np.log(safe)))
    return np.where(x > 0, out / LN2, 0.0)


def h(x):
    """Entropy of a thermal state with mean photon number ``x``: ``(x+1)log2(x+1) - x log2 x``.

    Accepts scalars or arrays; ``h(0) == 0``. Evaluated as
    ``log2(1+x) + x log2(1 + 1/x)``, which stays accurate for large ``x``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError("h is defined for x >= 0")
    out = np.log1p(arr) / LN2 + _tail(arr)
    return float(out) if out.ndim == 0 else out


# --- PLOB ---------------------------------------------------------------


def plob_att(eta: float, N: float) -> float:
    # eta**N folded into the log to avoid underflow
    if eta == 0:
        return 0.0 if N == 0 else -math.inf
    return -h(N) - math.log2(1.0 - eta) - N * math.log2(eta)


def plob_amp(g: float, N: float) -> float:
    return -h(N) + (N + 1.0) * math.log2(g) - math.log2(g - 1.0)


def plob_additive(M: float) -> float:
    """Common limit of both PLOB branches at ``x = 1``: ``M log2 e - log2(e M)``."""
    if M == 0:
        return math.inf
    return M * LOG2E - math.log2(math.e * M)


def plob_upper(c: Channel) -> Tuple[float, bool]:
    """Two-way / secret-key upper bound; not claimed strictly inside the EB set."""
    applicable = c.M <= m_eb(c.x)
    if c.x < 1:
        value = plob_att(c.x, c.M / (1.0 - c.x))
    elif c.x > 1:
        value = plob_amp(c.x, c.M / (c.x - 1.0))
    else:
        value = plob_additive(c.M)
    return value, applicable


# --- exact values at M = 0 ----------------------------------------------------


def exact_m0(c: Channel) -> Tuple[float, float]:
    """``(Q = P, K = Q2)`` of a noiseless channel ``(x, 0)``."""
    if c.M != 0:
        raise DomainError("exact capacities are only known for M = 0")
    if c.x == 1:
        raise DomainError("the identity channel has unbounded capacity")
    if c.x == 0:
        return 0.0, 0.0
    q = max(0.0, math.log2(c.x / abs(1.0 - c.x)))
    k = math.log2(max(1.0, c.x) / abs(1.0 - c.x))
    return q, k


# --- twist bound -------------------------------------------------------------


def twist_upper(c: Channel) -> Tuple[float, bool]:
    """Bound from splitting the channel into an amplifier followed by a pure-loss attenuator.

    Applicable outside the AD set (``M <= min(x - 1/2, 1/2)``); vanishes on
    the AD border.
    """
    x, M = c.x, c.M
    applicable = x >= 0.5 and M <= min(x - 0.5, 0.5)
    if not applicable:
        return math.nan, False
    if x <= 1:
        num, den = x - M, 1.0 - x + M
    else:
        num, den = 1.0 - M, M
    if den == 0:
        return math.inf, True
    return math.log2(num / den), True


# --- degradable-extension bounds -----------------------------------------------------------------


def degext_att_upper(eta, N, loss=None):
    """Degradable-extension bound for the attenuator ``E(eta, N)``; zero for ``eta <= 1/2``.

    ``loss`` optionally supplies ``1 - eta`` computed without cancellation
    (callers approaching ``eta -> 1``). The bound is evaluated as
    ``h((1-eta)N) - log2((1-eta)N + (1-eta)/eta) - eta N log2(1 + 1/(eta N))``,
    which avoids the difference of two large entropies. Vectorised.
    """
    eta_a = np.asarray(eta, dtype=float)
    n_a = np.asarray(N, dtype=float)
    om = 1.0 - eta_a if loss is None else np.asarray(loss, dtype=float)
    if np.any(eta_a < 0) or np.any(om <= 0):
        raise DomainError("degext_att_upper needs 0 <= eta < 1")
    if np.any(n_a < 0):
        raise DomainError("degext_att_upper needs N >= 0")
    upper = eta_a > 0.5
    e = np.where(upper, eta_a, 0.75)
    o = np.where(upper, om, 0.25)
    a = o * n_a
    val = h(a) - np.log2(a + o / e) - _tail(e * n_a)
    out = np.where(upper, np.maximum(val, 0.0), 0.0)
    return float(out) if out.ndim == 0 else out


def degext_amp_upper(Mk):
    """Bound for amplifiers with ``(g - 1) N = Mk``; ``inf`` at ``Mk = 0``."""
    m = np.asarray(Mk, dtype=float)
    if np.any(m < 0):
        raise DomainError("degext_amp_upper needs Mk >= 0")
    with np.errstate(divide="ignore"):
        out = -np.log2(np.e * m) + 2.0 * h((np.sqrt(m * m + 1.0) - 1.0) / 2.0)
    return float(out) if out.ndim == 0 else out


def degext_additive_from_att(M: float) -> float:
    """Limit ``x -> 1-`` of the attenuator degradable-extension bound at fixed ``M``: ``h(M) - log2(e M)``."""
    if M == 0:
        return math.inf
    return h(M) - math.log2(math.e * M)


def degext_composite(x: float, M: float) -> float:
    """Degradable-extension bound in the ``(x, M)`` plane: attenuator form below ``x = 1``, amplifier form from 1 on."""
    if x < 1:
        return degext_att_upper(x, M / (1.0 - x))
    return degext_amp_upper(M)


# --- lower bounds ----------------------------------------------------------------


def lower_q2_k(c: Channel) -> float:
    x, M = c.x, c.M
    if x < 1:
        N = M / (1.0 - x)
        return max(0.0, -h(N) - math.log2(1.0 - x))
    if x > 1:
        N = M / (x - 1.0)
        return max(0.0, -h(N) + math.log2(x / (x - 1.0)))
    if M == 0:
        return math.inf
    return max(0.0, -math.log2(math.e * M))


def lower_q(c: Channel) -> Tuple[float, bool]:
    """Coherent-information lower bound on ``Q``; the flag is True for the extrapolated amplifier form."""
    x, M = c.x, c.M
    if x < 1:
        if x == 0:
            return 0.0, False
        N = M / (1.0 - x)
        return max(0.0, math.log2(x / (1.0 - x)) - h(N)), False
    if x > 1:
        N = M / (x - 1.0)
        return max(0.0, math.log2(x / (x - 1.0)) - h(N)), True
    if M == 0:
        return math.inf, False
    return max(0.0, -math.log2(math.e * M)), False


def zero_predicates(c: Channel) -> Tuple[bool, bool]:
    """``(zero_all, zero_qp)``: EB zeroes every capacity, AD zeroes ``Q`` and ``P``."""
    return c.M >= m_eb(c.x), c.M >= m_ad(c.x)


# --- report ----------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEntry:
    name: str
    value: float
    applicable: bool
    side: str  # "upper" | "lower" | "exact"
    extrapolated: bool = False

    @property
    def unbounded(self) -> bool:
        return math.isinf(self.value)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": None if (self.unbounded or math.isnan(self.value)) else self.value,
            "unbounded": self.unbounded,
            "applicable": self.applicable,
            "side": self.side,
            "extrapolated": self.extrapolated,
        }


@dataclass(frozen=True)
class BoundReport:
    channel: Channel
    k_q2: List[BoundEntry]
    q_p: List[BoundEntry]
    best_upper_q: float
    best_lower_q: float
    zero_q: bool
    zero_all: bool
    additive: bool = False

    def entry(self, capacity: str, name: str) -> Optional[BoundEntry]:
        entries = self.q_p if capacity == "Q" else self.k_q2
        for e in entries:
            if e.name == name:
                return e
        return None

    def as_dict(self) -> dict:
        def num(v):
            return None if math.isinf(v) else v

        return {
            "channel": self.channel.as_dict(),
            "additive_noise": self.additive,
            "K_Q2": [e.as_dict() for e in self.k_q2],
            "Q_P": [e.as_dict() for e in self.q_p],
            "best_upper_q": num(self.best_upper_q),
            "best_upper_q_unbounded": math.isinf(self.best_upper_q),
            "best_lower_q": num(self.best_lower_q),
            "best_lower_q_unbounded": math.isinf(self.best_lower_q),
            "zero_q": self.zero_q,
            "zero_all": self.zero_all,
        }


def _q_upper_entries(c: Channel) -> List[BoundEntry]:
    x, M = c.x, c.M
    entries = []
    plob, plob_ok = plob_upper(c)
    entries.append(BoundEntry("plob", plob, plob_ok, "upper"))
    tw, tw_ok = twist_upper(c)
    entries.append(BoundEntry("twist", tw, tw_ok, "upper"))
    if x < 1:
        entries.append(BoundEntry("degext_att", degext_att_upper(x, M / (1.0 - x)), True, "upper"))
    elif x > 1:
        # the amplifier degradable-extension bound is only meaningful outside the AD set
        entries.append(BoundEntry("degext_amp", degext_amp_upper(M), M <= 0.5, "upper"))
    else:
        entries.append(BoundEntry("degext_att(x->1-)", degext_additive_from_att(M), True, "upper"))
        entries.append(BoundEntry("degext_amp(x->1+)", degext_amp_upper(M), M <= 0.5, "upper"))
    return entries


def report(c: Channel) -> BoundReport:
    zero_all, zero_q = zero_predicates(c)
    additive = c.x == 1

    k_entries: List[BoundEntry] = []
    plob, plob_ok = plob_upper(c)
    k_entries.append(BoundEntry("plob", plob, plob_ok, "upper"))
    k_entries.append(BoundEntry("lower_q2_k", lower_q2_k(c), True, "lower"))

    q_entries = _q_upper_entries(c)
    low, extrapolated = lower_q(c)
    q_entries.append(BoundEntry("lower_q", low, True, "lower", extrapolated))

    if c.M == 0 and c.x != 1:
        q_exact, k_exact = exact_m0(c)
        k_entries.append(BoundEntry("exact", k_exact, True, "exact"))
        q_entries.append(BoundEntry("exact", q_exact, True, "exact"))

    if zero_q:
        best_upper = 0.0
    else:
        candidates = [e.value for e in q_entries if e.applicable and e.side in ("upper", "exact")]
        best_upper = min(candidates) if candidates else math.inf
    lowers = [
        e.value
        for e in q_entries
        if e.applicable and not e.extrapolated and e.side in ("lower", "exact")
    ]
    best_lower = max([0.0] + lowers)
    if zero_q:
        best_lower = 0.0
    exact = [e.value for e in q_entries if e.side == "exact"]
    if exact and not zero_q:
        # the capacity itself is known; bounds equal to it only add roundoff
        best_upper = best_lower = exact[0]
    return BoundReport(c, k_entries, q_entries, best_upper, best_lower, zero_q, zero_all, additive)
