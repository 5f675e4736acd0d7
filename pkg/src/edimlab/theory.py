"""Closed-form quantities for (edge) metric dimension of G(n, p) with constant p.

Natural logarithms throughout. The ratios ``log n / log(1/q)`` do not depend
on the base, but ``eps = 3 log log n / log n`` does; base e is fixed here and
reported as ``log_base = "e"`` in JSON output.

Glossary of the returned quantities:

q          probability a random vertex does not distinguish a random
           disjoint edge pair, ``1 - 2p(1-p)^2(2-p)``
Q          vertex analogue, ``p^2 + (1-p)^2``
s_p        probability a random vertex fails on two disjoint-edge pairs
           sharing exactly one vertex
eps, r     lower-bound exponent slack and the (real) landmark count
mu, Delta, delta
           Suen's-inequality terms at leading order
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import config

MIN_N_EPS = 16


def _check_p(p: float, *, open_interval: bool = False) -> float:
    p = float(p)
    if open_interval:
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
    elif not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def _check_n(n: float, lo: int) -> float:
    if isinstance(n, bool) or not isinstance(n, (int, float)) or not math.isfinite(n) or n < lo:
        raise ValueError(f"n must be a number >= {lo}, got {n!r}")
    return n


def q_of(p: float) -> float:
    p = _check_p(p)
    return 1.0 - 2.0 * p * (1.0 - p) ** 2 * (2.0 - p)


def bigQ_of(p: float) -> float:
    p = _check_p(p)
    return p * p + (1.0 - p) ** 2


def s_of(p: float) -> float:
    p = _check_p(p)
    same_edge_dist = (1.0 - p) ** 3 + p * p * (2.0 - p)
    return (1.0 - p) * same_edge_dist**2 + p**3 * (2.0 - p) ** 2


def edim_asymptotic(n: float, p: float) -> float:
    """Leading term ``4 ln n / ln(1/q)`` of edim(G(n, p))."""
    n = _check_n(n, 2)
    p = _check_p(p, open_interval=True)
    return 4.0 * math.log(n) / -math.log(q_of(p))


def dim_asymptotic(n: float, p: float) -> float:
    """Leading term ``2 ln n / ln(1/Q)`` of dim(G(n, p))."""
    n = _check_n(n, 2)
    p = _check_p(p, open_interval=True)
    return 2.0 * math.log(n) / -math.log(bigQ_of(p))


def eps_of(n: float) -> float:
    n = _check_n(n, MIN_N_EPS)
    ln = math.log(n)
    return 3.0 * math.log(ln) / ln


def r_of(n: float, p: float) -> float:
    """Real-valued lower-bound set size ``(4 - eps) ln n / ln(1/q)``; materialize with ``ceil``."""
    eps = eps_of(n)
    p = _check_p(p, open_interval=True)
    return (4.0 - eps) * math.log(n) / -math.log(q_of(p))


def q_pow_r(n: float, p: float) -> float:
    return q_of(p) ** r_of(n, p)


def _log_q_pow_r(n: float, p: float) -> float:
    return r_of(n, p) * math.log(q_of(p))


def mu_of(n: float, p: float) -> float:
    """``n^4 p^2 q^r / 8``, evaluated in log space so huge n does not overflow."""
    return math.exp(4 * math.log(n) + 2 * math.log(p) + _log_q_pow_r(n, p) - math.log(8.0))


def mu_closed_form(n: float, p: float) -> float:
    """``p^2 n^eps / 8``; equal to :func:`mu_of` through ``q^r = n^(eps - 4)``."""
    p = _check_p(p, open_interval=True)
    return p * p * n ** eps_of(n) / 8.0


def suen_terms(n: float, p: float) -> tuple[float, float, float]:
    """Leading-order ``(mu, Delta, delta)``.

    All three are evaluated in log space since powers of n overflow long
    before ``q^r`` or ``s_p^r`` bring them back down.
    """
    p = _check_p(p, open_interval=True)
    n = _check_n(n, MIN_N_EPS)
    r = r_of(n, p)
    mu = mu_of(n, p)
    alt = mu_closed_form(n, p)
    if not math.isclose(mu, alt, rel_tol=1e-9, abs_tol=0.0):
        raise ArithmeticError(f"mu forms disagree: {mu!r} vs {alt!r}")
    log_delta_cap = 4 * math.log(p) + 7 * math.log(n) + r * math.log(s_of(p)) - math.log(16.0)
    delta_cap = math.exp(min(log_delta_cap, 700.0))
    delta_small = math.exp(3 * math.log(n) + 2 * math.log(p) + _log_q_pow_r(n, p))
    return mu, delta_cap, delta_small


@dataclass(frozen=True)
class SuenBound:
    value: float
    exponent: float  # -mu + Delta * exp(2 delta)
    underflow: bool
    union_log: float  # log C(n, ceil(r)) - p^2 n^eps / 16
    expected_count_log: float  # r log n - p^2 n^eps / 16


def log_binomial(n: float, k: int) -> float:
    if k < 0 or k > n:
        return -math.inf
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def suen_bound(n: float, p: float) -> SuenBound:
    """``exp(-mu + Delta e^(2 delta))`` plus the union-bound comparison exponents.

    ``union_log`` is the log of ``C(n, ceil(r)) exp(-p^2 n^eps / 16)``, an
    upper estimate for the expected number of edge generating sets of size
    ``ceil(r)``; ``expected_count_log`` is the cruder ``n^r exp(-p^2 n^eps/16)``.
    Both only become negative for astronomically large n.
    """
    mu, delta_cap, delta_small = suen_terms(n, p)
    exponent = -mu + delta_cap * math.exp(2.0 * delta_small)
    underflow = exponent < config.SUEN_UNDERFLOW_EXPONENT
    value = 0.0 if underflow else math.exp(exponent)
    tail = p * p * n ** eps_of(n) / 16.0
    r = r_of(n, p)
    return SuenBound(
        value=value,
        exponent=exponent,
        underflow=underflow,
        union_log=log_binomial(n, math.ceil(r)) - tail,
        expected_count_log=r * math.log(n) - tail,
    )


def _sig(x: float) -> float:
    return float(f"{x:.{config.JSON_SIG_DIGITS}g}")


@dataclass(frozen=True)
class TheoryParams:
    n: float
    p: float
    q: float
    bigQ: float
    s_p: float
    eps: float
    r: float
    mu: float
    delta_cap: float
    delta_small: float
    edim_asym: float
    dim_asym: float
    suen_bound: float
    log_base: str = "e"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "p": _sig(self.p),
            "q": _sig(self.q),
            "Q": _sig(self.bigQ),
            "s_p": _sig(self.s_p),
            "eps": _sig(self.eps),
            "r": _sig(self.r),
            "mu": _sig(self.mu),
            "Delta": _sig(self.delta_cap),
            "delta": _sig(self.delta_small),
            "edim_asym": _sig(self.edim_asym),
            "dim_asym": _sig(self.dim_asym),
            "suen_bound": _sig(self.suen_bound),
            "log_base": self.log_base,
        }


def theory_params(n: float, p: float) -> TheoryParams:
    p = _check_p(p, open_interval=True)
    n = _check_n(n, MIN_N_EPS)
    mu, delta_cap, delta_small = suen_terms(n, p)
    return TheoryParams(
        n=n,
        p=p,
        q=q_of(p),
        bigQ=bigQ_of(p),
        s_p=s_of(p),
        eps=eps_of(n),
        r=r_of(n, p),
        mu=mu,
        delta_cap=delta_cap,
        delta_small=delta_small,
        edim_asym=edim_asymptotic(n, p),
        dim_asym=dim_asymptotic(n, p),
        suen_bound=suen_bound(n, p).value,
    )
