"""Weighted polygamy bound arithmetic.

Given a profile (E_0, ..., E_{N-1}) of pairwise assisted-entanglement values
and an exponent beta in [0, 1], three competing upper bounds on the
one-vs-rest quantity ``E^beta`` are evaluated:

* ``kim_bound``:   sum_j beta^{w(j)} E_j^beta, with w(j) the Hamming weight
  of the index j (the baseline weighted bound);
* ``thm1_bound``:  the same sum with beta replaced by the sharper factor
  f(beta, k) = ((1+k)^beta - 1) / k^beta, valid when the profile decays
  geometrically, E_{j+1} <= k E_j, for some k in (0, 1];
* ``thm2_bound``:  sum_j f(beta, k)^j E_j^beta (position-indexed exponent),
  valid under the stronger tail condition k E_i >= sum_{j>i} E_j.

Since w(j) <= j and f <= 2^beta - 1 <= beta, the chain
``thm2 <= thm1 <= kim`` holds wherever the conditions do.

Power convention: ``x^0 := 0`` when ``x == 0`` for profile entries and for
the left-hand side (a subsystem with zero entanglement contributes nothing),
while weight factors use the ordinary empty-product rule ``f^0 = 1``.  All
chain inequalities survive at ``beta = 0`` under this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np

from .errors import DomainError, RangeError

VERIFIED = "verified"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not_applicable"

#: Absolute-relative slack used when testing the decay conditions, so that a
#: k obtained from floating-point ratios still satisfies its own condition.
_COND_EPS = 1e-12

#: Default verdict tolerances by profile source.
VERDICT_TOL = {"analytic": 1e-9, "estimated": 1e-3}


def binary_vector(j: int, n: int) -> tuple[int, ...]:
    """LSB-first binary digits (j_0, ..., j_{n-1}) with j = sum j_i 2^i."""
    j = int(j)
    n = int(n)
    if j < 0 or n < 0:
        raise RangeError("binary_vector needs j >= 0 and n >= 0")
    if j >= 2**n:
        raise RangeError(f"{j} does not fit in {n} bits")
    return tuple((j >> i) & 1 for i in range(n))


def hamming_weight(j: int) -> int:
    """Number of set bits of a nonnegative integer."""
    j = int(j)
    if j < 0:
        raise RangeError(f"hamming_weight needs j >= 0, got {j}")
    return j.bit_count()


def powb(x: float, beta: float) -> float:
    """x**beta with the convention 0**0 := 0 (for measure values)."""
    if x < 0.0:
        raise DomainError(f"powb needs x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    return float(x**beta)


def _check_beta_k(beta: float, k: float) -> None:
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta}")
    if not 0.0 < k <= 1.0:
        raise DomainError(f"k must lie in (0, 1], got {k}")


def weight_factor(beta: float, k: float = 1.0) -> float:
    """The sharpened weight ((1+k)^beta - 1) / k^beta.

    Lies in [0, 1]; equals 2^beta - 1 at k = 1, equals 1 at beta = 1 and 0
    at beta = 0, and is non-decreasing in k at fixed beta.
    """
    _check_beta_k(beta, k)
    return float(((1.0 + k) ** beta - 1.0) / k**beta)


def lemma1_residual(x: float, beta: float, k: float = 1.0) -> float:
    """Residual RHS - LHS of (1+x)^beta <= 1 + f(beta,k) x^beta on 0 <= x <= k.

    Nonnegative on the whole domain, zero at x = 0 and x = k.
    """
    _check_beta_k(beta, k)
    if not 0.0 <= x <= k:
        raise DomainError(f"x must lie in [0, k={k}], got {x}")
    return 1.0 + weight_factor(beta, k) * powb(x, beta) - (1.0 + x) ** beta


def _as_profile_values(values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DomainError("profile must contain at least one value")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("profile values must be finite and nonnegative")
    return arr


def check_condition_thm1(values: Sequence[float], k: float) -> bool:
    """Geometric decay: E_{j+1} <= k E_j for every consecutive pair."""
    _check_beta_k(0.0, k)
    arr = _as_profile_values(values)
    for a, b in zip(arr[:-1], arr[1:]):
        if b > k * a + _COND_EPS * max(1.0, a):
            return False
    return True


def check_condition_thm2(values: Sequence[float], k: float) -> bool:
    """Tail domination: k E_i >= sum_{j>i} E_j for i = 0, ..., N-2."""
    _check_beta_k(0.0, k)
    arr = _as_profile_values(values)
    for i in range(arr.size - 1):
        tail = float(arr[i + 1 :].sum())
        if tail > k * arr[i] + _COND_EPS * max(1.0, arr[i]):
            return False
    return True


def optimal_k_thm1(values: Sequence[float]) -> Optional[float]:
    """Smallest k in (0, 1] satisfying the geometric-decay condition.

    This is the largest consecutive ratio E_{j+1} / E_j.  Pairs whose second
    entry is zero impose nothing; a zero followed by a positive value makes
    every k infeasible (None).  If no pair constrains k (all-zero tail or a
    single entry), k = 1 by convention.
    """
    arr = _as_profile_values(values)
    best = 0.0
    for a, b in zip(arr[:-1], arr[1:]):
        if b == 0.0:
            continue
        if a == 0.0:
            return None
        best = max(best, float(b / a))
    if best == 0.0:
        return 1.0
    return best if best <= 1.0 else None


def optimal_k_thm2(values: Sequence[float]) -> Optional[float]:
    """Smallest k in (0, 1] satisfying the tail-domination condition."""
    arr = _as_profile_values(values)
    best = 0.0
    for i in range(arr.size - 1):
        tail = float(arr[i + 1 :].sum())
        if tail == 0.0:
            continue
        if arr[i] == 0.0:
            return None
        best = max(best, tail / float(arr[i]))
    if best == 0.0:
        return 1.0
    return best if best <= 1.0 else None


def kim_bound(values: Sequence[float], beta: float) -> float:
    """Baseline weighted bound sum_j beta^{hamming(j)} E_j^beta."""
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must lie in [0, 1], got {beta}")
    arr = _as_profile_values(values)
    return float(sum(beta ** hamming_weight(j) * powb(e, beta) for j, e in enumerate(arr)))


def thm1_bound(values: Sequence[float], beta: float, k: float = 1.0) -> float:
    """Hamming-weight bound with the sharpened factor f(beta, k)."""
    f = weight_factor(beta, k)
    arr = _as_profile_values(values)
    return float(sum(f ** hamming_weight(j) * powb(e, beta) for j, e in enumerate(arr)))


def thm2_bound(values: Sequence[float], beta: float, k: float = 1.0) -> float:
    """Position-indexed bound sum_j f(beta, k)^j E_j^beta."""
    f = weight_factor(beta, k)
    arr = _as_profile_values(values)
    return float(sum(f**j * powb(e, beta) for j, e in enumerate(arr)))


@dataclass(frozen=True)
class BoundParams:
    """(beta, k) pair with the domain checks applied once."""

    beta: float
    k: float = 1.0

    def __post_init__(self):
        _check_beta_k(self.beta, self.k)


@dataclass(frozen=True)
class EntanglementProfile:
    """Ordered pairwise values E_0, ..., E_{N-1} plus their provenance.

    ``source`` records whether the values are exact ("analytic") or
    optimizer lower bounds ("estimated"); verdicts are weaker for the
    latter.  ``permutation`` is the reordering applied by descending sort,
    when one was.
    """

    values: tuple[float, ...]
    source: Literal["analytic", "estimated"] = "analytic"
    permutation: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        arr = _as_profile_values(self.values)
        if self.source not in VERDICT_TOL:
            raise DomainError(f"unknown profile source {self.source!r}")
        object.__setattr__(self, "values", tuple(float(v) for v in arr))

    def __len__(self) -> int:
        return len(self.values)

    def sorted_descending(self) -> "EntanglementProfile":
        """Descending copy with the permutation recorded (stable sort)."""
        order = tuple(int(i) for i in np.argsort(-np.asarray(self.values), kind="stable"))
        if order == tuple(range(len(self.values))):
            return self
        return EntanglementProfile(
            tuple(self.values[i] for i in order), self.source, order
        )


def as_profile(values, source: str = "analytic") -> EntanglementProfile:
    """Coerce a sequence (or pass through a profile) to :class:`EntanglementProfile`."""
    if isinstance(values, EntanglementProfile):
        return values
    return EntanglementProfile(tuple(float(v) for v in values), source)


@dataclass(frozen=True)
class BoundReport:
    """One full evaluation of the competing bounds at a given beta.

    ``verdict`` is ``verified`` when the left-hand side is below the
    tightest applicable bound, ``inconclusive`` when the check fails (which
    for estimated profiles proves nothing, since estimates under-approximate
    the true right-hand side), and ``not_applicable`` when no feasible k
    exists.  ``k_used`` is NaN in the last case.
    """

    beta: float
    k_used: float
    lhs_pow: float
    sum_pow: float
    bound_kim: float
    bound_thm1: float
    bound_thm2: float
    cond_thm1: bool
    cond_thm2: bool
    verdict: str

    @property
    def tightest_applicable(self) -> float:
        """Smallest bound whose condition holds; NaN if none."""
        candidates = []
        if self.cond_thm1:
            candidates.append(self.bound_thm1)
        if self.cond_thm2:
            candidates.append(self.bound_thm2)
        return min(candidates) if candidates else math.nan

    @property
    def residual(self) -> float:
        """Slack tightest_applicable - lhs_pow (NaN when not applicable)."""
        return self.tightest_applicable - self.lhs_pow

    @property
    def gap_thm1(self) -> float:
        return self.bound_thm1 - self.lhs_pow

    @property
    def gap_kim(self) -> float:
        return self.bound_kim - self.lhs_pow


def evaluate_bounds(
    lhs: float,
    profile,
    beta: float,
    k_override: Optional[float] = None,
    sort: bool = True,
    tol: Optional[float] = None,
) -> BoundReport:
    """Evaluate all bounds on a profile and classify the outcome.

    ``lhs`` is the one-vs-rest measure value (before raising to beta).  By
    default the profile is sorted descending first, which is always the
    arrangement the decay condition prefers, and k is the smallest feasible
    value; pass ``k_override`` or ``sort=False`` to probe other regimes.
    ``tol`` defaults to 1e-9 for analytic profiles and 1e-3 for estimated
    ones.
    """
    if lhs < 0.0 or not math.isfinite(lhs):
        raise DomainError(f"lhs must be finite and >= 0, got {lhs}")
    prof = as_profile(profile)
    if sort:
        prof = prof.sorted_descending()
    values = prof.values
    if tol is None:
        tol = VERDICT_TOL[prof.source]

    if k_override is not None:
        _check_beta_k(beta, k_override)
        k = float(k_override)
        feasible = True
    else:
        k_opt = optimal_k_thm1(values)
        feasible = k_opt is not None
        k = k_opt if feasible else 1.0

    lhs_pow = powb(lhs, beta)
    sum_pow = powb(float(sum(values)), beta)
    report_kw = dict(
        beta=float(beta),
        k_used=k if feasible else math.nan,
        lhs_pow=lhs_pow,
        sum_pow=sum_pow,
        bound_kim=kim_bound(values, beta),
        bound_thm1=thm1_bound(values, beta, k),
        bound_thm2=thm2_bound(values, beta, k),
        cond_thm1=check_condition_thm1(values, k),
        cond_thm2=check_condition_thm2(values, k),
    )
    if not feasible:
        return BoundReport(verdict=NOT_APPLICABLE, **report_kw)

    candidates = []
    if report_kw["cond_thm1"]:
        candidates.append(report_kw["bound_thm1"])
    if report_kw["cond_thm2"]:
        candidates.append(report_kw["bound_thm2"])
    if not candidates:
        return BoundReport(verdict=NOT_APPLICABLE, **report_kw)
    verdict = VERIFIED if lhs_pow <= min(candidates) + tol else INCONCLUSIVE
    return BoundReport(verdict=verdict, **report_kw)
