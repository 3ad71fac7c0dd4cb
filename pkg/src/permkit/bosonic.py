"""Desk-scale linear-optical sampler: Fock amplitudes, odd cat-state inputs,
enumerated outcome distributions, and the photon-number rejection reduction.

Amplitudes follow the permanent rule <p|U|q> = Per(U_{p,q})/sqrt(p! q!).
A cat input (the odd superposition of +/- alpha coherent states) in the
first n of m modes has closed-form amplitudes given by a 2^n sign sum; the
distribution restricted to total photon number n is proportional to the
single-photon distribution, with proportionality |alpha|^{2n}/sinh^n(|alpha|^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .combinatorics import (
    RepetitionPattern,
    count_weight,
    enumerate_weight,
    factorial_product,
    repeat_matrix,
    weight,
)
from .errors import (
    DimensionMismatch,
    EmptyConditioning,
    TooLarge,
    ZeroAmplitude,
)
from .numerics import UnitaryMatrix, as_array
from .permanents import permanent_ryser
from .rng import bit_generator

FockOutcome = tuple[int, ...]

SUPPORT_BUDGET = 10**6


class _OverflowType:
    """Sentinel outcome carrying the enumerated distribution's truncated mass."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OVERFLOW"


OVERFLOW = _OverflowType()

Outcome = Union[FockOutcome, _OverflowType]


@dataclass(frozen=True)
class CatInputSpec:
    """Cat states of amplitude alpha in the first n of m modes, vacuum elsewhere."""

    alpha: complex
    n: int
    m: int

    def __post_init__(self) -> None:
        if self.alpha == 0:
            raise ZeroAmplitude("cat amplitude must be nonzero")
        if not 0 < self.n <= self.m:
            raise ValueError(f"need 0 < n <= m, got n={self.n}, m={self.m}")
        object.__setattr__(self, "alpha", complex(self.alpha))


@dataclass(frozen=True)
class OutcomeDistribution:
    """Enumerated photon-count distribution plus the mass beyond the cutoff."""

    probs: Mapping[FockOutcome, float]
    cutoff: int
    truncated_mass: float
    tail_bound: Optional[float] = None

    def total_enumerated(self) -> float:
        return float(sum(self.probs.values()))

    def mass_at_weight(self, n: int) -> float:
        return float(sum(v for k, v in self.probs.items() if weight(k) == n))


def tv_distance(p: Mapping[FockOutcome, float], q: Mapping[FockOutcome, float]) -> float:
    """Total variation distance, half the L1 difference over the union support."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def fock_amplitude(u, p: Sequence[int], q: Sequence[int]) -> complex:
    """<p|U|q> = Per(U_{p,q})/sqrt(p! q!); 0 when |p| != |q| (photon conservation)."""
    arr = as_array(u)
    m = arr.shape[0]
    p, q = tuple(int(k) for k in p), tuple(int(k) for k in q)
    if len(p) != m or len(q) != m:
        raise DimensionMismatch("outcome length must equal the mode count")
    if weight(p) != weight(q):
        return 0j
    per = permanent_ryser(repeat_matrix(arr, RepetitionPattern(p, q))).value
    return complex(per) / math.sqrt(factorial_product(p) * factorial_product(q))


def _input_pattern(n: int, m: int) -> FockOutcome:
    return (1,) * n + (0,) * (m - n)


def bs_distribution(u, n: int) -> OutcomeDistribution:
    """Single-photon sampling distribution: P(p) = |Per(U_{p,1+0})|^2 / p! over |p| = n."""
    arr = as_array(u)
    m = arr.shape[0]
    if not 0 <= n <= m:
        raise ValueError(f"need 0 <= n <= m, got n={n}, m={m}")
    if count_weight(m, n) > SUPPORT_BUDGET:
        raise TooLarge("outcome support exceeds the enumeration budget")
    q = _input_pattern(n, m)
    probs: dict[FockOutcome, float] = {}
    for p in enumerate_weight(m, n):
        amp = fock_amplitude(arr, p, q)
        probs[p] = abs(amp) ** 2
    return OutcomeDistribution(probs, cutoff=n, truncated_mass=0.0)


def _power_product(v: np.ndarray, p: FockOutcome) -> complex:
    out = 1.0 + 0.0j
    for vi, pi in zip(v.tolist(), p):
        if pi:
            out *= vi**pi
    return out


def _cat_sign_sum(cols: np.ndarray, p: FockOutcome) -> complex:
    """sum over x in {-1,1}^n of (prod x) * prod_i (cols @ x)_i^{p_i}, Gray-code updates."""
    n = cols.shape[1]
    if (1 << n) * max(n, 1) > 10**7:
        raise TooLarge(f"sign sum over 2^{n} terms exceeds the budget")
    v = cols.sum(axis=1)
    sign = 1
    total = _power_product(v, p)
    xs = [1] * n
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        xs[j] = -xs[j]
        v = v + (2 * xs[j]) * cols[:, j]
        sign = -sign
        total += sign * _power_product(v, p)
    return total


def cat_amplitude(u, spec: CatInputSpec, p: Sequence[int]) -> complex:
    """Amplitude <p|U(cat^n, vacuum^(m-n))> via the closed-form sign sum.

    Zero when |p| < n or |p| - n is odd (each cat mode carries odd photon
    parity); at |p| = n the value is alpha^n/sinh^{n/2}(|alpha|^2) times the
    single-photon amplitude.
    """
    arr = as_array(u)
    m = arr.shape[0]
    p = tuple(int(k) for k in p)
    if len(p) != m:
        raise DimensionMismatch("outcome length must equal the mode count")
    if spec.m != m:
        raise DimensionMismatch("spec mode count must match the unitary dimension")
    n = spec.n
    total = weight(p)
    if total < n or (total - n) % 2 != 0:
        return 0j
    alpha = spec.alpha
    sign_sum = _cat_sign_sum(arr[:, :n], p)
    norm = math.sinh(abs(alpha) ** 2) ** (n / 2.0)
    pf = math.sqrt(factorial_product(p))
    return alpha**total * sign_sum / (norm * 2**n * pf)


def photon_fraction(alpha: complex, n: int) -> float:
    """Probability that n cat inputs carry exactly n photons in total:
    |alpha|^{2n} / sinh^n(|alpha|^2)."""
    if n == 0:
        return 1.0
    if alpha == 0:
        raise ZeroAmplitude("cat amplitude must be nonzero")
    a2 = abs(alpha) ** 2
    return a2**n / math.sinh(a2) ** n


def cat_total_photon_pmf(alpha: complex, n: int, cutoff: int) -> list[float]:
    """Exact input photon-number distribution of n cat modes, up to cutoff.

    Each cat mode carries k photons with probability |alpha|^{2k}/(k! sinh|alpha|^2)
    for odd k; the total is the n-fold convolution.  Since the interferometer
    preserves photon number, this is also the output total-photon marginal.
    """
    a2 = abs(alpha) ** 2
    s = math.sinh(a2)
    per_mode = [0.0] * (cutoff + 1)
    for k in range(1, cutoff + 1, 2):
        per_mode[k] = a2**k / (math.factorial(k) * s)
    conv = [1.0] + [0.0] * cutoff
    for _ in range(n):
        new = [0.0] * (cutoff + 1)
        for tot, ptot in enumerate(conv):
            if ptot == 0.0:
                continue
            for k in range(1, cutoff + 1 - tot, 2):
                new[tot + k] += ptot * per_mode[k]
        conv = new
    return conv


def _cat_total_photon_tail(alpha: complex, n: int, cutoff: int) -> float:
    """Exact P(total input photons > cutoff) for n independent cat modes."""
    return max(0.0, 1.0 - sum(cat_total_photon_pmf(alpha, n, cutoff)))


def cat_distribution(u, spec: CatInputSpec, cutoff: Optional[int] = None) -> OutcomeDistribution:
    """Enumerate cat-input outcome probabilities for |p| <= cutoff.

    Only weights with |p| >= n and |p| = n (mod 2) can occur.  The input
    state itself is never truncated (the amplitudes are closed-form); only
    the output enumeration stops at the cutoff, and the dropped mass is
    reported both empirically (1 - enumerated) and analytically (tail of
    the exact total-photon-number distribution).
    """
    arr = as_array(u)
    m = arr.shape[0]
    if spec.m != m:
        raise DimensionMismatch("spec mode count must match the unitary dimension")
    n = spec.n
    cutoff = n + 6 if cutoff is None else int(cutoff)
    if cutoff < n:
        raise ValueError(f"cutoff {cutoff} below the minimum photon number {n}")
    support = sum(count_weight(m, k) for k in range(n, cutoff + 1, 2))
    if support > SUPPORT_BUDGET:
        raise TooLarge("outcome support exceeds the enumeration budget")
    probs: dict[FockOutcome, float] = {}
    enumerated = 0.0
    for k in range(n, cutoff + 1, 2):
        for p in enumerate_weight(m, k):
            pr = abs(cat_amplitude(arr, spec, p)) ** 2
            probs[p] = pr
            enumerated += pr
    tail = _cat_total_photon_tail(spec.alpha, n, cutoff)
    return OutcomeDistribution(probs, cutoff=cutoff, truncated_mass=max(0.0, 1.0 - enumerated), tail_bound=tail)


def reject_to_fixed_n(dist: OutcomeDistribution, n: int) -> OutcomeDistribution:
    """Condition on |p| = n: P(p) -> P(p) / sum_{|q|=n} P(q)."""
    kept = {p: v for p, v in dist.probs.items() if weight(p) == n}
    mass = sum(kept.values())
    if mass <= 0.0:
        raise EmptyConditioning(f"no enumerated mass at photon number {n}")
    return OutcomeDistribution({p: v / mass for p, v in kept.items()}, cutoff=n, truncated_mass=0.0)


def sample(dist: OutcomeDistribution, count: int, seed: int) -> list[Outcome]:
    """Inverse-CDF sampling; the truncated mass maps to the OVERFLOW sentinel."""
    outcomes: list[Outcome] = list(dist.probs.keys())
    weights = [float(v) for v in dist.probs.values()]
    if dist.truncated_mass > 0.0:
        outcomes.append(OVERFLOW)
        weights.append(dist.truncated_mass)
    cdf = np.cumsum(np.array(weights, dtype=np.float64))
    total = cdf[-1]
    bg = bit_generator(seed)
    u = bg.random_raw(count) * (total / 2.0**64)
    idx = np.searchsorted(cdf, u, side="right")
    idx = np.minimum(idx, len(outcomes) - 1)
    return [outcomes[i] for i in idx]


@dataclass(frozen=True)
class PipelineReport:
    total_samples: int
    kept_samples: int
    kept_fraction: float
    expected_fraction: float
    fraction_stderr: float
    tv_kept_vs_single_photon: float
    support_size: int
    cutoff: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "total_samples": self.total_samples,
            "kept_samples": self.kept_samples,
            "kept_fraction": self.kept_fraction,
            "expected_fraction": self.expected_fraction,
            "fraction_stderr": self.fraction_stderr,
            "tv_kept_vs_single_photon": self.tv_kept_vs_single_photon,
            "support_size": self.support_size,
            "cutoff": self.cutoff,
            "seed": self.seed,
        }


def rejection_sampling_pipeline(
    u,
    spec: CatInputSpec,
    cutoff: int,
    count: int,
    seed: int,
) -> PipelineReport:
    """Sample the cat distribution, keep |p| = n, compare with single-photon sampling."""
    dist = cat_distribution(u, spec, cutoff)
    draws = sample(dist, count, seed)
    n = spec.n
    kept = [o for o in draws if o is not OVERFLOW and weight(o) == n]
    kept_fraction = len(kept) / count
    expected = photon_fraction(spec.alpha, n)
    stderr = math.sqrt(expected * (1.0 - expected) / count)
    bs = bs_distribution(u, n)
    empirical: dict[FockOutcome, float] = {}
    if kept:
        inc = 1.0 / len(kept)
        for o in kept:
            empirical[o] = empirical.get(o, 0.0) + inc
    tv = tv_distance(empirical, bs.probs)
    return PipelineReport(
        total_samples=count,
        kept_samples=len(kept),
        kept_fraction=kept_fraction,
        expected_fraction=expected,
        fraction_stderr=stderr,
        tv_kept_vs_single_photon=tv,
        support_size=len(bs.probs),
        cutoff=dist.cutoff,
        seed=seed,
    )


@dataclass(frozen=True)
class RegimeReport:
    n: int
    m: int
    c: float
    alpha: float
    defined: bool
    fraction: Optional[float]
    leading_order: Optional[float]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "c": self.c,
            "alpha": self.alpha,
            "defined": self.defined,
            "fraction": self.fraction,
            "leading_order": self.leading_order,
        }


def amplitude_regime_check(n: int, m: int, c: float) -> RegimeReport:
    """Evaluate the kept fraction at alpha = c * n^(-1/4) * (ln m)^(1/4).

    At this scaling the fraction behaves like exp(-n|alpha|^4/6) to leading
    order, i.e. an inverse-polynomial fraction of samples survives the
    photon-number filter.  alpha = 0 (c = 0 or m = 1) is flagged: sampling
    is undefined there.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    alpha = float(c) * n ** (-0.25) * math.log(m) ** 0.25 if m > 1 else 0.0
    if alpha <= 0.0:
        return RegimeReport(n, m, float(c), alpha, False, None, None)
    fraction = photon_fraction(alpha, n)
    leading = math.exp(-n * alpha**4 / 6.0)
    return RegimeReport(n, m, float(c), alpha, True, fraction, leading)


def hong_ou_mandel_unitary() -> UnitaryMatrix:
    """Balanced beamsplitter [[1, 1], [1, -1]]/sqrt(2)."""
    from .numerics import ComplexMatrix

    return UnitaryMatrix(ComplexMatrix(np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2.0)))
