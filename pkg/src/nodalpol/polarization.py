"""Exact rational polarizations and the weight windows that stabilize O_C.

A polarization assigns a positive rational weight to each component, with
the weights summing to one.  Attached to a polarized curve is the lambda
vector ``lambda_i = 1 - g_i - w_i * chi(O_C)``, which drives every other
quantity in the package: the lambda values sum to the number of nodes, and
for a subcurve B the structure-sheaf defect is

    delta_structure(B) = sum(lambda_i for i in B) - N(B),

where N(B) counts the nodes internal to B.  All arithmetic uses
``fractions.Fraction``; floating point never enters a predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

from .curve import CurveGraph, Subcurve
from .errors import (
    CanonicalUndefinedError,
    InvalidPolarizationError,
    NonAmpleMultidegreeError,
    UnsupportedCurveError,
)

LambdaVector = tuple[Fraction, ...]


@dataclass(frozen=True, eq=False)
class Polarization:
    """Vector of exact positive rational weights summing to one.

    For a one-component curve the single weight is exactly 1; otherwise
    every weight lies strictly between 0 and 1.
    """

    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ws = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        # Rational hashing is surprisingly costly; memoize it, since
        # polarizations serve as cache keys all over the package.
        object.__setattr__(self, "_hash", hash(ws))
        if not ws:
            raise InvalidPolarizationError("a polarization needs at least one weight")
        if sum(ws) != 1:
            raise InvalidPolarizationError(
                f"weights must sum to 1 exactly, got {sum(ws)}"
            )
        if len(ws) == 1:
            if ws[0] != 1:
                raise InvalidPolarizationError("a single component must carry weight 1")
            return
        for k, w in enumerate(ws):
            if not 0 < w < 1:
                raise InvalidPolarizationError(
                    f"weight #{k + 1} = {w} is outside the open interval (0, 1)"
                )

    @classmethod
    def of(cls, values: Iterable[object]) -> "Polarization":
        return cls(tuple(Fraction(v) for v in values))  # type: ignore[arg-type]

    @classmethod
    def uniform(cls, gamma: int) -> "Polarization":
        return cls(tuple(Fraction(1, gamma) for _ in range(gamma)))

    @property
    def gamma(self) -> int:
        return len(self.weights)

    def common_denominator(self) -> int:
        return lcm(*(w.denominator for w in self.weights))

    def __hash__(self) -> int:
        return self._hash  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polarization):
            return NotImplemented
        return self.weights == other.weights

    def __repr__(self) -> str:
        return f"Polarization({', '.join(str(w) for w in self.weights)})"


def from_multidegree(curve: CurveGraph, degrees: Sequence[int]) -> Polarization:
    """Polarization induced by an ample multidegree: w_i = d_i / sum(d)."""
    if len(degrees) != curve.gamma:
        raise InvalidPolarizationError(
            f"expected {curve.gamma} degrees, got {len(degrees)}"
        )
    if any(d <= 0 for d in degrees):
        raise NonAmpleMultidegreeError(
            f"every degree must be positive for ampleness, got {tuple(degrees)}"
        )
    total = sum(degrees)
    return Polarization(tuple(Fraction(d, total) for d in degrees))


def canonical(curve: CurveGraph) -> Polarization:
    """Polarization induced by the dualizing sheaf of a stable curve.

    eta_i = (g_i - 1 + delta_i/2) / (p_a - 1); the resulting lambda vector
    is exactly (delta_1/2, ..., delta_gamma/2).
    """
    if not curve.classify().stable:
        raise CanonicalUndefinedError(
            "the canonical polarization needs a stable curve "
            f"(arithmetic genus {curve.arithmetic_genus})"
        )
    pa = curve.arithmetic_genus
    return Polarization(
        tuple(
            Fraction(2 * (g - 1) + d, 2 * (pa - 1))
            for g, d in zip(curve.genera, curve.vertex_degrees)
        )
    )


def lambda_vector(curve: CurveGraph, w: Polarization) -> LambdaVector:
    """lambda_i = 1 - g_i - w_i * chi(O_C); the entries sum to delta.

    Memoized per (curve, polarization): the whole package evaluates
    defects through this vector, often many times for the same pair.
    """
    return _lambda_entry(curve, w)[0]


def scaled_lambda(curve: CurveGraph, w: Polarization) -> tuple[tuple[int, ...], int]:
    """The lambda vector as integers over a common denominator q.

    Returns ``(L, q)`` with ``L[i] == q * lambda_i``.  Hot loops compare
    these integers instead of Fractions; the results are identical because
    every predicate in the package is a rational inequality.
    """
    entry = _lambda_entry(curve, w)
    return entry[1], entry[2]


def _lambda_entry(curve: CurveGraph, w: Polarization) -> tuple:
    cached = curve._lambda_cache.get(w)
    if cached is not None:
        return cached
    if w.gamma != curve.gamma:
        raise InvalidPolarizationError(
            f"polarization has {w.gamma} weights but the curve has "
            f"{curve.gamma} components"
        )
    chi = curve.euler_characteristic
    lam = tuple(1 - g - wi * chi for g, wi in zip(curve.genera, w.weights))
    if sum(lam) != curve.delta:
        raise AssertionError("lambda entries failed to sum to the node count")
    q = lcm(*(x.denominator for x in lam))
    entry = (lam, tuple(int(x * q) for x in lam), q)
    if len(curve._lambda_cache) >= 4096:
        curve._lambda_cache.clear()
    curve._lambda_cache[w] = entry
    return entry


def delta_structure(b: Subcurve, w: Polarization) -> Fraction:
    """Structure-sheaf defect of a subcurve.

    Equals ``sum(lambda_i, i in B) - N(B)``, and also
    ``1 - p_a(B) + (p_a(C) - 1) * sum(w_i, i in B)``; for the full curve it
    is zero.  Valid for disconnected subcurves.
    """
    lam, q = scaled_lambda(b.owner, w)
    internal, _ = b.owner.subset_counts(b.mask)
    return Fraction(
        sum(lam[k] for k in b.member_indices) - q * internal, q
    )


@dataclass(frozen=True)
class WeightWindow:
    """Open interval constraint lower < sum(w_i, i in B) < upper."""

    subcurve: Subcurve
    lower: Fraction
    upper: Fraction

    def holds(self, w: Polarization, strict: bool = True) -> bool:
        total = sum(
            (w.weights[k] for k in self.subcurve.member_indices), Fraction(0)
        )
        if strict:
            return self.lower < total < self.upper
        return self.lower <= total <= self.upper


@dataclass(frozen=True)
class StabilityPolytope:
    """H-representation of the weight region where O_C is stable.

    One window per proper connected subcurve, with complementary pairs
    deduplicated.  ``witness`` is an interior rational point when one was
    found; its absence is reported as "no witness found", never as
    emptiness.
    """

    curve: CurveGraph
    windows: tuple[WeightWindow, ...]
    witness: Polarization | None

    def accepts(self, w: Polarization, strict: bool = True) -> bool:
        return all(win.holds(w, strict=strict) for win in self.windows)


def enumerate_weight_grid(gamma: int, max_denominator: int) -> Iterator[Polarization]:
    """All polarizations with common denominator up to the bound.

    Enumerates positive numerator compositions per denominator, ascending
    denominator then lexicographic, skipping vectors already produced with
    a smaller denominator.  Deterministic.
    """
    if gamma < 1 or max_denominator < 1:
        raise InvalidPolarizationError("grid parameters must be positive")
    seen: set[tuple[Fraction, ...]] = set()
    for q in range(1, max_denominator + 1):
        if q < gamma:
            continue
        for parts in _positive_compositions(q, gamma):
            ws = tuple(Fraction(p, q) for p in parts)
            if ws in seen:
                continue
            seen.add(ws)
            yield Polarization(ws)


def _positive_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _positive_compositions(total - first, parts - 1):
            yield (first,) + rest


def stability_polytope(
    curve: CurveGraph, witness_denominator_bound: int = 24
) -> StabilityPolytope:
    """Weight windows equivalent to stability of O_C, plus a witness point.

    Requires arithmetic genus at least 2; smaller genera are handled by the
    direct stability shortcuts instead.  The witness is the canonical
    polarization when the curve is stable and that point is interior,
    otherwise the first interior point of the weight grid with denominator
    up to the bound, otherwise absent.
    """
    pa = curve.arithmetic_genus
    if pa < 2:
        raise UnsupportedCurveError(
            "the weight-window description needs arithmetic genus >= 2"
        )
    P = pa - 1
    windows = []
    seen_masks: set[int] = set()
    full = curve.full_mask
    for stat in curve.connected_subcurve_stats():
        if (full ^ stat.mask) in seen_masks:
            continue
        seen_masks.add(stat.mask)
        windows.append(
            WeightWindow(
                Subcurve(curve, stat.mask),
                Fraction(stat.genus - 1, P),
                Fraction(stat.genus - 1 + stat.boundary, P),
            )
        )
    polytope = StabilityPolytope(curve, tuple(windows), None)

    witness: Polarization | None = None
    if curve.classify().stable:
        eta = canonical(curve)
        if polytope.accepts(eta):
            witness = eta
    if witness is None:
        for w in enumerate_weight_grid(curve.gamma, witness_denominator_bound):
            if polytope.accepts(w):
                witness = w
                break
    return StabilityPolytope(curve, tuple(windows), witness)
