"""Cache metrics for a fully associative LRU cache.

Miss-ratio curves are built three ways: differencing a steady-state footprint
curve (capacity view), converting reuse times through the footprint inverse
(fill time), and exact stack simulation, which serves as the ground-truth
oracle for the other two. Derived times follow: fill time as the footprint
inverse, inter-miss time as the reciprocal miss ratio, residence time as
size over miss ratio, and the summed-inter-miss estimate of fill time.
"""

from __future__ import annotations

from array import array
from bisect import bisect_left
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from ._dispatch import kernels
from .errors import ValidationError
from .footprint import FootprintCurve, SteadyStateCurve, ss_fp_limit
from .histogram import (
    COLD_INCLUDE,
    ReuseHistogram,
    _check_cold,
    tail_probability,
)
from .trace import INFINITE, Trace

PROVENANCE_FP_DIFF = "fp_diff"
PROVENANCE_RT_CONVERSION = "rt_conversion"
PROVENANCE_SIMULATOR = "simulator"
_PROVENANCES = (
    PROVENANCE_FP_DIFF,
    PROVENANCE_RT_CONVERSION,
    PROVENANCE_SIMULATOR,
)


@dataclass(frozen=True)
class MissRatioCurve:
    """Miss ratio at increasing cache sizes, tagged with how it was built.

    Sizes are strictly increasing and ratios monotone non-increasing within
    [0, 1]; construction rejects anything else, so every curve in the system
    is anomaly-free by the time it exists. ``brackets`` optionally attaches a
    (lower, upper) enclosure per point for curves built by differencing.
    """

    points: tuple
    provenance: str
    brackets: tuple | None = None

    def __post_init__(self):
        if self.provenance not in _PROVENANCES:
            raise ValidationError(
                f"unknown provenance {self.provenance!r}; expected one of"
                f" {_PROVENANCES}"
            )
        prev_size = None
        prev_ratio = None
        for k, (size, ratio) in enumerate(self.points):
            if prev_size is not None and size <= prev_size:
                raise ValidationError(
                    f"point {k}: cache size {size} does not increase past"
                    f" {prev_size}"
                )
            if not 0 <= ratio <= 1:
                raise ValidationError(
                    f"point {k}: miss ratio {ratio} is outside [0, 1]"
                )
            if prev_ratio is not None and ratio > prev_ratio:
                raise ValidationError(
                    f"point {k}: miss ratio rises from {prev_ratio} to {ratio}"
                )
            prev_size = size
            prev_ratio = ratio
        if self.brackets is not None and len(self.brackets) != len(self.points):
            raise ValidationError(
                f"{len(self.brackets)} brackets for {len(self.points)} points"
            )

    @property
    def sizes(self) -> tuple:
        return tuple(size for size, _ in self.points)

    @property
    def ratios(self) -> tuple:
        return tuple(ratio for _, ratio in self.points)

    def value_at(self, size) -> Fraction:
        """Miss ratio at the nearest tabulated size, ties toward the smaller
        size (the pessimistic, larger ratio)."""
        if not self.points:
            raise ValidationError("miss-ratio curve has no points")
        sizes = self.sizes
        idx = bisect_left(sizes, size)
        if idx == len(sizes):
            return self.points[-1][1]
        if sizes[idx] == size or idx == 0:
            return self.points[idx][1]
        left_gap = size - sizes[idx - 1]
        right_gap = sizes[idx] - size
        if left_gap <= right_gap:
            return self.points[idx - 1][1]
        return self.points[idx][1]


def mrc_fp_diff(ss: SteadyStateCurve) -> MissRatioCurve:
    """Miss ratios by differencing a steady-state footprint curve.

    Every window length x yields the point (ss(x), ss(x+1) - ss(x)): caches
    holding the footprint of a length-x window miss at the rate the footprint
    still grows. Emission stops at the first zero increment, where the curve
    has flattened for good. Each point carries the enclosure
    (next increment, own increment) that brackets the true miss ratio between
    consecutive window lengths.
    """
    steps = ss.increments()
    points = []
    brackets = []
    for x, step in enumerate(steps):
        lower = steps[x + 1] if x + 1 < len(steps) else Fraction(0)
        points.append((ss.values[x], step))
        brackets.append((lower, step))
        if step == 0:
            break
    return MissRatioCurve(
        tuple(points), PROVENANCE_FP_DIFF, brackets=tuple(brackets)
    )


def steady_state_mrc(h: ReuseHistogram) -> MissRatioCurve:
    """Miss ratios of the infinite-repetition limit of a measured histogram."""
    return mrc_fp_diff(ss_fp_limit(h))


def _curve_values(curve) -> tuple[tuple, int]:
    if isinstance(curve, FootprintCurve):
        return curve.fp_values(), curve.m
    if isinstance(curve, SteadyStateCurve):
        return curve.values, curve.m
    raise ValidationError(
        f"expected a footprint or steady-state curve, got"
        f" {type(curve).__name__}"
    )


def _footprint_inverse(values, size: Fraction) -> Fraction:
    """Smallest window length whose curve value reaches ``size``, with linear
    interpolation between adjacent lengths."""
    idx = bisect_left(values, size)
    if idx == len(values):
        raise ValidationError(
            f"cache size {size} is never reached by the curve (it tops out"
            f" at {values[-1]})"
        )
    if idx == 0 or values[idx] == size:
        return Fraction(idx)
    low = values[idx - 1]
    high = values[idx]
    return Fraction(idx - 1) + (size - low) / (high - low)


def fill_time(curve, size) -> Fraction:
    """Time to touch ``size`` distinct data: the footprint inverse.

    Defined for sizes strictly below the datum count m; the footprint never
    exceeds m, so larger caches have no finite fill time.
    """
    values, m = _curve_values(curve)
    size = Fraction(size)
    if size < 0:
        raise ValidationError(f"cache size {size} is negative")
    if size >= m:
        raise ValidationError(
            f"no finite fill time: cache size {size} is not below the datum"
            f" count {m}"
        )
    return _footprint_inverse(values, size)


def mrc_reuse_time_conversion(
    h: ReuseHistogram, curve, cold: str = COLD_INCLUDE
) -> MissRatioCurve:
    """Miss ratios from reuse times: an access misses a size-c cache exactly
    when its reuse time exceeds the fill time of c.

    Evaluated at every integer cache size 0..m over the given footprint
    curve. The default include policy counts first accesses (infinite reuse
    time) as misses at every size, which is how a real cold cache behaves.
    """
    _check_cold(cold)
    values, m = _curve_values(curve)
    points = []
    for c in range(m + 1):
        ft = _footprint_inverse(values, Fraction(c))
        points.append((Fraction(c), tail_probability(h, ft, cold)))
    return MissRatioCurve(tuple(points), PROVENANCE_RT_CONVERSION)


def inter_miss(mrc: MissRatioCurve, size):
    """Average accesses between consecutive misses: 1 / mr(size)."""
    ratio = mrc.value_at(size)
    if ratio == 0:
        return INFINITE
    return 1 / ratio


def residence_time(mrc: MissRatioCurve, size):
    """Average stay of a block in a size-``size`` cache: size / mr(size).

    The defining balance is exact: residence * miss ratio = size, since the
    cache holds ``size`` blocks and evicts one per miss.
    """
    if size == 0:
        return Fraction(0)
    ratio = mrc.value_at(size)
    if ratio == 0:
        return INFINITE
    return Fraction(size) / ratio


def fill_time_from_inter_miss(mrc: MissRatioCurve, size: int):
    """Fill-time estimate: the summed inter-miss times at all smaller sizes.

    Exact whenever the footprint grows linearly over the summed range (each
    miss then adds exactly one distinct datum); otherwise a piecewise linear
    approximation of the true fill time.
    """
    if not isinstance(size, int) or size < 0:
        raise ValidationError(
            f"cache size {size!r} must be a non-negative integer"
        )
    total = Fraction(0)
    for i in range(size):
        ratio = mrc.value_at(i)
        if ratio == 0:
            return INFINITE
        total += 1 / ratio
    return total


def time_window_miss_ratio(h: ReuseHistogram, x: int, cold: str = COLD_INCLUDE):
    """Fraction of accesses whose reuse time exceeds the window length x."""
    if x < 0:
        raise ValidationError(f"window length {x} is negative")
    return tail_probability(h, x, cold)


def presence_probability(curve: SteadyStateCurve, datum_count: int, w: int):
    """Chance that one specific other datum occurs in a length-w window.

    The steady-state footprint counts distinct data per window; each of the
    other datum_count - 1 data is present with equal probability.
    """
    if datum_count < 2:
        raise ValidationError(
            f"presence probability needs at least 2 data, got {datum_count}"
        )
    if w < 0:
        raise ValidationError(f"window length {w} is negative")
    return curve.value_at(w) / (datum_count - 1)


def expected_distance_estimate(h: ReuseHistogram, r: int, cold: str = COLD_INCLUDE):
    """Estimated reuse distance for reuse time r: the summed tail fractions
    at every window length up to r."""
    _check_cold(cold)
    if r < 0:
        raise ValidationError(f"reuse time {r} is negative")
    total = Fraction(0)
    for j in range(1, r + 1):
        total += tail_probability(h, j, cold)
    return total


@dataclass(frozen=True)
class LruSimulation:
    """Exact single-pass LRU simulation results for every cache size at once.

    An access with stack distance d misses every cache smaller than d, so the
    finite distance counts plus the cold (first-access) count determine the
    whole miss-ratio curve. ``first_access_times`` are increasing, and the
    c-th of them is when a cold cache of any size takes its c-th miss.
    """

    n: int
    m: int
    distance_counts: dict
    first_access_times: tuple[int, ...]

    def misses(self, size: int, include_cold: bool = True) -> int:
        beyond = sum(c for d, c in self.distance_counts.items() if d > size)
        return beyond + (self.m if include_cold else 0)

    def miss_ratio(self, size: int, include_cold: bool = True) -> Fraction:
        if self.n == 0:
            return Fraction(0)
        return Fraction(self.misses(size, include_cold), self.n)

    def curve(self, include_cold: bool = True) -> MissRatioCurve:
        """Miss ratios at every integer cache size 0..m."""
        if self.n == 0:
            return MissRatioCurve((), PROVENANCE_SIMULATOR)
        beyond = [0] * (self.m + 2)
        for d, c in self.distance_counts.items():
            beyond[d - 1] += c
        for size in range(self.m - 1, -1, -1):
            beyond[size] += beyond[size + 1]
        cold = self.m if include_cold else 0
        points = tuple(
            (Fraction(size), Fraction(beyond[size] + cold, self.n))
            for size in range(self.m + 1)
        )
        return MissRatioCurve(points, PROVENANCE_SIMULATOR)

    def first_miss_time(self, c: int) -> int:
        """Time of the c-th miss of a cold cache (any size at least c)."""
        if not 0 <= c <= self.m:
            raise ValidationError(
                f"miss index {c} is outside [0, {self.m}]"
            )
        if c == 0:
            return 0
        return self.first_access_times[c - 1]


def lru_simulate_detail(t: Trace) -> LruSimulation:
    """Run the move-to-front stack simulation and keep the raw tallies."""
    raw = kernels.lru_distances(array("q", t.accesses), t.n, t.m)
    counts = Counter(d for d in raw if d)
    return LruSimulation(t.n, t.m, dict(counts), t.firsts)


def lru_simulate(t: Trace) -> MissRatioCurve:
    """Ground-truth miss-ratio curve: exact LRU simulation, cold misses
    included."""
    return lru_simulate_detail(t).curve(include_cold=True)
