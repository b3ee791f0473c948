"""Reuse histograms: exact counts, probability views, log-linear binning,
conservation identities, sealed-trace checks, and histogram composition.

A histogram forgets access order and keeps only how often each reuse value
occurs, plus the count of infinite (first-access) reuses. It carries the
originating trace length n and datum count m so probabilities and the
conservation identities need no side channel.
"""

from __future__ import annotations

from bisect import bisect_right
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, ValidationError
from .trace import (
    INFINITE,
    REUSE_DISTANCE,
    REUSE_TIME,
    PerDatumProfile,
    ReuseSequence,
    Trace,
    reuse_time_sequence,
)

COLD_INCLUDE = "include"
COLD_EXCLUDE = "exclude"
_COLD_POLICIES = (COLD_INCLUDE, COLD_EXCLUDE)


def _check_cold(cold: str) -> None:
    if cold not in _COLD_POLICIES:
        raise ValidationError(
            f"unknown cold-miss policy {cold!r}; expected one of {_COLD_POLICIES}"
        )


@dataclass(frozen=True)
class ReuseHistogram:
    """Counts of finite reuse values plus the infinite (first-access) bucket.

    The constructor enforces that finite counts plus ``infinite_count`` sum to
    ``n``. Whole-trace measurement guarantees two further facts checked by
    callers and tests rather than here: ``infinite_count == m``, and keys stay
    within n - 1 (time kind) or m (distance kind). Histograms built from a
    single datum's profile reuse the same type with n set to that datum's
    access count, where those whole-trace bounds do not apply.
    """

    kind: str
    counts: dict
    infinite_count: int
    n: int
    m: int

    def __post_init__(self):
        if self.kind not in (REUSE_TIME, REUSE_DISTANCE):
            raise ValidationError(f"unknown reuse kind {self.kind!r}")
        cleaned = {}
        for value, count in self.counts.items():
            if not isinstance(value, int) or value < 1:
                raise ValidationError(
                    f"histogram key {value!r} is not a positive integer"
                )
            if not isinstance(count, int) or count < 0:
                raise ValidationError(
                    f"histogram count {count!r} for key {value} is not a"
                    f" non-negative integer"
                )
            if count:
                cleaned[value] = count
        object.__setattr__(self, "counts", cleaned)
        if self.infinite_count < 0:
            raise ValidationError(
                f"infinite count {self.infinite_count} is negative"
            )
        total = sum(cleaned.values()) + self.infinite_count
        if total != self.n:
            raise ValidationError(
                f"histogram mass {total} does not equal trace length {self.n}"
            )

    @property
    def finite_total(self) -> int:
        return self.n - self.infinite_count

    @property
    def max_finite(self) -> int:
        return max(self.counts) if self.counts else 0

    @property
    def weighted_sum(self) -> int:
        """Sum of value * count over the finite buckets."""
        return sum(v * c for v, c in self.counts.items())

    def sorted_items(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.counts.items()))


def build_histogram(source) -> ReuseHistogram:
    """Count reuse values from a measured sequence or a per-datum profile.

    For a whole-trace ``ReuseSequence`` the infinite bucket equals the datum
    count m, since every datum contributes exactly one first access. For a
    ``PerDatumProfile`` the histogram covers that datum alone: n is its access
    count, m is 1, and the single first access is the infinite bucket.
    """
    if isinstance(source, ReuseSequence):
        counts: Counter = Counter()
        infinite = 0
        for v in source.values:
            if v == INFINITE:
                infinite += 1
            else:
                counts[int(v)] += 1
        return ReuseHistogram(
            source.kind, dict(counts), infinite, len(source.values), infinite
        )
    if isinstance(source, PerDatumProfile):
        return ReuseHistogram(
            source.kind, dict(Counter(source.reuses)), 1, source.access_count, 1
        )
    raise ValidationError(
        f"cannot build a histogram from {type(source).__name__}"
    )


def probability(h: ReuseHistogram, y, cold: str = COLD_INCLUDE) -> Fraction:
    """Cumulative probability P(value <= y) with denominator n.

    Infinite reuses never fall below any finite y, so the cumulative view is
    the same under both cold-miss policies; the policy only matters for the
    complementary tail (see ``tail_probability``).
    """
    _check_cold(cold)
    if y < 0:
        raise ValidationError(f"probability threshold {y!r} is negative")
    if h.n == 0:
        return Fraction(0)
    below = sum(c for v, c in h.counts.items() if v <= y)
    return Fraction(below, h.n)


def tail_probability(h: ReuseHistogram, y, cold: str = COLD_INCLUDE) -> Fraction:
    """Tail probability P(value > y) with denominator n.

    Under ``include`` the infinite bucket is part of the tail at every y (a
    first access misses in any finite cache); under ``exclude`` only finite
    values above y count.
    """
    _check_cold(cold)
    if h.n == 0:
        return Fraction(0)
    above = sum(c for v, c in h.counts.items() if v > y)
    if cold == COLD_INCLUDE:
        above += h.infinite_count
    return Fraction(above, h.n)


@dataclass(frozen=True)
class BinnedHistogram:
    """Log-linear compression of a reuse histogram.

    ``bounds`` holds inclusive (low, high) ranges that partition [1, high of
    the last bin]; ``bin_counts`` aligns with it. The infinite bucket is kept
    separate and never folded into the largest finite bin.
    """

    kind: str
    bounds: tuple[tuple[int, int], ...]
    bin_counts: tuple[int, ...]
    infinite_count: int
    n: int
    m: int

    def __post_init__(self):
        if len(self.bounds) != len(self.bin_counts):
            raise ValidationError(
                f"{len(self.bounds)} bins but {len(self.bin_counts)} counts"
            )
        expect = 1
        for k, (lo, hi) in enumerate(self.bounds):
            if lo != expect or hi < lo:
                raise ValidationError(
                    f"bin {k}: range [{lo}, {hi}] breaks the partition at {expect}"
                )
            expect = hi + 1
        for k, c in enumerate(self.bin_counts):
            if c < 0:
                raise ValidationError(f"bin {k}: negative count {c}")

    @property
    def total(self) -> int:
        return sum(self.bin_counts) + self.infinite_count

    def bin_index(self, value: int) -> int:
        """Index of the bin holding a finite value."""
        if not self.bounds or not 1 <= value <= self.bounds[-1][1]:
            raise ValidationError(f"value {value} lies outside the binned range")
        lows = [lo for lo, _ in self.bounds]
        return bisect_right(lows, value) - 1


def _log_linear_bounds(max_value: int, subbins: int) -> list[tuple[int, int]]:
    """Inclusive bin ranges: exact bins [1,1] and [2,2], then each power-of-two
    range (2^k, 2^(k+1)] split into min(subbins, 2^k) near-equal parts."""
    bounds: list[tuple[int, int]] = [(1, 1)]
    if max_value >= 2:
        bounds.append((2, 2))
    span = 2
    while span < max_value:
        width = span
        parts = min(subbins, width)
        base, extra = divmod(width, parts)
        lo = span + 1
        for k in range(parts):
            size = base + (1 if k < extra else 0)
            bounds.append((lo, lo + size - 1))
            lo += size
        span *= 2
    return bounds


def bin_log_linear(h: ReuseHistogram, subbins: int = 256) -> BinnedHistogram:
    """Compress a histogram into log-linear bins, preserving total mass.

    Small values keep exact bins; beyond 2, each power-of-two range is split
    evenly into at most ``subbins`` sub-ranges, so the relative width of any
    bin stays bounded by 1/subbins of its magnitude once ranges are wide
    enough to split fully.
    """
    if subbins < 1:
        raise ValidationError(f"subbin count must be at least 1, got {subbins}")
    if not h.counts:
        return BinnedHistogram(h.kind, (), (), h.infinite_count, h.n, h.m)
    bounds = _log_linear_bounds(h.max_finite, subbins)
    lows = [lo for lo, _ in bounds]
    tallies = [0] * len(bounds)
    for value, count in h.counts.items():
        tallies[bisect_right(lows, value) - 1] += count
    return BinnedHistogram(
        h.kind, tuple(bounds), tuple(tallies), h.infinite_count, h.n, h.m
    )


def is_sealed(t: Trace) -> bool:
    """True when the first m and last m accesses each cover all m data.

    Equivalently: every first access happens by time m and every last access
    happens at or after time n - m + 1.
    """
    limit = t.n - t.m + 1
    return all(f <= t.m for f in t.firsts) and all(
        last >= limit for last in t.forward_lasts
    )


@dataclass(frozen=True)
class RtInvariantReport:
    """Both sides of the reuse-time conservation identities for one trace.

    ``finite_reuse_count`` must equal n - m (each datum's first access is the
    only infinite one). ``weighted_reuse_sum`` (sum of value * count) must
    equal the total span between first and last accesses. On sealed traces
    that span collapses to m * (n - m); on unsealed traces the sealed product
    is reported as inapplicable rather than failed.
    """

    n: int
    m: int
    finite_reuse_count: int
    weighted_reuse_sum: int
    boundary_span_sum: int
    sealed: bool

    @property
    def conservation_ok(self) -> bool:
        return self.finite_reuse_count == self.n - self.m

    @property
    def span_ok(self) -> bool:
        return self.weighted_reuse_sum == self.boundary_span_sum

    @property
    def sealed_product(self) -> int:
        return self.m * (self.n - self.m)

    @property
    def sealed_ok(self) -> bool | None:
        """True/False when the trace is sealed, None when inapplicable."""
        if not self.sealed:
            return None
        return self.weighted_reuse_sum == self.sealed_product

    @property
    def ok(self) -> bool:
        return self.conservation_ok and self.span_ok and self.sealed_ok is not False


def check_rt_invariants(t: Trace) -> RtInvariantReport:
    """Evaluate the reuse-time conservation identities on one trace."""
    h = build_histogram(reuse_time_sequence(t))
    span = sum(
        last - first for first, last in zip(t.firsts, t.forward_lasts)
    )
    return RtInvariantReport(
        t.n, t.m, h.finite_total, h.weighted_sum, span, is_sealed(t)
    )


def sum_histograms(hs, scale: int) -> ReuseHistogram:
    """Compose time-kind histograms of k uniformly interleaved traces.

    Every finite value is scaled by ``scale`` (round-robin interleaving of k
    equal-length traces stretches each reuse time k-fold) and the counts are
    added. With ``scale`` equal to the number of equal-length inputs, the
    result matches measuring the interleaved trace directly. Distance-kind
    histograms do not compose this way and are rejected.
    """
    hs = list(hs)
    if not hs:
        raise ValidationError("cannot sum zero histograms")
    if not isinstance(scale, int) or scale < 1:
        raise ValidationError(f"scale must be a positive integer, got {scale!r}")
    for k, h in enumerate(hs):
        if h.kind != REUSE_TIME:
            raise ValidationError(
                f"histogram {k} has kind {h.kind!r}: only time-kind histograms"
                f" compose under interleaving"
            )
        if h.n != hs[0].n:
            raise ValidationError(
                f"histogram {k} has length {h.n}, expected {hs[0].n}: the"
                f" composition rule assumes equal-length traces"
            )
    counts: Counter = Counter()
    infinite = 0
    for h in hs:
        for v, c in h.counts.items():
            counts[v * scale] += c
        infinite += h.infinite_count
    return ReuseHistogram(
        REUSE_TIME,
        dict(counts),
        infinite,
        sum(h.n for h in hs),
        sum(h.m for h in hs),
    )


def format_histogram(h: ReuseHistogram) -> str:
    """Serialize to the text format: headers, `value count` lines, `inf` last."""
    lines = [f"#kind={h.kind}", f"#n={h.n}", f"#m={h.m}"]
    for value, count in h.sorted_items():
        lines.append(f"{value} {count}")
    lines.append(f"inf {h.infinite_count}")
    return "\n".join(lines) + "\n"


def parse_histogram(text: str) -> ReuseHistogram:
    """Parse the histogram text format written by ``format_histogram``."""
    kind = n = m = None
    counts: dict[int, int] = {}
    infinite = 0
    saw_infinite = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                continue
            key = key.strip()
            value = value.strip()
            if key == "kind":
                kind = value
            elif key == "n":
                n = int(value)
            elif key == "m":
                m = int(value)
            else:
                raise ParseError(
                    f"line {lineno}: unknown header {key!r}", position=lineno
                )
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(
                f"line {lineno}: expected 'value count', found {len(parts)} fields",
                position=lineno,
            )
        if parts[0] == "inf":
            if saw_infinite:
                raise ParseError(
                    f"line {lineno}: duplicate infinite bucket", position=lineno
                )
            saw_infinite = True
            infinite = int(parts[1])
            continue
        try:
            value = int(parts[0])
            count = int(parts[1])
        except ValueError:
            raise ParseError(
                f"line {lineno}: non-integer histogram entry {line!r}",
                position=lineno,
            ) from None
        if value in counts:
            raise ParseError(
                f"line {lineno}: duplicate value {value}", position=lineno
            )
        counts[value] = count
    if kind is None or n is None or m is None:
        raise ParseError("histogram file is missing #kind/#n/#m headers")
    return ReuseHistogram(kind, counts, infinite, n, m)
