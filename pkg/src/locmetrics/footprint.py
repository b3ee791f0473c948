"""Footprint curves: average working-set size for every window length.

The footprint fp(x) is the number of distinct data in a length-x window,
averaged over all n-x+1 windows of the trace. This module computes it four
ways: direct window enumeration (the oracle), an absence-counting formula over
the reuse-time histogram with first and reverse-last access times, an additive
formula with forward last access times, and an incremental formula that needs
only the histogram prefix below the target window length. All four agree
exactly; arithmetic is integer/rational throughout, with floats only at
presentation.

The steady-state curve is the boundary-free companion: the working-set
recurrence accumulates tail probabilities, and the subtractive closed form
reads the same curve directly off the histogram.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from fractions import Fraction

from ._dispatch import kernels
from .errors import ValidationError
from .histogram import (
    COLD_EXCLUDE,
    COLD_INCLUDE,
    ReuseHistogram,
    _check_cold,
    build_histogram,
)
from .trace import REUSE_TIME, Trace, reuse_time_sequence

FOOTPRINT_METHODS = ("incremental", "additive", "absence", "brute")


@dataclass(frozen=True)
class FootprintCurve:
    """Exact footprint values for window lengths 0..max_window.

    ``totals[x]`` is the integer total working-set size W(x), the sum of
    distinct-data counts over every length-x window; the average footprint is
    W(x) divided by the window count n - x + 1. A curve may cover only a
    prefix of window lengths (the incremental method stops at its requested
    maximum).
    """

    n: int
    m: int
    totals: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.m <= self.n:
            raise ValidationError(
                f"datum count {self.m} is outside [0, {self.n}]"
            )
        size = len(self.totals)
        if not 1 <= size <= self.n + 1:
            raise ValidationError(
                f"curve holds {size} window lengths for a trace of {self.n}"
                f" accesses"
            )
        if self.totals[0] != 0:
            raise ValidationError(
                f"window length 0: total working-set size is"
                f" {self.totals[0]}, expected 0"
            )
        for x in range(1, size):
            w = self.totals[x]
            wc = self.n - x + 1
            if w < 0:
                raise ValidationError(
                    f"window length {x}: negative total {w}", position=x
                )
            if w > min(x, self.m) * wc:
                raise ValidationError(
                    f"window length {x}: footprint exceeds min(x, m) ="
                    f" {min(x, self.m)}",
                    position=x,
                )
            if w * (wc + 1) < self.totals[x - 1] * wc:
                raise ValidationError(
                    f"window length {x}: footprint decreases", position=x
                )
        if size == self.n + 1 and self.totals[-1] != self.m:
            raise ValidationError(
                f"window length {self.n}: whole-trace footprint is"
                f" {self.totals[-1]}, expected {self.m}"
            )

    @property
    def max_window(self) -> int:
        return len(self.totals) - 1

    def window_count(self, x: int) -> int:
        return self.n - x + 1

    def fp(self, x: int) -> Fraction:
        return Fraction(self.totals[x], self.window_count(x))

    def fp_values(self) -> tuple[Fraction, ...]:
        return tuple(self.fp(x) for x in range(len(self.totals)))

    def truncated(self, w_max: int) -> "FootprintCurve":
        """The same curve restricted to window lengths 0..w_max."""
        if not 0 <= w_max <= self.max_window:
            raise ValidationError(
                f"cannot truncate to {w_max}: curve covers 0..{self.max_window}"
            )
        return FootprintCurve(self.n, self.m, self.totals[: w_max + 1])


@dataclass(frozen=True)
class SteadyStateCurve:
    """Steady-state footprint values for window lengths 0..len(values)-1.

    Increments must be non-negative and non-increasing (the curve is concave);
    construction rejects anything else, naming the violating window length.
    The ``cold`` tag records which tail-probability policy produced the
    increments.
    """

    values: tuple
    cold: str
    m: int

    def __post_init__(self):
        _check_cold(self.cold)
        if not self.values:
            raise ValidationError("steady-state curve has no values")
        prev = None
        for x in range(1, len(self.values)):
            step = self.values[x] - self.values[x - 1]
            if step < 0:
                raise ValidationError(
                    f"window length {x}: steady-state value decreases",
                    position=x,
                )
            if prev is not None and step > prev:
                raise ValidationError(
                    f"window length {x}: steady-state increment rises from"
                    f" {prev} to {step}",
                    position=x,
                )
            prev = step

    @property
    def max_window(self) -> int:
        return len(self.values) - 1

    def value_at(self, x: int) -> Fraction:
        """Curve value, repeating the last computed value past the domain."""
        if x < 0:
            raise ValidationError(f"window length {x} is negative")
        if x >= len(self.values):
            return self.values[-1]
        return self.values[x]

    def increments(self) -> tuple:
        return tuple(
            self.values[x + 1] - self.values[x]
            for x in range(len(self.values) - 1)
        )


def wss(t: Trace, end: int, length: int) -> int:
    """Distinct data in the window of ``length`` accesses ending at ``end``."""
    if not 0 <= length <= end <= t.n:
        raise ValidationError(
            f"window of length {length} ending at {end} does not fit a trace"
            f" of {t.n} accesses"
        )
    return len(set(t.accesses[end - length : end]))


def fp_bruteforce(t: Trace) -> FootprintCurve:
    """Ground-truth footprint by enumerating every window of every length."""
    totals = kernels.window_totals(array("q", t.accesses), t.n, t.m)
    return FootprintCurve(t.n, t.m, tuple(totals))


def _frequencies(h: ReuseHistogram) -> list[int]:
    """Dense count-per-value array of size n + 2 for a histogram's finite keys."""
    freq = [0] * (h.n + 2)
    for v, c in h.counts.items():
        if v > h.n:
            raise ValidationError(
                f"reuse value {v} exceeds the trace length {h.n}"
            )
        freq[v] += c
    return freq


def _tail_counts(values, limit: int) -> list[int]:
    """tail[x] = how many of ``values`` exceed x, for x in 0..limit + 1."""
    freq = [0] * (limit + 2)
    for v in values:
        if not 1 <= v <= limit:
            raise ValidationError(
                f"access time {v} is outside the trace range 1..{limit}"
            )
        freq[v] += 1
    tail = [0] * (limit + 2)
    for x in range(limit, -1, -1):
        tail[x] = tail[x + 1] + freq[x + 1]
    return tail


def _positive_part_sums(times, limit: int) -> list[int]:
    """out[x] = sum over times t of max(t - x, 0), for x in 0..limit + 1."""
    tail = _tail_counts(times, limit)
    out = [0] * (limit + 2)
    for x in range(limit - 1, -1, -1):
        out[x] = out[x + 1] + tail[x]
    return out


def _check_rt_inputs(h: ReuseHistogram, firsts, lasts) -> None:
    if h.kind != REUSE_TIME:
        raise ValidationError(
            f"footprint formulas need a time-kind histogram, got {h.kind!r}"
        )
    if len(firsts) != len(lasts):
        raise ValidationError(
            f"{len(firsts)} first-access times but {len(lasts)} last-access"
            f" times"
        )
    if len(firsts) != h.infinite_count:
        raise ValidationError(
            f"{len(firsts)} data but {h.infinite_count} infinite reuses: the"
            f" inputs were not measured from one trace"
        )


def fp_absence_counting(h: ReuseHistogram, firsts, rev_lasts) -> FootprintCurve:
    """Footprint via absence counting over the reuse-time histogram.

    A datum is absent from a length-x window in three ways: the window falls
    strictly inside one of its reuse intervals, it ends before the datum's
    first access, or it starts after the datum's last access (measured from
    the trace end, hence the reverse-time last-access inputs). Each deduction
    is a positive-part sum, so the whole curve costs O(n + m).
    """
    _check_rt_inputs(h, firsts, rev_lasts)
    n, m = h.n, len(firsts)
    freq = _frequencies(h)
    tail = [0] * (n + 2)
    for x in range(n, -1, -1):
        tail[x] = tail[x + 1] + freq[x + 1]
    reuse_gap = [0] * (n + 2)
    for x in range(n - 1, -1, -1):
        reuse_gap[x] = reuse_gap[x + 1] + tail[x]
    head_gap = _positive_part_sums(firsts, n)
    tail_gap = _positive_part_sums(rev_lasts, n)
    totals = tuple(
        m * (n - x + 1) - reuse_gap[x] - head_gap[x] - tail_gap[x]
        for x in range(n + 1)
    )
    return FootprintCurve(n, m, totals)


def fp_additive(h: ReuseHistogram, firsts, fwd_lasts) -> FootprintCurve:
    """Footprint by crediting each datum once per window, at first appearance.

    Each window credits one unit per datum plus one per reuse interval capped
    at the window length; positive-part terms over the first accesses and the
    forward last accesses remove the credits that fall off the trace
    boundaries.
    """
    _check_rt_inputs(h, firsts, fwd_lasts)
    n, m = h.n, len(firsts)
    freq = _frequencies(h)
    at_least = [0] * (n + 2)
    for x in range(n, 0, -1):
        at_least[x] = at_least[x + 1] + freq[x]
    first_upto = [0] * (n + 1)
    running = 0
    first_freq = [0] * (n + 2)
    for f in firsts:
        if not 1 <= f <= n:
            raise ValidationError(
                f"first-access time {f} is outside the trace range 1..{n}"
            )
        first_freq[f] += 1
    for x in range(n + 1):
        running += first_freq[x]
        first_upto[x] = running
    last_tail = _tail_counts(fwd_lasts, n)
    totals = [0] * (n + 1)
    capped_reuse = 0
    first_part = 0
    last_part = 0
    for w in range(1, n + 1):
        capped_reuse += at_least[w]
        first_part += first_upto[w - 1]
        last_part += last_tail[n - w + 1]
        totals[w] = w * m + capped_reuse - first_part - last_part
    return FootprintCurve(n, m, tuple(totals))


def fp_incremental(
    h: ReuseHistogram, firsts, fwd_lasts, w_max: int
) -> FootprintCurve:
    """Footprint prefix using only reuse values below each window length.

    Runs in O(w_max + m) after sorting the boundary times: the histogram is
    consumed as running count and weight sums, and each boundary term moves by
    at most one pointer step per window length.
    """
    _check_rt_inputs(h, firsts, fwd_lasts)
    n, m = h.n, len(firsts)
    if not 0 <= w_max <= n:
        raise ValidationError(
            f"maximum window length {w_max} is outside [0, {n}]"
        )
    freq = [0] * (w_max + 1)
    for v, c in h.counts.items():
        if v > n:
            raise ValidationError(
                f"reuse value {v} exceeds the trace length {n}"
            )
        if v < w_max:
            freq[v] += c
    firsts_sorted = sorted(firsts)
    lasts_sorted = sorted(fwd_lasts)
    totals = [0] * (w_max + 1)
    count_below = 0
    weight_below = 0
    min_first_sum = 0
    max_last_sum = m * (n + 1)
    pf = 0
    pl = m
    for w in range(1, w_max + 1):
        count_below += freq[w - 1]
        weight_below += (w - 1) * freq[w - 1]
        while pf < m and firsts_sorted[pf] < w:
            pf += 1
        min_first_sum += m - pf
        threshold = n - w + 1
        while pl > 0 and lasts_sorted[pl - 1] > threshold:
            pl -= 1
        max_last_sum -= pl
        totals[w] = (
            (n + 1) * m
            + (n - 2 * m) * w
            - (w * count_below - weight_below)
            + min_first_sum
            - max_last_sum
        )
    return FootprintCurve(n, m, tuple(totals))


def head_tail_adjust(t: Trace, w: int) -> tuple[int, int]:
    """Boundary corrections for the window-capped reuse deduction at length w.

    The uncorrected count subtracts w - r windows for every reuse of length
    r < w. Reuses whose later access falls within the first w - 1 positions
    (head) or whose earlier access falls within the last w - 1 positions
    (tail) overlap fewer windows than that, and the two shortfalls are
    returned as (lhead, ltail). The exact total satisfies
    W(w) = (n - w + 1) * w - sum((w - i) * rt(i) for i < w) + lhead + ltail.
    """
    if not 1 <= w <= t.n:
        raise ValidationError(f"window length {w} is outside [1, {t.n}]")
    boundary = t.n - w + 1
    last = [0] * (t.m + 1)
    lhead = 0
    ltail = 0
    for i, e in enumerate(t.accesses, start=1):
        prev = last[e]
        if prev:
            if i <= w - 1:
                lhead += w - i
            if prev > boundary:
                ltail += prev - boundary
        last[e] = i
    return lhead, ltail


def ss_fp_recurrence(
    h: ReuseHistogram, cold: str = COLD_EXCLUDE, x_max: int | None = None
) -> SteadyStateCurve:
    """Steady-state footprint from the working-set recurrence.

    Starts at 0 and adds the tail probability P(rt > x) at every step; the
    increments are exactly the time-window miss ratios under the chosen
    cold-miss policy.
    """
    _check_cold(cold)
    if x_max is None:
        x_max = h.n
    if x_max < 0:
        raise ValidationError(f"maximum window length {x_max} is negative")
    if h.n == 0:
        return SteadyStateCurve((Fraction(0),) * (x_max + 1), cold, h.m)
    diff = [0] * (x_max + 2)
    for v, c in h.counts.items():
        diff[0] += c
        if v <= x_max:
            diff[v] -= c
    extra = h.infinite_count if cold == COLD_INCLUDE else 0
    values = [Fraction(0)]
    numerator = 0
    above = 0
    for x in range(x_max):
        above += diff[x]
        numerator += above + extra
        values.append(Fraction(numerator, h.n))
    return SteadyStateCurve(tuple(values), cold, h.m)


def _subtractive_values(counts, m: int, denom: int, x_max: int) -> tuple:
    """Values of m - sum(count(v) * max(v - x, 0)) / denom for x in 0..x_max."""
    tail_after = [0] * (x_max + 2)
    excess = 0
    for v, c in counts.items():
        if v > x_max:
            excess += (v - x_max) * c
            tail_after[x_max] += c
        else:
            tail_after[v - 1] += c
    for x in range(x_max - 1, -1, -1):
        tail_after[x] += tail_after[x + 1]
    values: list = [None] * (x_max + 1)
    deduction = excess
    values[x_max] = Fraction(m * denom - deduction, denom)
    for x in range(x_max - 1, -1, -1):
        deduction += tail_after[x]
        values[x] = Fraction(m * denom - deduction, denom)
    return tuple(values)


def ss_fp_subtractive(
    h: ReuseHistogram, x_max: int | None = None
) -> SteadyStateCurve:
    """Steady-state footprint read directly off the histogram.

    ss(x) = m - sum over finite values v above x of (v - x) * P(rt = v). The
    increments equal the exclude-policy tail probabilities exactly, so this
    curve and the recurrence differ only by their starting value on finite
    traces.
    """
    if x_max is None:
        x_max = h.n
    if x_max < 0:
        raise ValidationError(f"maximum window length {x_max} is negative")
    if h.n == 0:
        return SteadyStateCurve(
            (Fraction(0),) * (x_max + 1), COLD_EXCLUDE, h.m
        )
    values = _subtractive_values(h.counts, h.m, h.n, x_max)
    return SteadyStateCurve(values, COLD_EXCLUDE, h.m)


def ss_fp_limit(h: ReuseHistogram, x_max: int | None = None) -> SteadyStateCurve:
    """Steady-state footprint in the infinite-repetition limit.

    First accesses vanish from the distribution when the trace repeats
    forever, so the finite reuse counts are renormalized over their own total
    before applying the subtractive form. A histogram with no finite reuses
    degenerates to the constant m; an empty histogram gives the single value
    0.
    """
    if h.n == 0:
        return SteadyStateCurve((Fraction(0),), COLD_EXCLUDE, h.m)
    finite = h.finite_total
    if x_max is None:
        x_max = h.max_finite + 1 if finite else 1
    if x_max < 0:
        raise ValidationError(f"maximum window length {x_max} is negative")
    if finite == 0:
        return SteadyStateCurve(
            (Fraction(h.m),) * (x_max + 1), COLD_EXCLUDE, h.m
        )
    values = _subtractive_values(h.counts, h.m, finite, x_max)
    return SteadyStateCurve(values, COLD_EXCLUDE, h.m)


def recover_rt_from_fp(
    curve: FootprintCurve, firsts, fwd_lasts
) -> ReuseHistogram:
    """Recover the reuse-time histogram from a full footprint curve.

    The second difference of the total working-set size at window length x
    loses one window per reuse of length exactly x, per first access at time
    x, and per last access at time n + 1 - x; subtracting the boundary counts
    isolates the reuse counts. Requires the complete curve and the boundary
    times of the originating trace.
    """
    n, m = curve.n, len(firsts)
    if curve.max_window != n:
        raise ValidationError(
            f"recovery needs the full curve: got 0..{curve.max_window} for a"
            f" trace of {n} accesses"
        )
    if len(fwd_lasts) != m:
        raise ValidationError(
            f"{m} first-access times but {len(fwd_lasts)} last-access times"
        )
    first_count = [0] * (n + 2)
    for f in firsts:
        if not 1 <= f <= n:
            raise ValidationError(f"first-access time {f} is outside 1..{n}")
        first_count[f] += 1
    last_count = [0] * (n + 2)
    for last in fwd_lasts:
        if not 1 <= last <= n:
            raise ValidationError(f"last-access time {last} is outside 1..{n}")
        last_count[last] += 1
    w = curve.totals
    counts: dict[int, int] = {}
    for x in range(1, n):
        second = w[x + 1] - 2 * w[x] + w[x - 1]
        c = -second - first_count[x] - last_count[n + 1 - x]
        if c < 0:
            raise ValidationError(
                f"window length {x}: recovered count {c} is negative; the"
                f" curve and boundary times are inconsistent",
                position=x,
            )
        if c:
            counts[x] = c
    return ReuseHistogram(REUSE_TIME, counts, m, n, m)


def compute_footprint(
    t: Trace, method: str = "incremental", w_max: int | None = None
) -> FootprintCurve:
    """Measure the footprint of a trace by the chosen method.

    ``w_max`` truncates the curve; the incremental method never computes past
    it, the others compute fully and slice.
    """
    if method not in FOOTPRINT_METHODS:
        raise ValidationError(
            f"unknown footprint method {method!r}; expected one of"
            f" {', '.join(FOOTPRINT_METHODS)}"
        )
    if method == "brute":
        curve = fp_bruteforce(t)
        return curve if w_max is None else curve.truncated(w_max)
    h = build_histogram(reuse_time_sequence(t))
    if method == "absence":
        curve = fp_absence_counting(h, t.firsts, t.reverse_lasts)
        return curve if w_max is None else curve.truncated(w_max)
    if method == "additive":
        curve = fp_additive(h, t.firsts, t.forward_lasts)
        return curve if w_max is None else curve.truncated(w_max)
    return fp_incremental(
        h, t.firsts, t.forward_lasts, t.n if w_max is None else w_max
    )
