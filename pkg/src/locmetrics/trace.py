"""Trace representation, parsing, reuse measurement, and synthetic generators.

A trace is a finite sequence of accesses to abstract data items. On ingest it
is normalized to address-independent form: data are renamed to dense integer
ids 1..m in order of first appearance, so any two traces with the same access
pattern compare equal regardless of the original tokens.
"""

from __future__ import annotations

import math
from array import array
from dataclasses import dataclass
from typing import Iterable, Sequence

from ._dispatch import kernels
from .errors import ParseError, ValidationError

REUSE_TIME = "rt"
REUSE_DISTANCE = "rd"
INFINITE = math.inf

_KINDS = (REUSE_TIME, REUSE_DISTANCE)
GENERATOR_KINDS = ("cyclic", "sawtooth", "fused")


@dataclass(frozen=True)
class Trace:
    """Address-independent access trace with per-datum statistics.

    Access times are 1-based. ``firsts``, ``forward_lasts``, ``reverse_lasts``
    and ``counts`` are indexed by datum id minus one; the reverse last access
    time is the first access time of the reversed trace, n + 1 minus the
    forward last access time. Instances are immutable; build them with
    ``Trace.from_ids`` or ``parse_trace``.
    """

    accesses: tuple[int, ...]
    n: int
    m: int
    firsts: tuple[int, ...]
    forward_lasts: tuple[int, ...]
    reverse_lasts: tuple[int, ...]
    counts: tuple[int, ...]

    @classmethod
    def from_ids(cls, ids: Iterable) -> "Trace":
        """Build a trace from any iterable of hashable access tokens."""
        rename: dict = {}
        accesses: list[int] = []
        firsts: list[int] = []
        lasts: list[int] = []
        counts: list[int] = []
        for pos, token in enumerate(ids, start=1):
            e = rename.get(token)
            if e is None:
                e = len(rename) + 1
                rename[token] = e
                firsts.append(pos)
                lasts.append(pos)
                counts.append(1)
            else:
                lasts[e - 1] = pos
                counts[e - 1] += 1
            accesses.append(e)
        n = len(accesses)
        return cls(
            tuple(accesses),
            n,
            len(firsts),
            tuple(firsts),
            tuple(lasts),
            tuple(n + 1 - last for last in lasts),
            tuple(counts),
        )

    def __len__(self) -> int:
        return self.n

    def hotness(self):
        """Average number of accesses per datum, n/m."""
        from fractions import Fraction

        if self.m == 0:
            return Fraction(0)
        return Fraction(self.n, self.m)

    def to_text(self) -> str:
        """Render in the standard one-token-per-line text format."""
        if self.n == 0:
            return ""
        return "\n".join(str(e) for e in self.accesses) + "\n"


def parse_trace(text: str) -> Trace:
    """Parse the one-token-per-line trace format.

    Blank lines and lines starting with ``#`` are ignored; any other line must
    hold exactly one whitespace-free token. Tokens are renamed to dense ids in
    first-appearance order.
    """
    tokens: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 1:
            raise ParseError(
                f"line {lineno}: expected one access token, found {len(parts)}",
                position=lineno,
            )
        tokens.append(parts[0])
    return Trace.from_ids(tokens)


def format_trace(t: Trace) -> str:
    """Inverse of ``parse_trace`` for normalized traces."""
    return t.to_text()


@dataclass(frozen=True)
class ReuseSequence:
    """Per-access reuse values, one per access of the originating trace.

    ``kind`` is ``"rt"`` (reuse time: elapsed accesses since the previous
    access of the same datum) or ``"rd"`` (reuse distance: distinct data
    accessed since then, the reused datum included). First accesses carry
    ``INFINITE``.
    """

    kind: str
    values: tuple

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown reuse kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.values)

    @property
    def infinite_count(self) -> int:
        return sum(1 for v in self.values if v == INFINITE)

    def validate(self, n: int | None = None, m: int | None = None) -> None:
        """Check value ranges; bounds are taken from n and m when given."""
        for pos, v in enumerate(self.values, start=1):
            if v == INFINITE:
                continue
            if not isinstance(v, int) or v < 1:
                raise ValidationError(
                    f"position {pos}: reuse value {v!r} is not a positive integer",
                    position=pos,
                )
            bound = None if self.kind == REUSE_TIME else m
            if self.kind == REUSE_TIME and n is not None:
                bound = n - 1
            if bound is not None and v > bound:
                raise ValidationError(
                    f"position {pos}: reuse value {v} exceeds bound {bound}",
                    position=pos,
                )


@dataclass(frozen=True)
class PerDatumProfile:
    """First-access time plus the ordered finite reuse values of one datum.

    The first access has no reuse value, so ``reuses`` holds one entry per
    access after the first.
    """

    datum: int
    first: int
    reuses: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown reuse kind {self.kind!r}")
        if self.first < 1:
            raise ValidationError(
                f"datum {self.datum}: first access time {self.first} is not positive"
            )
        for r in self.reuses:
            if not isinstance(r, int) or r < 1:
                raise ValidationError(
                    f"datum {self.datum}: reuse value {r!r} is not a positive integer"
                )

    @property
    def access_count(self) -> int:
        return 1 + len(self.reuses)


def _ids_array(t: Trace) -> array:
    return array("q", t.accesses)


def _to_values(raw) -> tuple:
    return tuple(INFINITE if v == 0 else v for v in raw)


def reuse_time_sequence(t: Trace) -> ReuseSequence:
    """Measure the reuse time of every access in one pass."""
    raw = kernels.reuse_times(_ids_array(t), t.n, t.m)
    return ReuseSequence(REUSE_TIME, _to_values(raw))


def reuse_distance_sequence(t: Trace) -> ReuseSequence:
    """Measure the reuse distance (LRU stack distance) of every access."""
    raw = kernels.reuse_distances(_ids_array(t), t.n, t.m)
    return ReuseSequence(REUSE_DISTANCE, _to_values(raw))


def _naive_reuse_distances(t: Trace) -> tuple:
    """Quadratic distinct-count scan; independent oracle for reuse distances."""
    out: list = []
    for i, e in enumerate(t.accesses):
        j = i - 1
        seen: set[int] = set()
        while j >= 0 and t.accesses[j] != e:
            seen.add(t.accesses[j])
            j -= 1
        out.append(INFINITE if j < 0 else len(seen) + 1)
    return tuple(out)


def per_datum(seq: ReuseSequence, t: Trace) -> tuple[PerDatumProfile, ...]:
    """Split a measured reuse sequence into one profile per datum.

    The first-access times and the finite reuse lists together cover every
    access exactly once.
    """
    if len(seq.values) != t.n:
        raise ValidationError(
            f"sequence length {len(seq.values)} does not match trace length {t.n}"
        )
    buckets: list[list[int]] = [[] for _ in range(t.m)]
    for pos, (e, v) in enumerate(zip(t.accesses, seq.values), start=1):
        if v == INFINITE:
            if pos != t.firsts[e - 1]:
                raise ValidationError(
                    f"position {pos}: infinite reuse on a repeat access of datum {e}",
                    position=pos,
                )
        else:
            buckets[e - 1].append(int(v))
    return tuple(
        PerDatumProfile(e, t.firsts[e - 1], tuple(buckets[e - 1]), seq.kind)
        for e in range(1, t.m + 1)
    )


def interleave(traces: Sequence[Trace]) -> Trace:
    """Merge traces round-robin, renaming data so namespaces stay disjoint.

    One access is taken from each trace in turn; exhausted traces are skipped.
    With equal-length inputs this is uniform k-way interleaving, which scales
    every constituent reuse time by k.
    """
    streams = []
    offset = 0
    for t in traces:
        streams.append((iter(t.accesses), offset))
        offset += t.m
    merged: list[int] = []
    while streams:
        still = []
        for it, off in streams:
            v = next(it, None)
            if v is None:
                continue
            merged.append(off + v)
            still.append((it, off))
        streams = still
    return Trace.from_ids(merged)


def generate(kind: str, m: int, reps: int) -> Trace:
    """Synthesize a benchmark trace family.

    cyclic: 1..m repeated reps times (n = m*reps).
    sawtooth: reps full up-and-down sweeps 1..m,m..1 (n = 2*m*reps).
    fused: each datum reps times consecutively (n = m*reps); every finite
    reuse distance is 1, the best locality any reordering can achieve.
    """
    if m < 1:
        raise ValidationError(f"datum count must be at least 1, got {m}")
    if reps < 1:
        raise ValidationError(f"repetition count must be at least 1, got {reps}")
    if kind == "cyclic":
        ids = list(range(1, m + 1)) * reps
    elif kind == "sawtooth":
        ids = (list(range(1, m + 1)) + list(range(m, 0, -1))) * reps
    elif kind == "fused":
        ids = [e for e in range(1, m + 1) for _ in range(reps)]
    else:
        raise ValidationError(
            f"unknown generator kind {kind!r}; expected one of {', '.join(GENERATOR_KINDS)}"
        )
    return Trace.from_ids(ids)
