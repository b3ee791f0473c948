"""Rebuilding address-independent traces from reuse measurements.

Four inverse conversions are provided: whole-trace reuse-time and
reuse-distance sequences invert directly, while per-datum profiles (first
access time plus ordered reuse values per datum) are re-scheduled into a
single timeline. Each inverse is exact on measurements taken from a real
trace; inconsistent inputs fail with the earliest impossible position.
"""

from __future__ import annotations

from array import array

from ._dispatch import kernels
from .errors import ParseError, ValidationError
from .trace import (
    INFINITE,
    REUSE_DISTANCE,
    REUSE_TIME,
    PerDatumProfile,
    ReuseSequence,
    Trace,
)


def ai_from_rt(seq: ReuseSequence) -> Trace:
    """Invert a reuse-time sequence: each finite value points back v accesses."""
    if seq.kind != REUSE_TIME:
        raise ValidationError(
            f"cannot rebuild from kind {seq.kind!r}: a reuse-time sequence is required"
        )
    ids: list[int] = []
    fresh = 0
    for i, v in enumerate(seq.values, start=1):
        if v == INFINITE:
            fresh += 1
            ids.append(fresh)
            continue
        v = int(v)
        if not 1 <= v <= i - 1:
            raise ValidationError(
                f"position {i}: reuse time {v} points before the trace start",
                position=i,
            )
        ids.append(ids[i - 1 - v])
    return Trace.from_ids(ids)


def ai_from_rd(seq: ReuseSequence) -> Trace:
    """Invert a reuse-distance sequence by replaying a most-recent-first stack.

    A finite distance d selects the d-th most recently used datum and moves it
    to the front; an infinite value introduces the next fresh datum.
    """
    if seq.kind != REUSE_DISTANCE:
        raise ValidationError(
            f"cannot rebuild from kind {seq.kind!r}: a reuse-distance sequence"
            f" is required"
        )
    stack: list[int] = []
    ids: list[int] = []
    fresh = 0
    for i, v in enumerate(seq.values, start=1):
        if v == INFINITE:
            fresh += 1
            e = fresh
        else:
            d = int(v)
            if not 1 <= d <= len(stack):
                raise ValidationError(
                    f"position {i}: reuse distance {d} exceeds the"
                    f" {len(stack)} data seen so far",
                    position=i,
                )
            e = stack.pop(d - 1)
        stack.insert(0, e)
        ids.append(e)
    return Trace.from_ids(ids)


def _checked_profiles(profiles, kind: str) -> list[PerDatumProfile]:
    profs = list(profiles)
    seen: set[int] = set()
    for p in profs:
        if p.kind != kind:
            raise ValidationError(
                f"profile for datum {p.datum} has kind {p.kind!r}; this"
                f" reconstruction needs {kind!r}"
            )
        if p.datum in seen:
            raise ValidationError(f"duplicate profile for datum {p.datum}")
        seen.add(p.datum)
    return profs


def ai_from_pd_rt(profiles) -> Trace:
    """Rebuild a trace from per-datum reuse-time profiles.

    Reuse times fix every access at an absolute position (first access plus
    the running sum of reuses), so the profiles are merged by position. Two
    accesses landing on one position, or a position left empty, make the
    profiles inconsistent; the earliest such position is reported.
    """
    profs = _checked_profiles(profiles, REUSE_TIME)
    events: list[tuple[int, int]] = []
    for p in profs:
        t = p.first
        events.append((t, p.datum))
        for r in p.reuses:
            t += r
            events.append((t, p.datum))
    events.sort()
    for k, (t, datum) in enumerate(events):
        if k > 0 and t == events[k - 1][0]:
            raise ValidationError(
                f"time {t}: accesses of data {events[k - 1][1]} and {datum}"
                f" collide",
                position=t,
            )
        if t != k + 1:
            raise ValidationError(
                f"time {k + 1}: no access is scheduled (next is datum {datum}"
                f" at time {t})",
                position=k + 1,
            )
    return Trace.from_ids(datum for _, datum in events)


def ai_from_pd_rd(profiles, *, _least_recent: bool = False) -> Trace:
    """Rebuild a trace from per-datum reuse-distance profiles.

    Distances pace only the gaps between repeats, so accesses are scheduled
    dynamically: each datum is first placed optimistically (as if every
    intervening access were distinct), the scheduled candidate with the most
    recent previous access is emitted at each step, and emitting a repeat
    pushes back every datum whose pending window already contained the emitted
    datum. ``_least_recent`` flips the emission tie-break so tests can
    demonstrate that preferring stale candidates breaks reconstruction.
    """
    profs = _checked_profiles(profiles, REUSE_DISTANCE)
    profs.sort(key=lambda p: p.first)
    for a, b in zip(profs, profs[1:]):
        if a.first == b.first:
            raise ValidationError(
                f"time {a.first}: data {a.datum} and {b.datum} share a"
                f" first-access time",
                position=a.first,
            )
    n = sum(p.access_count for p in profs)
    m = len(profs)
    firsts = array("q", (p.first for p in profs))
    reuses = array("q", (r for p in profs for r in p.reuses))
    offsets = array("q", bytes(8 * (m + 1)))
    running = 0
    for k, p in enumerate(profs):
        running += len(p.reuses)
        offsets[k + 1] = running
    try:
        slots = kernels.pd_rd_schedule(
            firsts, reuses, offsets, n, m, 1 if _least_recent else 0
        )
    except ValueError as exc:
        pos = exc.args[0] if exc.args else "?"
        raise ValidationError(
            f"time {pos}: no datum has an access scheduled; the profiles are"
            f" inconsistent",
            position=pos if isinstance(pos, int) else None,
        ) from None
    return Trace.from_ids(slots)


def format_reuse_sequence(seq: ReuseSequence) -> str:
    """Serialize a reuse sequence: a #kind header, then one value per line."""
    lines = [f"#kind={seq.kind}"]
    for v in seq.values:
        lines.append("inf" if v == INFINITE else str(int(v)))
    return "\n".join(lines) + "\n"


def parse_reuse_sequence(text: str) -> ReuseSequence:
    """Parse the one-value-per-line reuse sequence format."""
    kind = None
    values: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                continue
            if key.strip() != "kind":
                raise ParseError(
                    f"line {lineno}: unexpected header {key.strip()!r} in a"
                    f" reuse sequence file",
                    position=lineno,
                )
            if kind is not None:
                raise ParseError(
                    f"line {lineno}: duplicate #kind header", position=lineno
                )
            kind = value.strip()
            continue
        parts = line.split()
        if len(parts) != 1:
            raise ParseError(
                f"line {lineno}: expected one reuse value, found {len(parts)}",
                position=lineno,
            )
        if parts[0] == "inf":
            values.append(INFINITE)
            continue
        try:
            values.append(int(parts[0]))
        except ValueError:
            raise ParseError(
                f"line {lineno}: reuse value {parts[0]!r} is neither an"
                f" integer nor 'inf'",
                position=lineno,
            ) from None
    if kind is None:
        raise ParseError("reuse sequence file is missing its #kind header")
    seq = ReuseSequence(kind, tuple(values))
    seq.validate()
    return seq


def format_profiles(profiles) -> str:
    """Serialize profiles: a #kind header, then `id first reuse...` per line."""
    profs = list(profiles)
    if not profs:
        raise ValidationError("cannot format zero profiles")
    kinds = {p.kind for p in profs}
    if len(kinds) != 1:
        raise ValidationError(f"profiles mix kinds {sorted(kinds)}")
    lines = [f"#kind={profs[0].kind}"]
    for p in profs:
        fields = [str(p.datum), str(p.first), *map(str, p.reuses)]
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def parse_profiles(text: str) -> tuple[PerDatumProfile, ...]:
    """Parse the per-datum profile format written by ``format_profiles``."""
    kind = None
    profs: list[PerDatumProfile] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                continue
            if key.strip() != "kind":
                raise ParseError(
                    f"line {lineno}: unexpected header {key.strip()!r} in a"
                    f" profile file",
                    position=lineno,
                )
            kind = value.strip()
            continue
        if kind is None:
            raise ParseError(
                f"line {lineno}: profile data before the #kind header",
                position=lineno,
            )
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(
                f"line {lineno}: expected `id first reuse...`, found only"
                f" {len(parts)} fields",
                position=lineno,
            )
        try:
            numbers = [int(p) for p in parts]
        except ValueError:
            raise ParseError(
                f"line {lineno}: non-integer field in {line!r}", position=lineno
            ) from None
        datum, first, *reuses = numbers
        if datum in seen:
            raise ParseError(
                f"line {lineno}: duplicate profile for datum {datum}",
                position=lineno,
            )
        seen.add(datum)
        profs.append(PerDatumProfile(datum, first, tuple(reuses), kind))
    if kind is None:
        raise ParseError("profile file is missing its #kind header")
    return tuple(profs)
