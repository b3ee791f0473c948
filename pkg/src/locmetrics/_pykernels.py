"""Pure-Python kernels: the fallback twin of the compiled extension.

Every function here has the same name, signature, and observable behavior as
its counterpart in ``_ckernels``; the test suite checks the two backends
against each other. Inputs are sequences of dense 1-based datum ids; a zero in
an output array is the sentinel for "no previous access" (an infinite reuse).
"""

from __future__ import annotations

from array import array


def reuse_times(ids, n, m):
    """Elapsed accesses since each datum's previous access, 0 at first access."""
    last = [0] * (m + 1)
    out = array("q", bytes(8 * n))
    for i in range(n):
        e = ids[i]
        p = last[e]
        if p:
            out[i] = i + 1 - p
        last[e] = i + 1
    return out


def reuse_distances(ids, n, m):
    """Distinct data accessed since each datum's previous access, itself included.

    A binary indexed tree marks the current last-access position of every live
    datum, so each query ranks the reusing datum among the m last-access times.
    """
    tree = [0] * (n + 1)
    last = [0] * (m + 1)
    out = array("q", bytes(8 * n))
    for i in range(1, n + 1):
        e = ids[i - 1]
        p = last[e]
        if p:
            s = 0
            pos = i - 1
            while pos:
                s += tree[pos]
                pos -= pos & -pos
            pos = p
            while pos:
                s -= tree[pos]
                pos -= pos & -pos
            out[i - 1] = s + 1
            pos = p
            while pos <= n:
                tree[pos] -= 1
                pos += pos & -pos
        pos = i
        while pos <= n:
            tree[pos] += 1
            pos += pos & -pos
        last[e] = i
    return out


def lru_distances(ids, n, m):
    """Stack distances from an explicit move-to-front list (simulator oracle)."""
    stack: list[int] = []
    out = array("q", bytes(8 * n))
    for i in range(n):
        e = ids[i]
        try:
            d = stack.index(e) + 1
        except ValueError:
            stack.insert(0, e)
            continue
        out[i] = d
        del stack[d - 1]
        stack.insert(0, e)
    return out


def window_totals(ids, n, m):
    """Total distinct-data count over all windows of each length 0..n.

    Direct sliding-window enumeration, quadratic in n; this is the ground
    truth the closed-form footprint computations are checked against.
    """
    totals = array("q", bytes(8 * (n + 1)))
    for x in range(1, n + 1):
        cnt = [0] * (m + 1)
        distinct = 0
        for i in range(x):
            e = ids[i]
            if cnt[e] == 0:
                distinct += 1
            cnt[e] += 1
        total = distinct
        for t in range(x, n):
            e = ids[t - x]
            cnt[e] -= 1
            if cnt[e] == 0:
                distinct -= 1
            e = ids[t]
            if cnt[e] == 0:
                distinct += 1
            cnt[e] += 1
            total += distinct
        totals[x] = total
    return totals


def pd_rd_schedule(firsts, reuses, offsets, n, m, least_recent):
    """Rebuild an access order from per-datum reuse distances.

    Each datum starts scheduled at its first-access time. At every time step
    the scheduled candidate with the most recent previous access is emitted
    (``least_recent`` flips the tie-break; it exists so tests can show the
    flipped rule fails). Emitting a repeat access postpones by one every datum
    whose pending reuse window already contains the emitted datum, which is
    exactly the data last accessed before the emitted datum's previous access.
    Raises ValueError(position) if no datum is scheduled at some time.
    """
    done = n + 2
    lastpos = [0] * (m + 1)
    nextpos = [0] * (m + 1)
    ptr = [0] * (m + 1)
    for e in range(1, m + 1):
        nextpos[e] = firsts[e - 1]
    out = array("q", bytes(8 * n))
    for i in range(1, n + 1):
        chosen = 0
        for e in range(1, m + 1):
            if nextpos[e] == i:
                if chosen == 0:
                    chosen = e
                elif least_recent:
                    if lastpos[e] < lastpos[chosen]:
                        chosen = e
                elif lastpos[e] > lastpos[chosen]:
                    chosen = e
        if chosen == 0:
            raise ValueError(i)
        lp = lastpos[chosen]
        if lp > 0:
            for e in range(1, m + 1):
                if 0 < lastpos[e] < lp:
                    nextpos[e] += 1
        out[i - 1] = chosen
        lastpos[chosen] = i
        k = offsets[chosen - 1] + ptr[chosen]
        if k < offsets[chosen]:
            nextpos[chosen] = i + reuses[k]
            ptr[chosen] += 1
        else:
            nextpos[chosen] = done
    return out
