# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: the fast twin of ``_pykernels``.

Same names, signatures, and observable behavior as the pure-Python module;
inputs are dense 1-based datum ids, zero in an output array means "no previous
access" (an infinite reuse).
"""

from cpython cimport array

import array as _array

cdef array.array _TEMPLATE = _array.array("q", [])


def reuse_times(object ids_obj, Py_ssize_t n, Py_ssize_t m):
    """Elapsed accesses since each datum's previous access, 0 at first access."""
    cdef array.array out_a = array.clone(_TEMPLATE, n, zero=True)
    cdef array.array last_a = array.clone(_TEMPLATE, m + 1, zero=True)
    if n == 0:
        return out_a
    cdef const long long[::1] ids = ids_obj
    cdef long long[::1] out = out_a
    cdef long long[::1] last = last_a
    cdef Py_ssize_t i
    cdef long long e, p
    for i in range(n):
        e = ids[i]
        p = last[e]
        if p:
            out[i] = i + 1 - p
        last[e] = i + 1
    return out_a


def reuse_distances(object ids_obj, Py_ssize_t n, Py_ssize_t m):
    """Distinct data accessed since each datum's previous access, itself included.

    A binary indexed tree marks the current last-access position of every live
    datum, so each query ranks the reusing datum among the m last-access times.
    """
    cdef array.array out_a = array.clone(_TEMPLATE, n, zero=True)
    cdef array.array tree_a = array.clone(_TEMPLATE, n + 1, zero=True)
    cdef array.array last_a = array.clone(_TEMPLATE, m + 1, zero=True)
    if n == 0:
        return out_a
    cdef const long long[::1] ids = ids_obj
    cdef long long[::1] out = out_a
    cdef long long[::1] tree = tree_a
    cdef long long[::1] last = last_a
    cdef Py_ssize_t i
    cdef long long e, p, s, pos
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
    return out_a


def lru_distances(object ids_obj, Py_ssize_t n, Py_ssize_t m):
    """Stack distances from an explicit move-to-front list (simulator oracle)."""
    cdef array.array out_a = array.clone(_TEMPLATE, n, zero=True)
    cdef array.array prev_a = array.clone(_TEMPLATE, m + 1, zero=True)
    cdef array.array nxt_a = array.clone(_TEMPLATE, m + 1, zero=True)
    cdef array.array present_a = array.clone(_TEMPLATE, m + 1, zero=True)
    if n == 0:
        return out_a
    cdef const long long[::1] ids = ids_obj
    cdef long long[::1] out = out_a
    cdef long long[::1] prev = prev_a
    cdef long long[::1] nxt = nxt_a
    cdef long long[::1] present = present_a
    cdef long long head = 0
    cdef Py_ssize_t i
    cdef long long e, j, depth
    for i in range(n):
        e = ids[i]
        if not present[e]:
            present[e] = 1
            out[i] = 0
        else:
            if head == e:
                out[i] = 1
                continue
            depth = 1
            j = nxt[head]
            while j != e:
                depth += 1
                j = nxt[j]
            out[i] = depth + 1
            if prev[e]:
                nxt[prev[e]] = nxt[e]
            if nxt[e]:
                prev[nxt[e]] = prev[e]
        nxt[e] = head
        prev[e] = 0
        if head:
            prev[head] = e
        head = e
    return out_a


def window_totals(object ids_obj, Py_ssize_t n, Py_ssize_t m):
    """Total distinct-data count over all windows of each length 0..n.

    Direct sliding-window enumeration, quadratic in n; this is the ground
    truth the closed-form footprint computations are checked against.
    """
    cdef array.array totals_a = array.clone(_TEMPLATE, n + 1, zero=True)
    cdef array.array cnt_a = array.clone(_TEMPLATE, m + 1, zero=True)
    if n == 0:
        return totals_a
    cdef const long long[::1] ids = ids_obj
    cdef long long[::1] totals = totals_a
    cdef long long[::1] cnt = cnt_a
    cdef Py_ssize_t x, i, t
    cdef long long e, distinct, total
    for x in range(1, n + 1):
        for i in range(m + 1):
            cnt[i] = 0
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
    return totals_a


def pd_rd_schedule(object firsts_obj, object reuses_obj, object offsets_obj,
                   Py_ssize_t n, Py_ssize_t m, bint least_recent):
    """Rebuild an access order from per-datum reuse distances.

    Each datum starts scheduled at its first-access time. At every time step
    the scheduled candidate with the most recent previous access is emitted
    (``least_recent`` flips the tie-break; it exists so tests can show the
    flipped rule fails). Emitting a repeat access postpones by one every datum
    whose pending reuse window already contains the emitted datum, which is
    exactly the data last accessed before the emitted datum's previous access.
    Raises ValueError(position) if no datum is scheduled at some time.
    """
    cdef array.array out_a = array.clone(_TEMPLATE, n, zero=True)
    cdef array.array lastpos_a = array.clone(_TEMPLATE, m + 1, zero=True)
    cdef array.array nextpos_a = array.clone(_TEMPLATE, m + 1, zero=True)
    cdef array.array ptr_a = array.clone(_TEMPLATE, m + 1, zero=True)
    if n == 0:
        return out_a
    cdef const long long[::1] firsts = firsts_obj
    cdef const long long[::1] reuses
    cdef const long long[::1] offsets = offsets_obj
    cdef long long[::1] out = out_a
    cdef long long[::1] lastpos = lastpos_a
    cdef long long[::1] nextpos = nextpos_a
    cdef long long[::1] ptr = ptr_a
    cdef bint have_reuses = len(reuses_obj) > 0
    if have_reuses:
        reuses = reuses_obj
    cdef long long done = n + 2
    cdef Py_ssize_t i
    cdef long long e, chosen, lp, k
    for e in range(1, m + 1):
        nextpos[e] = firsts[e - 1]
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
    return out_a
