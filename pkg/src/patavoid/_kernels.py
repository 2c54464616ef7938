"""Hot loops: formula matching, incremental avoidance and backtracking.

Everything here works on plain integer arrays so it can be compiled by numba
(see :mod:`patavoid._jit`). Words are ``int8`` arrays; ``SEP`` marks the
boundary between independent texts packed into one array.

A *plan* is one ordering of a formula's fragments, encoded as

* ``syms``   flat variable indices of the fragments, in plan order,
* ``fstart`` offset of each fragment inside ``syms``,
* ``flen``   length of each fragment.

When ``pinned`` is true the first fragment of the plan must end exactly at
position ``n`` (it is matched right to left); this is what the incremental
check needs, since a fresh occurrence has to use the last letter.
"""
from __future__ import annotations

import numpy as np

from ._jit import kernel

SEP = -1
BIG = 1 << 40


@kernel
def match_plan(w, segend, n, syms, fstart, flen, nv, lmin, lmax, pinned,
               fixed, vstart, vlen, out):
    """Number of matches found, stopping at the first one when ``out`` has no
    rows; otherwise each match is stored as ``vstart ++ vlen`` in ``out``
    until it is full."""
    nfrag = fstart.shape[0]
    nsym = 0
    for j in range(nfrag):
        nsym += flen[j]
    nops = nfrag + nsym
    kind = np.empty(nops, np.int64)
    var = np.empty(nops, np.int64)
    back = np.zeros(nops, np.bool_)
    rest = np.zeros(nops, np.int64)
    # a fragment whose variables are all bound already needs one match only;
    # backtracking out of its last op skips its remaining positions
    det = np.zeros(nops, np.bool_)
    head = np.zeros(nops, np.int64)
    seen = np.zeros(nv, np.bool_)
    for v in range(nv):
        seen[v] = fixed[v]
    o = 0
    for j in range(nfrag):
        b = pinned and j == 0
        kind[o] = 0
        var[o] = j
        back[o] = b
        rest[o] = flen[j]
        d = True
        for s in range(flen[j]):
            if not seen[syms[fstart[j] + s]]:
                d = False
        for s in range(flen[j]):
            seen[syms[fstart[j] + s]] = True
        det[o + flen[j]] = d
        head[o + flen[j]] = o
        o += 1
        for s in range(flen[j]):
            if b:
                idx = fstart[j] + flen[j] - 1 - s
            else:
                idx = fstart[j] + s
            kind[o] = 1
            var[o] = syms[idx]
            back[o] = b
            rest[o] = flen[j] - 1 - s
            o += 1

    owner = np.full(nv, -1, np.int64)
    for v in range(nv):
        if fixed[v]:
            owner[v] = -2
    choice = np.zeros(nops, np.int64)
    cur = np.zeros(nops + 1, np.int64)
    bnd = np.zeros(nops + 1, np.int64)
    i = 0
    fresh = True
    found = 0
    while i >= 0:
        if i == nops:
            if out.shape[0] == 0:
                return 1
            for v in range(nv):
                out[found, v] = vstart[v]
                out[found, nv + v] = vlen[v]
            found += 1
            if found == out.shape[0]:
                return found
            i -= 1
            fresh = False
            continue
        ok = False
        if det[i] and not fresh:
            i = head[i] - 1
            continue
        if kind[i] == 0:
            if back[i]:
                if fresh:
                    cur[i + 1] = n
                    bnd[i + 1] = 0
                    ok = True
            else:
                p = 0 if fresh else choice[i] + 1
                last = n - rest[i]
                while p <= last:
                    if w[p] != SEP:
                        e = segend[p]
                        if e > n:
                            e = n
                        if e - p >= rest[i]:
                            break
                    p += 1
                if p <= last:
                    choice[i] = p
                    cur[i + 1] = p
                    e = segend[p]
                    if e > n:
                        e = n
                    bnd[i + 1] = e
                    ok = True
        else:
            v = var[i]
            c = cur[i]
            bd = bnd[i]
            bnd[i + 1] = bd
            if owner[v] == -1 or owner[v] == i:
                ln = lmin[v] if fresh else vlen[v] + 1
                if back[i]:
                    top = c - bd - rest[i]
                else:
                    top = bd - c - rest[i]
                if lmax[v] < top:
                    top = lmax[v]
                if ln <= top:
                    owner[v] = i
                    vlen[v] = ln
                    if back[i]:
                        vstart[v] = c - ln
                        cur[i + 1] = c - ln
                    else:
                        vstart[v] = c
                        cur[i + 1] = c + ln
                    ok = True
                else:
                    owner[v] = -1
            elif fresh:
                ln = vlen[v]
                s0 = vstart[v]
                st = c - ln if back[i] else c
                inside = st >= bd if back[i] else st + ln <= bd
                if inside:
                    ok = True
                    for x in range(ln):
                        if w[st + x] != w[s0 + x]:
                            ok = False
                            break
                    if ok:
                        cur[i + 1] = st if back[i] else st + ln
        if ok:
            i += 1
            fresh = True
        else:
            i -= 1
            fresh = False
    return found


@kernel
def suffix_square(w, n, lo, hi):
    """Period of a square ending at ``n`` with period in [lo, hi], else 0."""
    top = n // 2
    if hi < top:
        top = hi
    for p in range(lo, top + 1):
        eq = True
        for x in range(p):
            if w[n - 2 * p + x] != w[n - p + x]:
                eq = False
                break
        if eq:
            return p
    return 0


@kernel
def find_square_scan(w, lo, hi):
    """First square (by period, then position) with period in [lo, hi].

    Returns ``(position, period)`` or ``(-1, 0)``. Separator cells never
    take part in a square.
    """
    n = w.shape[0]
    top = n // 2
    if hi < top:
        top = hi
    for p in range(lo, top + 1):
        run = 0
        for i in range(n - p):
            if w[i] != SEP and w[i] == w[i + p]:
                run += 1
                if run == p:
                    return i - p + 1, p
            else:
                run = 0
    return -1, 0


@kernel
def extension_ok(w, n, segend, psyms, pfstart, pflen, pnfrag, pnv, lmin, lmax,
                 fixed, vstart, vlen, forb, foff, sqlo, sqhi, mletter, mmin):
    """True when ``w[:n]`` stays admissible given that ``w[:n-1]`` was."""
    # forbidden factors as suffixes
    for f in range(foff.shape[0] - 1):
        a = foff[f]
        ln = foff[f + 1] - a
        if ln <= n:
            hit = True
            for x in range(ln):
                if w[n - ln + x] != forb[a + x]:
                    hit = False
                    break
            if hit:
                return False
    if sqlo > 0:
        if suffix_square(w, n, sqlo, sqhi) > 0:
            return False
    for m in range(mletter.shape[0]):
        c = mletter[m]
        top = (n - 1) // 2
        for p in range(mmin[m], top + 1):
            if w[n - 2 * p - 1] != c:
                continue
            eq = True
            for x in range(p):
                if w[n - 2 * p + x] != w[n - p + x]:
                    eq = False
                    break
            if eq:
                return False
    none = np.zeros((0, 1), np.int64)
    for p in range(pnfrag.shape[0]):
        nf = pnfrag[p]
        if match_plan(w, segend, n, psyms[p], pfstart[p, :nf], pflen[p, :nf],
                      pnv[p], lmin, lmax, True, fixed, vstart, vlen, none) > 0:
            return False
    return True


@kernel
def dfs(k, limit, prefix, first_fixed, psyms, pfstart, pflen, pnfrag, pnv,
        forb, foff, sqlo, sqhi, mletter, mmin, budget, counts, best,
        collect_len, out):
    """Depth-first enumeration of admissible words extending ``prefix``.

    ``counts[n]`` is incremented for every admissible word of length
    ``n > len(prefix)`` up to ``limit``. The lexicographically first word of
    maximal length goes to ``best``. When ``collect_len`` is positive the
    words of that length are written to ``out``.

    Returns ``(status, nodes, n_out, best_len)``; status 0 is a complete
    run, 1 an overflow of ``out``, 2 an exhausted node budget.
    """
    d = prefix.shape[0]
    w = np.zeros(limit + 1, np.int8)
    for i in range(d):
        w[i] = prefix[i]
    segend = np.full(limit + 1, BIG, np.int64)
    nvmax = 1
    for p in range(pnv.shape[0]):
        if pnv[p] > nvmax:
            nvmax = pnv[p]
    lmin = np.ones(nvmax, np.int64)
    lmax = np.full(nvmax, BIG, np.int64)
    fixed = np.zeros(nvmax, np.bool_)
    vstart = np.zeros(nvmax, np.int64)
    vlen = np.zeros(nvmax, np.int64)
    nxt = np.zeros(limit + 2, np.int64)
    nodes = 0
    nout = 0
    status = 0
    bestlen = d
    for i in range(d):
        best[i] = w[i]
    n = d
    nxt[n] = 0
    while True:
        a = nxt[n]
        top = k
        if n == 0 and first_fixed:
            top = 1
        if n == limit or a >= top or (collect_len > 0 and n >= collect_len):
            if n == d:
                break
            n -= 1
            continue
        nxt[n] = a + 1
        w[n] = a
        nodes += 1
        if nodes > budget:
            status = 2
            break
        if extension_ok(w, n + 1, segend, psyms, pfstart, pflen, pnfrag, pnv,
                        lmin, lmax, fixed, vstart, vlen, forb, foff, sqlo, sqhi,
                        mletter, mmin):
            n += 1
            counts[n] += 1
            if n > bestlen:
                bestlen = n
                for i in range(n):
                    best[i] = w[i]
            if collect_len == n:
                if nout < out.shape[0]:
                    for i in range(n):
                        out[nout, i] = w[i]
                else:
                    status = 1
                nout += 1
            nxt[n] = 0
    return status, nodes, nout, bestlen


@kernel
def match_exists(w, segend, syms, fstart, flen, nv, lmin, lmax, fixed, vstart,
                 vlen):
    """Unpinned search over the whole array ``w``.

    Variables flagged in ``fixed`` keep the image given by ``vstart``/``vlen``.
    """
    return match_plan(w, segend, w.shape[0], syms, fstart, flen, nv, lmin,
                      lmax, False, fixed, vstart, vlen,
                      np.zeros((0, 1), np.int64)) > 0


@kernel
def match_all(w, segend, syms, fstart, flen, nv, lmin, lmax, fixed, out):
    """Every match of an unpinned plan, as rows ``vstart ++ vlen`` of ``out``."""
    vstart = np.zeros(nv, np.int64)
    vlen = np.zeros(nv, np.int64)
    return match_plan(w, segend, w.shape[0], syms, fstart, flen, nv, lmin,
                      lmax, False, fixed, vstart, vlen, out)


@kernel
def segment_ends(w):
    """For each cell, the index of the next separator (or ``len(w)``)."""
    n = w.shape[0]
    out = np.empty(n, np.int64)
    e = n
    for i in range(n - 1, -1, -1):
        if w[i] == SEP:
            e = i
        out[i] = e
    return out
