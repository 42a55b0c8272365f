"""Hot numeric kernels with a numba fast path.

Set VORG_NUMBA=0 to disable JIT compilation.  The labeling scan and the
flow evaluation then run through vectorized numpy implementations; the
move scan runs the same loop body interpreted (bit-identical results,
just slower).  benchmarks/bench_accel.py compares the paths.
"""

from __future__ import annotations

import os

import numpy as np


def _flag_enabled() -> bool:
    val = os.environ.get("VORG_NUMBA", "1").strip().lower()
    return val not in ("0", "false", "off", "no")


NUMBA_ENABLED = _flag_enabled()

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:

    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


# ---------------------------------------------------------------------------
# Labeling scan: all |alphabet|^k labelings of one fixed cell shape, checked
# by both recognizers.  Bit 0 of the result byte: tiling accepts; bit 1:
# run-language product accepts.  Labeling index is big-endian base-nsym over
# cells in their given order.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _scan_labelings_loop(k, nsym, wbit, nbit, ebit, sbit, hpairs, vpairs,
                         expw, expn, expe, exps, accept, run_starts, run_cells,
                         run_kind, trans):
    total = nsym ** k
    out = np.zeros(total, np.uint8)
    digits = np.zeros(k, np.int64)
    for idx in range(total):
        ok = True
        for p in range(hpairs.shape[0]):
            if ebit[digits[hpairs[p, 0]]] != wbit[digits[hpairs[p, 1]]]:
                ok = False
                break
        if ok:
            for p in range(vpairs.shape[0]):
                if sbit[digits[vpairs[p, 0]]] != nbit[digits[vpairs[p, 1]]]:
                    ok = False
                    break
        if ok:
            for i in range(k):
                d = digits[i]
                if expw[i] == 1 and wbit[d] != accept[0]:
                    ok = False
                    break
                if expn[i] == 1 and nbit[d] != accept[1]:
                    ok = False
                    break
                if expe[i] == 1 and ebit[d] != accept[2]:
                    ok = False
                    break
                if exps[i] == 1 and sbit[d] != accept[3]:
                    ok = False
                    break
        flags = 0
        if ok:
            flags |= 1
        okp = True
        for rn in range(run_starts.shape[0] - 1):
            kind = run_kind[rn]
            state = 0
            for q in range(run_starts[rn], run_starts[rn + 1]):
                state = trans[kind, state, digits[run_cells[q]]]
            if state != 1:
                okp = False
                break
        if okp:
            flags |= 2
        out[idx] = flags
        for i in range(k - 1, -1, -1):
            digits[i] += 1
            if digits[i] < nsym:
                break
            digits[i] = 0
    return out


def _scan_labelings_numpy(k, nsym, wbit, nbit, ebit, sbit, hpairs, vpairs,
                          expw, expn, expe, exps, accept, run_starts, run_cells,
                          run_kind, trans):
    total = nsym ** k
    idx = np.arange(total)
    digits = np.empty((k, total), np.int64)
    for i in range(k):
        digits[i] = (idx // (nsym ** (k - 1 - i))) % nsym
    ok = np.ones(total, bool)
    for p in range(hpairs.shape[0]):
        ok &= ebit[digits[hpairs[p, 0]]] == wbit[digits[hpairs[p, 1]]]
    for p in range(vpairs.shape[0]):
        ok &= sbit[digits[vpairs[p, 0]]] == nbit[digits[vpairs[p, 1]]]
    for i in range(k):
        if expw[i]:
            ok &= wbit[digits[i]] == accept[0]
        if expn[i]:
            ok &= nbit[digits[i]] == accept[1]
        if expe[i]:
            ok &= ebit[digits[i]] == accept[2]
        if exps[i]:
            ok &= sbit[digits[i]] == accept[3]
    okp = np.ones(total, bool)
    for rn in range(run_starts.shape[0] - 1):
        kind = run_kind[rn]
        state = np.zeros(total, np.int8)
        for q in range(run_starts[rn], run_starts[rn + 1]):
            state = trans[kind, state, digits[run_cells[q]]]
        okp &= state == 1
    return (ok.astype(np.uint8) | (okp.astype(np.uint8) << 1))


def scan_labelings(*args):
    if NUMBA_ENABLED:
        return _scan_labelings_loop(*args)
    return _scan_labelings_numpy(*args)


# ---------------------------------------------------------------------------
# Flow evaluation over flat topology arrays.  Node order is canonical
# (sorted by coordinate); `order` lists nodes deepest-first so children are
# folded before their parents.  Summation order is fixed so the loop and
# the pure-python reference produce bit-identical floats.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _flow_eval_loop(rows, cols, leaf_idx, src_r, src_c, src_p, order, parent,
                    blocked, fmax):
    n = rows.shape[0]
    nleaf = leaf_idx.shape[0]
    served = np.zeros(n)
    dem = np.empty(nleaf)
    for j in range(src_r.shape[0]):
        tot = 0.0
        for t in range(nleaf):
            v = leaf_idx[t]
            d = abs(rows[v] - src_r[j]) + abs(cols[v] - src_c[j])
            dem[t] = src_p[j] / ((d + 1.0) * (d + 1.0))
            tot += dem[t]
        scale = 1.0
        if tot > src_p[j]:
            scale = src_p[j] / tot
        for t in range(nleaf):
            served[leaf_idx[t]] += dem[t] * scale
    thr = np.zeros(n)
    acc = np.zeros(n)
    root_flow = 0.0
    for oi in range(n):
        v = order[oi]
        t = acc[v] + served[v]
        if t > fmax:
            t = fmax
        if blocked[v] == 1:
            t = 0.0
        thr[v] = t
        p = parent[v]
        if p >= 0:
            acc[p] += t
        else:
            root_flow = t
    return served, thr, root_flow


def _flow_eval_numpy(rows, cols, leaf_idx, src_r, src_c, src_p, order, parent,
                     blocked, fmax):
    n = rows.shape[0]
    served = np.zeros(n)
    if leaf_idx.shape[0] and src_r.shape[0]:
        dist = (np.abs(rows[leaf_idx][:, None] - src_r[None, :])
                + np.abs(cols[leaf_idx][:, None] - src_c[None, :])).astype(np.float64)
        dem = src_p[None, :] / (dist + 1.0) ** 2
        tot = dem.sum(axis=0)
        scale = np.where(tot > src_p, np.divide(src_p, tot, out=np.ones_like(tot),
                                                where=tot > 0), 1.0)
        served[leaf_idx] = (dem * scale[None, :]).sum(axis=1)
    thr = np.zeros(n)
    acc = np.zeros(n)
    root_flow = 0.0
    for oi in range(n):
        v = order[oi]
        t = min(acc[v] + served[v], fmax)
        if blocked[v]:
            t = 0.0
        thr[v] = t
        if parent[v] >= 0:
            acc[parent[v]] += t
        else:
            root_flow = t
    return served, thr, root_flow


def flow_eval(*args):
    if NUMBA_ENABLED:
        return _flow_eval_loop(*args)
    return _flow_eval_numpy(*args)


# ---------------------------------------------------------------------------
# Conservative move scan: brute force over (subtree root, anchor) pairs.
# Tags are stored as their numeric values (grid value 0 = empty cell) so
# border bits come straight out of the integer.  Returns the first strict
# maximizer in lexicographic (subtree, anchor) order, or best_si = -1.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _scan_moves_kernel(rows, cols, tags, parent, desc, grid, ids, gr0, gc0,
                       src_r, src_c, src_p, fmax):
    n = rows.shape[0]
    h = grid.shape[0]
    w = grid.shape[1]
    nsrc = src_r.shape[0]

    new_r = np.empty(n, np.int64)
    new_c = np.empty(n, np.int64)
    perm = np.empty(n, np.int64)
    depth = np.empty(n, np.int64)
    par2 = np.empty(n, np.int64)
    child_cnt = np.empty(n, np.int64)
    served = np.empty(n)
    dem = np.empty(n)
    acc = np.empty(n)

    best_si = -1
    best_ai = -1
    best_flow = -1.0
    base_flow = -1.0

    # Candidate 0 evaluates the unmodified word (si == -1 sentinel pass).
    for cand_si in range(-1, n):
        if cand_si >= 0 and parent[cand_si] < 0:
            continue
        anchors_lo = 0
        anchors_hi = n
        if cand_si < 0:
            anchors_hi = 1  # single base evaluation
        for cand_ai in range(anchors_lo, anchors_hi):
            dr = 0
            dc = 0
            if cand_si >= 0:
                if desc[cand_si, cand_ai] == 1 or cand_ai == cand_si:
                    continue
                if tags[cand_si] == 4:
                    tr = rows[cand_ai]
                    tc = cols[cand_ai] - 1
                else:  # tag 2 attaches south
                    tr = rows[cand_ai] + 1
                    tc = cols[cand_ai]
                dr = tr - rows[cand_si]
                dc = tc - cols[cand_si]
                if dr == 0 and dc == 0:
                    continue

            # Positions after the move; bounds and overlap check.
            ok = True
            for v in range(n):
                if cand_si >= 0 and desc[cand_si, v] == 1:
                    nr = rows[v] + dr
                    nc = cols[v] + dc
                    if nr < gr0 or nc < gc0 or nr - gr0 >= h or nc - gc0 >= w:
                        ok = False
                        break
                    occ = ids[nr - gr0, nc - gc0]
                    if occ >= 0 and desc[cand_si, occ] == 0:
                        ok = False
                        break
                else:
                    nr = rows[v]
                    nc = cols[v]
                new_r[v] = nr
                new_c[v] = nc
            if not ok:
                continue

            moved = cand_si >= 0
            if moved:
                for v in range(n):
                    if desc[cand_si, v] == 1:
                        grid[rows[v] - gr0, cols[v] - gc0] = 0
                for v in range(n):
                    if desc[cand_si, v] == 1:
                        grid[new_r[v] - gr0, new_c[v] - gc0] = tags[v]

            # Tiling check: border agreement plus external accept labels
            # (w,n,e,s) = (0,1,1,0).
            ok = True
            for v in range(n):
                tv = tags[v]
                bw = (tv >> 3) & 1
                bn = (tv >> 2) & 1
                be = (tv >> 1) & 1
                bs = tv & 1
                r = new_r[v] - gr0
                c = new_c[v] - gc0
                nb = 0 if r == 0 else grid[r - 1, c]
                if nb == 0:
                    if bn != 1:
                        ok = False
                        break
                elif (nb & 1) != bn:
                    ok = False
                    break
                sb = 0 if r == h - 1 else grid[r + 1, c]
                if sb == 0:
                    if bs != 0:
                        ok = False
                        break
                elif ((sb >> 2) & 1) != bs:
                    ok = False
                    break
                wb = 0 if c == 0 else grid[r, c - 1]
                if wb == 0:
                    if bw != 0:
                        ok = False
                        break
                elif ((wb >> 1) & 1) != bw:
                    ok = False
                    break
                eb = 0 if c == w - 1 else grid[r, c + 1]
                if eb == 0:
                    if be != 1:
                        ok = False
                        break
                elif ((eb >> 3) & 1) != be:
                    ok = False
                    break

            flow = -1.0
            if ok:
                # Rebuild topology from geometry via the id grid.
                if moved:
                    for v in range(n):
                        if desc[cand_si, v] == 1:
                            ids[rows[v] - gr0, cols[v] - gc0] = -1
                    for v in range(n):
                        if desc[cand_si, v] == 1:
                            ids[new_r[v] - gr0, new_c[v] - gc0] = v
                for v in range(n):
                    child_cnt[v] = 0
                root = -1
                for v in range(n):
                    if tags[v] == 2:
                        par2[v] = ids[new_r[v] - 1 - gr0, new_c[v] - gc0]
                    elif tags[v] == 4:
                        par2[v] = ids[new_r[v] - gr0, new_c[v] + 1 - gc0]
                    else:
                        par2[v] = -1
                        root = v
                    if par2[v] >= 0:
                        child_cnt[par2[v]] += 1
                for v in range(n):
                    d = 0
                    u = v
                    while par2[u] >= 0:
                        u = par2[u]
                        d += 1
                    depth[v] = d

                # Canonical order: (row, col) ascending (insertion sort).
                for v in range(n):
                    perm[v] = v
                for i in range(1, n):
                    pv = perm[i]
                    key_r = new_r[pv]
                    key_c = new_c[pv]
                    j = i - 1
                    while j >= 0 and (new_r[perm[j]] > key_r or
                                      (new_r[perm[j]] == key_r and new_c[perm[j]] > key_c)):
                        perm[j + 1] = perm[j]
                        j -= 1
                    perm[j + 1] = pv

                for v in range(n):
                    served[v] = 0.0
                for j in range(nsrc):
                    tot = 0.0
                    for t in range(n):
                        v = perm[t]
                        if child_cnt[v] == 0:
                            d = abs(new_r[v] - src_r[j]) + abs(new_c[v] - src_c[j])
                            dm = src_p[j] / ((d + 1.0) * (d + 1.0))
                            dem[v] = dm
                            tot += dm
                    scale = 1.0
                    if tot > src_p[j]:
                        scale = src_p[j] / tot
                    for t in range(n):
                        v = perm[t]
                        if child_cnt[v] == 0:
                            served[v] += dem[v] * scale

                for v in range(n):
                    acc[v] = 0.0
                maxd = 0
                for v in range(n):
                    if depth[v] > maxd:
                        maxd = depth[v]
                flow = 0.0
                for d in range(maxd, -1, -1):
                    for t in range(n):
                        v = perm[t]
                        if depth[v] != d:
                            continue
                        tput = acc[v] + served[v]
                        if tput > fmax:
                            tput = fmax
                        p = par2[v]
                        if p >= 0:
                            acc[p] += tput
                        else:
                            flow = tput

            if moved:
                # Restore scratch grids.
                for v in range(n):
                    if desc[cand_si, v] == 1:
                        grid[new_r[v] - gr0, new_c[v] - gc0] = 0
                        ids[new_r[v] - gr0, new_c[v] - gc0] = -1
                for v in range(n):
                    if desc[cand_si, v] == 1:
                        grid[rows[v] - gr0, cols[v] - gc0] = tags[v]
                        ids[rows[v] - gr0, cols[v] - gc0] = v

            if not ok:
                continue
            if cand_si < 0:
                base_flow = flow
                best_flow = flow
            elif flow > best_flow:
                best_flow = flow
                best_si = cand_si
                best_ai = cand_ai

    return best_si, best_ai, best_flow, base_flow
