"""Compiled structure constants of sl_2(C_q) + C + D and bulk identity checks.

Scalars are handled at the group-ring level: every sigma value is a group
element ``g^code`` where the code is an exponent modulo N (cyclotomic), a
packed exponent vector (generic, modulus 0) or 0 (rational, modulus 1).
Every structure constant is ``(num1 * g^code1 + num2 * g^code2) / 2``.

The same Python source serves both the interpreted and the jitted path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

KIND_X, KIND_Y, KIND_U, KIND_W, KIND_C, KIND_D = 0, 1, 2, 3, 4, 5

# status codes of `structure`
OK = 0
BAD_W = 1  # a W(c), c in R, with nonzero coefficient


@njit(cache=True, inline="always")
def _reduce(code, mod):
    if mod > 0:
        code = code % mod
    return code


@njit(cache=True)
def sigma_code(a, b, K, mod):
    n = a.shape[0]
    s = 0
    for i in range(n):
        bi = b[i]
        if bi == 0:
            continue
        for j in range(i + 1, n):
            s += K[j, i] * a[j] * bi
    return _reduce(s, mod)


@njit(cache=True)
def f_code(a, k, K, mod):
    """Code of f(a, e_k); linear in ``a``."""
    n = a.shape[0]
    s = 0
    for j in range(k + 1, n):
        s += K[j, k] * a[j]
    for i in range(k):
        s -= K[k, i] * a[i]
    return _reduce(s, mod)


@njit(cache=True)
def in_radical_sum(a, b, K, mod):
    """Whether a + b lies in the radical, i.e. f(a + b, e_k) == 1 for every k."""
    n = a.shape[0]
    for k in range(n):
        if _reduce(f_code(a, k, K, mod) + f_code(b, k, K, mod), mod) != 0:
            return False
    return True


@njit(cache=True)
def structure(k1, a, i1, k2, b, i2, K, mod, out_kind, out_num, out_code, cen_num):
    """Bracket of two basis keys.

    Fills ``out_kind[t]``, ``out_num[t, 0:2]``, ``out_code[t, 0:2]`` for the
    noncentral terms (all of lattice degree a + b) and ``cen_num[i]`` for the
    central terms, whose common group code is returned in ``out_code[2, 0]``.
    Numerators are doubled.  Returns ``(n_terms, has_central, status)``.
    For C/D keys the index is ``i1``/``i2`` (0-based) and the vector is ignored.
    """
    n = a.shape[0]
    c_zero = True
    for i in range(n):
        if a[i] + b[i] != 0:
            c_zero = False
    return core(k1, a, i1, k2, b, i2, sigma_code(a, b, K, mod), sigma_code(b, a, K, mod),
                in_radical_sum(a, b, K, mod), c_zero, out_kind, out_num, out_code, cen_num)


@njit(cache=True, inline="always")
def core(k1, a, i1, k2, b, i2, s_ab, s_ba, rad, c_zero, out_kind, out_num, out_code, cen_num):
    """The bracket table, given sigma codes and the radical/zero status of a + b."""
    n = a.shape[0]
    for i in range(n):
        cen_num[i] = 0
    sign = 1
    # put the pair in a canonical orientation: k1 <= k2
    if k1 > k2:
        k1, k2 = k2, k1
        a, b = b, a
        i1, i2 = i2, i1
        s_ab, s_ba = s_ba, s_ab
        sign = -1
    if k1 == KIND_C or k2 == KIND_C:
        return 0, False, OK
    if k1 == KIND_D:
        return 0, False, OK  # both are D
    if k2 == KIND_D:
        # [k1(a), D_i] = -a_i k1(a)
        if a[i2] == 0:
            return 0, False, OK
        out_kind[0] = k1
        out_num[0, 0] = -2 * a[i2] * sign
        out_code[0, 0] = 0
        out_num[0, 1] = 0
        out_code[0, 1] = 0
        return 1, False, OK

    commuting = s_ab == s_ba
    nterms = 0
    has_cen = False

    if k1 == KIND_X and k2 == KIND_X:
        return 0, False, OK
    if k1 == KIND_Y and k2 == KIND_Y:
        return 0, False, OK
    if k1 == KIND_X and k2 == KIND_Y:
        out_kind[0] = KIND_U
        out_num[0, 0] = sign
        out_code[0, 0] = s_ab
        out_num[0, 1] = sign
        out_code[0, 1] = s_ba
        nterms = 1
        if rad:
            if not commuting:
                return 0, False, BAD_W
        elif not commuting:
            out_kind[1] = KIND_W
            out_num[1, 0] = sign
            out_code[1, 0] = s_ab
            out_num[1, 1] = -sign
            out_code[1, 1] = s_ba
            nterms = 2
        if c_zero:
            has_cen = True
            out_code[2, 0] = s_ab
            for i in range(n):
                cen_num[i] = 2 * a[i] * sign
        return nterms, has_cen, OK
    if k1 == KIND_X or k1 == KIND_Y:
        # k2 is U or W; the result is a multiple of k1(a + b)
        plus = k2 == KIND_U
        if k1 == KIND_X and plus:
            n1, n2 = -2, -2
        elif plus:
            n1, n2 = 2, 2
        else:
            if commuting:
                return 0, False, OK
            n1, n2 = 2, -2
        out_kind[0] = k1
        out_num[0, 0] = n1 * sign
        out_code[0, 0] = s_ab
        out_num[0, 1] = n2 * sign
        out_code[0, 1] = s_ba
        return 1, False, OK
    # both in {U, W}
    if k1 == k2:
        if c_zero:
            out_code[2, 0] = s_ab
            for i in range(n):
                cen_num[i] = 4 * a[i] * sign
            return 0, True, OK
        if rad:
            if not commuting:
                return 0, False, BAD_W
            return 0, False, OK
        if commuting:
            return 0, False, OK
        out_kind[0] = KIND_W
        out_num[0, 0] = 2 * sign
        out_code[0, 0] = s_ab
        out_num[0, 1] = -2 * sign
        out_code[0, 1] = s_ba
        return 1, False, OK
    # [U(a), W(b)]
    if rad:
        if not commuting:
            return 0, False, BAD_W
        return 0, False, OK
    if commuting:
        return 0, False, OK
    out_kind[0] = KIND_U
    out_num[0, 0] = 2 * sign
    out_code[0, 0] = s_ab
    out_num[0, 1] = -2 * sign
    out_code[0, 1] = s_ba
    return 1, False, OK


# ----------------------------------------------------------- bulk checkers


@njit(cache=True, inline="always")
def _acc(slots, codes, nums, size, slot, code, num):
    if num == 0:
        return size
    for t in range(size):
        if slots[t] == slot and codes[t] == code:
            nums[t] += num
            return size
    slots[size] = slot
    codes[size] = code
    nums[size] = num
    return size + 1


@njit(cache=True)
def _is_zero(slots, codes, nums, size, mod, phi, work):
    """Zero test of an accumulated group-ring vector after mapping into Q(zeta_N)."""
    if mod == 0:
        for t in range(size):
            if nums[t] != 0:
                return False
        return True
    d = phi.shape[0] - 1
    for t in range(size):
        if nums[t] == 0:
            continue
        slot = slots[t]
        for k in range(mod):
            work[k] = 0
        for u in range(size):
            if slots[u] == slot:
                work[codes[u] % mod] += nums[u]
        for k in range(mod - 1, d - 1, -1):
            cf = work[k]
            if cf != 0:
                for j in range(d + 1):
                    work[k - d + j] -= cf * phi[j]
        for k in range(d):
            if work[k] != 0:
                return False
    return True


@njit(cache=True)
def _bracket_into(k1, a, i1, k2, b, i2, K, mod, scale_num, scale_code, slots, codes, nums, size,
                  tk, tn, tc, cen, n):
    """Add scale * [k1(a), k2(b)] to the accumulator; central slots are 4 + i."""
    nt, hc, st = structure(k1, a, i1, k2, b, i2, K, mod, tk, tn, tc, cen)
    if st != OK:
        return size, st
    for t in range(nt):
        for s in range(2):
            size = _acc(slots, codes, nums, size, tk[t], _reduce(scale_code + tc[t, s], mod),
                        scale_num * tn[t, s])
    if hc:
        code = _reduce(scale_code + tc[2, 0], mod)
        for i in range(n):
            size = _acc(slots, codes, nums, size, 4 + i, code, scale_num * cen[i])
    return size, OK


@njit(cache=True)
def _zero_dense(dense, touched, ntouched, mod, phi):
    """Zero test of dense per-slot group-ring rows, clearing them on the way."""
    d = phi.shape[0] - 1
    ok = True
    for t in range(ntouched):
        row = dense[touched[t]]
        if ok:
            for k in range(mod - 1, d - 1, -1):
                cf = row[k]
                if cf != 0:
                    for j in range(d + 1):
                        row[k - d + j] -= cf * phi[j]
            for k in range(d):
                if row[k] != 0:
                    ok = False
        for k in range(mod):
            row[k] = 0
    return ok


@njit(cache=True, inline="always")
def _add_code(a, b, mod):
    """Sum of two codes already reduced into [0, mod)."""
    c = a + b
    if mod > 0 and c >= mod:
        c -= mod
    return c


@njit(cache=True)
def _outer_table(n):
    """Brackets of X/Y/U/W keys with X/Y/U/W keys, tabulated by calling :func:`core`.

    The result only depends on the two kinds, on whether the two sigma codes
    agree, and on the radical/zero status of the summed degree.  Marker
    codes 1 and 2 record which of s(a, b), s(b, a) each term carries, and a
    unit first vector records the central coefficient relative to it.
    """
    shape = (4, 4, 2, 2, 2)
    ON = np.zeros(shape, dtype=np.int64)
    OK_ = np.zeros(shape + (3,), dtype=np.int64)
    ONum = np.zeros(shape + (3, 2), dtype=np.int64)
    OW = np.zeros(shape + (3, 2), dtype=np.int64)
    OHC = np.zeros(shape, dtype=np.bool_)
    OCW = np.zeros(shape, dtype=np.int64)
    OCC = np.zeros(shape, dtype=np.int64)
    OST = np.zeros(shape, dtype=np.int64)
    tk = np.zeros(3, dtype=np.int64)
    tn = np.zeros((3, 2), dtype=np.int64)
    tc = np.zeros((3, 2), dtype=np.int64)
    cen = np.zeros(n, dtype=np.int64)
    a = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    for k1 in range(4):
        for k2 in range(4):
            for comm in range(2):
                for rad in range(2):
                    for zero in range(2):
                        a[0] = 1
                        b[0] = -1 if zero == 1 else 0
                        s_ba = 1 if comm == 1 else 2
                        nt, hc, st = core(k1, a, 0, k2, b, 0, 1, s_ba, rad == 1, zero == 1,
                                          tk, tn, tc, cen)
                        OST[k1, k2, comm, rad, zero] = st
                        ON[k1, k2, comm, rad, zero] = nt
                        OHC[k1, k2, comm, rad, zero] = hc
                        for t in range(nt):
                            OK_[k1, k2, comm, rad, zero, t] = tk[t]
                            for s in range(2):
                                ONum[k1, k2, comm, rad, zero, t, s] = tn[t, s]
                                OW[k1, k2, comm, rad, zero, t, s] = 0 if tc[t, s] == 1 else 1
                        if hc:
                            OCW[k1, k2, comm, rad, zero] = 0 if tc[2, 0] == 1 else 1
                            OCC[k1, k2, comm, rad, zero] = cen[0]
    return ON, OK_, ONum, OW, OHC, OCW, OCC, OST


@njit(cache=True)
def jacobi_check(kinds, vecs, idxs, K, mod, phi, start, stop):
    """Check the Jacobi identity on all triples i < j < k with start <= i < stop.

    The inner brackets [y, z] are tabulated once per ordered pair.  Sigma
    codes and the f-codes deciding radical membership are additive in the
    lattice arguments, so the outer brackets only need table sums.
    Returns ``(checked, failures, i, j, k, status)`` with the first failing
    triple (or -1).
    """
    m = kinds.shape[0]
    n = vecs.shape[1]
    S = np.zeros((m, m), dtype=np.int64)
    for p in range(m):
        for q in range(m):
            S[p, q] = sigma_code(vecs[p], vecs[q], K, mod)
    F = np.zeros((m, n), dtype=np.int64)
    for p in range(m):
        for k in range(n):
            F[p, k] = f_code(vecs[p], k, K, mod)
    # inner bracket table; central terms are dropped because ad x kills them
    PN = np.zeros((m, m), dtype=np.int64)
    PK = np.zeros((m, m, 3), dtype=np.int64)
    PNum = np.zeros((m, m, 3, 2), dtype=np.int64)
    PC = np.zeros((m, m, 3, 2), dtype=np.int64)
    tk = np.zeros(3, dtype=np.int64)
    tn = np.zeros((3, 2), dtype=np.int64)
    tc = np.zeros((3, 2), dtype=np.int64)
    cen = np.zeros(n, dtype=np.int64)
    status = OK
    for p in range(m):
        for q in range(m):
            nt, hc, st = structure(kinds[p], vecs[p], idxs[p], kinds[q], vecs[q], idxs[q], K, mod,
                                   tk, tn, tc, cen)
            if st != OK:
                status = st
                PN[p, q] = -1
                continue
            PN[p, q] = nt
            for t in range(nt):
                PK[p, q, t] = tk[t]
                for s in range(2):
                    PNum[p, q, t, s] = tn[t, s]
                    PC[p, q, t, s] = tc[t, s]
    tk2 = np.zeros(3, dtype=np.int64)
    tn2 = np.zeros((3, 2), dtype=np.int64)
    tc2 = np.zeros((3, 2), dtype=np.int64)
    cen2 = np.zeros(n, dtype=np.int64)
    ON, OK_, ONum, OW, OHC, OCW, OCC, OST = _outer_table(n)
    dense_mode = mod > 0
    nslots = 4 + n
    dense = np.zeros((nslots, max(mod, 1)), dtype=np.int64)
    touched = np.zeros(nslots, dtype=np.int64)
    seen = np.zeros(nslots, dtype=np.bool_)
    slots = np.zeros(256, dtype=np.int64)
    codes = np.zeros(256, dtype=np.int64)
    nums = np.zeros(256, dtype=np.int64)
    work = np.zeros(1, dtype=np.int64)
    inner = np.zeros(n, dtype=np.int64)
    trip = np.zeros(3, dtype=np.int64)
    checked = 0
    failures = 0
    fi, fj, fk = -1, -1, -1
    Fij = np.zeros(n, dtype=np.int64)
    vij = np.zeros(n, dtype=np.int64)
    for i in range(start, stop):
        vi = vecs[i]
        for j in range(i + 1, m):
            nij = PN[i, j]
            vj = vecs[j]
            for q in range(n):
                Fij[q] = F[i, q] + F[j, q]
                vij[q] = vi[q] + vj[q]
            for k in range(j + 1, m):
                checked += 1
                njk = PN[j, k]
                nki = PN[k, i]
                if nij == 0 and njk == 0 and nki == 0:
                    continue
                if nij < 0 or njk < 0 or nki < 0:
                    failures += 1
                    if fi < 0:
                        fi, fj, fk = i, j, k
                    continue
                vk = vecs[k]
                # radical status and vanishing of x + y + z are shared by all rotations
                rad3 = True
                for q in range(n):
                    if _reduce(Fij[q] + F[k, q], mod) != 0:
                        rad3 = False
                        break
                zero3 = True
                for q in range(n):
                    if vij[q] + vk[q] != 0:
                        zero3 = False
                        break
                size = 0
                ntouched = 0
                bad = False
                for rot in range(3):
                    if rot == 0:
                        x, y, z, vx = i, j, k, vi
                    elif rot == 1:
                        x, y, z, vx = j, k, i, vj
                    else:
                        x, y, z, vx = k, i, j, vk
                    nt = PN[y, z]
                    if nt == 0:
                        continue
                    for q in range(n):
                        inner[q] = vij[q] + vk[q] - vx[q]
                    s_xt = _add_code(S[x, y], S[x, z], mod)
                    s_tx = _add_code(S[y, x], S[z, x], mod)
                    kx = kinds[x]
                    ix = idxs[x]
                    if kx == KIND_C:
                        continue
                    comm = 1 if s_xt == s_tx else 0
                    r3 = 1 if rad3 else 0
                    z3 = 1 if zero3 else 0
                    for t in range(nt):
                        kt = PK[y, z, t]
                        if kx == KIND_D:
                            nt2, hc2, st2 = core(kx, vx, ix, kt, inner, 0,
                                                 s_xt, s_tx, rad3, zero3, tk2, tn2, tc2, cen2)
                        else:
                            # the outer bracket only depends on kinds, on whether the sigma
                            # codes agree, and on the radical/zero status of x + y + z
                            st2 = OST[kx, kt, comm, r3, z3]
                            nt2 = ON[kx, kt, comm, r3, z3]
                            hc2 = OHC[kx, kt, comm, r3, z3]
                            for t2 in range(nt2):
                                tk2[t2] = OK_[kx, kt, comm, r3, z3, t2]
                                for s2 in range(2):
                                    tn2[t2, s2] = ONum[kx, kt, comm, r3, z3, t2, s2]
                                    tc2[t2, s2] = s_xt if OW[kx, kt, comm, r3, z3, t2, s2] == 0 else s_tx
                            if hc2:
                                tc2[2, 0] = s_xt if OCW[kx, kt, comm, r3, z3] == 0 else s_tx
                                cc = OCC[kx, kt, comm, r3, z3]
                                for q in range(n):
                                    cen2[q] = cc * vx[q]
                        if st2 != OK:
                            status = st2
                            bad = True
                            break
                        if nt2 == 0 and not hc2:
                            continue
                        for s in range(2):
                            sn = PNum[y, z, t, s]
                            if sn == 0:
                                continue
                            sc = PC[y, z, t, s]
                            for t2 in range(nt2):
                                slot = tk2[t2]
                                for s2 in range(2):
                                    v = sn * tn2[t2, s2]
                                    if v == 0:
                                        continue
                                    code = _add_code(sc, tc2[t2, s2], mod)
                                    if dense_mode:
                                        if not seen[slot]:
                                            seen[slot] = True
                                            touched[ntouched] = slot
                                            ntouched += 1
                                        dense[slot, code] += v
                                    else:
                                        size = _acc(slots, codes, nums, size, slot, code, v)
                            if hc2:
                                code = _add_code(sc, tc2[2, 0], mod)
                                for q in range(n):
                                    v = sn * cen2[q]
                                    if v == 0:
                                        continue
                                    slot = 4 + q
                                    if dense_mode:
                                        if not seen[slot]:
                                            seen[slot] = True
                                            touched[ntouched] = slot
                                            ntouched += 1
                                        dense[slot, code] += v
                                    else:
                                        size = _acc(slots, codes, nums, size, slot, code, v)
                    if bad:
                        break
                if dense_mode:
                    ok = _zero_dense(dense, touched, ntouched, mod, phi)
                    for t in range(ntouched):
                        seen[touched[t]] = False
                else:
                    ok = _is_zero(slots, codes, nums, size, mod, phi, work)
                if bad or not ok:
                    failures += 1
                    if fi < 0:
                        fi, fj, fk = i, j, k
    return checked, failures, fi, fj, fk, status


@njit(cache=True)
def antisymmetry_check(kinds, vecs, idxs, K, mod, phi):
    """[x, y] + [y, x] == 0 on all ordered pairs (x == y included)."""
    m = kinds.shape[0]
    n = vecs.shape[1]
    tk = np.zeros(3, dtype=np.int64)
    tn = np.zeros((3, 2), dtype=np.int64)
    tc = np.zeros((3, 2), dtype=np.int64)
    cen = np.zeros(n, dtype=np.int64)
    slots = np.zeros(64, dtype=np.int64)
    codes = np.zeros(64, dtype=np.int64)
    nums = np.zeros(64, dtype=np.int64)
    work = np.zeros(max(mod, 1), dtype=np.int64)
    checked = 0
    failures = 0
    fi, fj = -1, -1
    for i in range(m):
        for j in range(i, m):
            size = 0
            size, s1 = _bracket_into(kinds[i], vecs[i], idxs[i], kinds[j], vecs[j], idxs[j], K, mod,
                                     1, 0, slots, codes, nums, size, tk, tn, tc, cen, n)
            size, s2 = _bracket_into(kinds[j], vecs[j], idxs[j], kinds[i], vecs[i], idxs[i], K, mod,
                                     1, 0, slots, codes, nums, size, tk, tn, tc, cen, n)
            if s1 != OK or s2 != OK or not _is_zero(slots, codes, nums, size, mod, phi, work):
                failures += 1
                if fi < 0:
                    fi, fj = i, j
            checked += 1
    return checked, failures, fi, fj


# ----------------------------------------------------------- matrix oracle


@njit(cache=True, inline="always")
def _matrix_entries(kind, rows, cols, vals):
    """Positions and signs of the 2x2 matrix of a lattice key; returns the entry count."""
    if kind == KIND_X:
        rows[0], cols[0], vals[0] = 0, 1, 1
        return 1
    if kind == KIND_Y:
        rows[0], cols[0], vals[0] = 1, 0, 1
        return 1
    rows[0], cols[0], vals[0] = 0, 0, 1
    rows[1], cols[1], vals[1] = 1, 1, -1 if kind == KIND_U else 1
    return 2


@njit(cache=True)
def oracle_check(kinds, vecs, idxs, K, mod, phi):
    """Compare the table with the matrix commutator plus central correction on all ordered pairs.

    Lattice keys are realised as 2x2 matrices with a single torus monomial
    t^a in each nonzero entry, so every entry of ``xy - yx`` is
    ``p * s(a,b) - q * s(b,a)`` times ``t^(a+b)``.  The diagonal is split
    into its U part ``(E00 - E11) / 2`` and its identity part
    ``(E00 + E11) / 2``, which must vanish when a + b lies in the radical and
    is a W coefficient otherwise.  The central term is
    ``a_i * eps(tr(xy)) c_i``.  Returns ``(checked, failures, i, j)``.
    """
    m = kinds.shape[0]
    n = vecs.shape[1]
    tk = np.zeros(3, dtype=np.int64)
    tn = np.zeros((3, 2), dtype=np.int64)
    tc = np.zeros((3, 2), dtype=np.int64)
    cen = np.zeros(n, dtype=np.int64)
    slots = np.zeros(64, dtype=np.int64)
    codes = np.zeros(64, dtype=np.int64)
    nums = np.zeros(64, dtype=np.int64)
    work = np.zeros(max(mod, 1), dtype=np.int64)
    rx = np.zeros(2, dtype=np.int64)
    cx = np.zeros(2, dtype=np.int64)
    vx = np.zeros(2, dtype=np.int64)
    ry = np.zeros(2, dtype=np.int64)
    cy = np.zeros(2, dtype=np.int64)
    vy = np.zeros(2, dtype=np.int64)
    EP = np.zeros((2, 2), dtype=np.int64)  # multiples of s(a, b)
    EQ = np.zeros((2, 2), dtype=np.int64)  # multiples of s(b, a)
    checked = 0
    failures = 0
    fi, fj = -1, -1
    for i in range(m):
        k1, a = kinds[i], vecs[i]
        for j in range(m):
            k2, b = kinds[j], vecs[j]
            checked += 1
            size, st = _bracket_into(k1, a, idxs[i], k2, b, idxs[j], K, mod, 1, 0, slots, codes, nums, 0,
                                     tk, tn, tc, cen, n)
            good = st == OK
            if k1 == KIND_C or k2 == KIND_C:
                pass
            elif k1 == KIND_D and k2 == KIND_D:
                pass
            elif k1 == KIND_D:
                size = _acc(slots, codes, nums, size, k2, 0, -2 * b[idxs[i]])
            elif k2 == KIND_D:
                size = _acc(slots, codes, nums, size, k1, 0, 2 * a[idxs[j]])
            else:
                s_ab = sigma_code(a, b, K, mod)
                s_ba = sigma_code(b, a, K, mod)
                for p in range(2):
                    for q in range(2):
                        EP[p, q] = 0
                        EQ[p, q] = 0
                nx = _matrix_entries(k1, rx, cx, vx)
                ny = _matrix_entries(k2, ry, cy, vy)
                for u in range(nx):
                    for v in range(ny):
                        if cx[u] == ry[v]:
                            EP[rx[u], cy[v]] += vx[u] * vy[v]
                        if cy[v] == rx[u]:
                            EQ[ry[v], cx[u]] += vx[u] * vy[v]
                # doubled coefficients, subtracted from the table's
                size = _acc(slots, codes, nums, size, KIND_X, s_ab, -2 * EP[0, 1])
                size = _acc(slots, codes, nums, size, KIND_X, s_ba, 2 * EQ[0, 1])
                size = _acc(slots, codes, nums, size, KIND_Y, s_ab, -2 * EP[1, 0])
                size = _acc(slots, codes, nums, size, KIND_Y, s_ba, 2 * EQ[1, 0])
                size = _acc(slots, codes, nums, size, KIND_U, s_ab, -(EP[0, 0] - EP[1, 1]))
                size = _acc(slots, codes, nums, size, KIND_U, s_ba, EQ[0, 0] - EQ[1, 1])
                if in_radical_sum(a, b, K, mod):
                    # the identity part must vanish on its own
                    ws = np.zeros(2, dtype=np.int64)
                    wc = np.zeros(2, dtype=np.int64)
                    wn = np.zeros(2, dtype=np.int64)
                    wsize = _acc(ws, wc, wn, 0, 0, s_ab, EP[0, 0] + EP[1, 1])
                    wsize = _acc(ws, wc, wn, wsize, 0, s_ba, -(EQ[0, 0] + EQ[1, 1]))
                    if not _is_zero(ws, wc, wn, wsize, mod, phi, work):
                        good = False
                else:
                    size = _acc(slots, codes, nums, size, KIND_W, s_ab, -(EP[0, 0] + EP[1, 1]))
                    size = _acc(slots, codes, nums, size, KIND_W, s_ba, EQ[0, 0] + EQ[1, 1])
                zero_sum = True
                for t in range(n):
                    if a[t] + b[t] != 0:
                        zero_sum = False
                if zero_sum:
                    # eps(tr(xy)) = s(a, b) * sum_pq x_pq y_qp
                    tr = 0
                    for u in range(nx):
                        for v in range(ny):
                            if cx[u] == ry[v] and cy[v] == rx[u]:
                                tr += vx[u] * vy[v]
                    for t in range(n):
                        size = _acc(slots, codes, nums, size, 4 + t, s_ab, -2 * a[t] * tr)
            if not good or not _is_zero(slots, codes, nums, size, mod, phi, work):
                failures += 1
                if fi < 0:
                    fi, fj = i, j
    return checked, failures, fi, fj
