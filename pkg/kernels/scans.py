# kernels/scans.py
"""
Переборные ядра над F_p. Каждое ядро обрабатывает полуинтервал [start, stop)
индексов одометра и возвращает частичные счётчики; слияние сложением (kernels/pool.py).
"""
import numpy as np
from numba import njit

from kernels.ffield import (
    decode,
    inv_mod,
    is_zero,
    j_mul,
    j_rank,
    j_sharp,
    matvec,
    w_flat,
    w_quartic,
    w_rank,
    w_symplectic,
)

CHECKSUM_MOD = (1 << 61) - 1


@njit(nogil=True, cache=True)
def _mix(acc, idx, value):
    return (acc + (idx + 1) * (value + 1)) % CHECKSUM_MOD


# ---------------------------
# J_C и W_C
# ---------------------------
@njit(nogil=True, cache=True)
def jordan_rank_scan(alg, p, inv2, jd, start, stop):
    counts = np.zeros(4, dtype=np.int64)
    X = np.zeros(jd, dtype=np.int64)
    acc = 0
    for idx in range(start, stop):
        decode(idx, p, X)
        r = j_rank(X, alg, p, inv2)
        counts[r] += 1
        acc = _mix(acc, idx, r)
    return counts, acc


@njit(nogil=True, cache=True)
def w_slice_scan(alg, p, inv2, slots, base, start, stop):
    """Ранги на срезе base + sum digit_k e_{slots[k]}; rank1_off: ранг 1 вне нуля среза."""
    counts = np.zeros(5, dtype=np.int64)
    digits = np.zeros(slots.shape[0], dtype=np.int64)
    acc = 0
    rank1_off = 0
    for idx in range(start, stop):
        decode(idx, p, digits)
        V = base.copy()
        for k in range(slots.shape[0]):
            V[slots[k]] = (V[slots[k]] + digits[k]) % p
        r = w_rank(V, alg, p, inv2)
        counts[r] += 1
        if r == 1 and not is_zero(digits):
            rank1_off += 1
        acc = _mix(acc, idx, r)
    return counts, acc, rank1_off


@njit(nogil=True, cache=True)
def w_sample_scan(alg, p, inv2, samples, start, stop):
    counts = np.zeros(5, dtype=np.int64)
    ranks = np.zeros(stop - start, dtype=np.int64)
    acc = 0
    for row in range(start, stop):
        r = w_rank(samples[row], alg, p, inv2)
        counts[r] += 1
        ranks[row - start] = r
        acc = _mix(acc, row, r)
    return counts, acc, ranks


@njit(nogil=True, cache=True)
def w_rank_rows(alg, p, inv2, rows):
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[0]):
        out[i] = w_rank(rows[i], alg, p, inv2)
    return out


@njit(nogil=True, cache=True)
def j_rank_rows(alg, p, inv2, rows):
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[0]):
        out[i] = j_rank(rows[i], alg, p, inv2)
    return out


# ---------------------------
# критерий ранга 1, подобия, инвариантность ранга
# ---------------------------
@njit(nogil=True, cache=True)
def _criterion(V, alg, p, inv2, jt, acts, duals):
    """b# = ac, c# = db и act_s(b) o dual_s(c) = ad*I для каждого s."""
    if is_zero(V):
        return False
    jd = (V.shape[0] - 2) // 2
    a = V[0]
    b = V[1:1 + jd]
    c = V[1 + jd:1 + 2 * jd]
    d = V[1 + 2 * jd]
    bs = j_sharp(b, alg, p, inv2)
    cs = j_sharp(c, alg, p, inv2)
    for i in range(jd):
        if (bs[i] - a * c[i]) % p != 0 or (cs[i] - d * b[i]) % p != 0:
            return False
    ad = a * d % p
    for s in range(acts.shape[0]):
        prod = j_mul(matvec(acts[s], b, p), matvec(duals[s], c, p), jt, p)
        for i in range(jd):
            # единица J: первые три координаты
            if prod[i] != (ad if i < 3 else 0):
                return False
    return True


@njit(nogil=True, cache=True)
def w_criterion_rows(alg, p, inv2, jt, acts, duals, rows):
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for i in range(rows.shape[0]):
        if _criterion(rows[i], alg, p, inv2, jt, acts, duals):
            out[i] = 1
    return out


@njit(nogil=True, cache=True)
def w_criterion_slice_scan(alg, p, inv2, jt, acts, duals, slots, base, start, stop):
    """Критерий против w_rank == 1 на срезе: (расхождения, первый индекс или -1, ранг 1)."""
    digits = np.zeros(slots.shape[0], dtype=np.int64)
    mismatches = 0
    first = -1
    rank1 = 0
    for idx in range(start, stop):
        decode(idx, p, digits)
        V = base.copy()
        for k in range(slots.shape[0]):
            V[slots[k]] = (V[slots[k]] + digits[k]) % p
        is_rank1 = w_rank(V, alg, p, inv2) == 1
        if is_rank1:
            rank1 += 1
        if _criterion(V, alg, p, inv2, jt, acts, duals) != is_rank1:
            mismatches += 1
            if first < 0:
                first = idx
    return mismatches, first, rank1


@njit(nogil=True, cache=True)
def similitude_rows(alg, p, inv2, M, nu, rows):
    """Пары строк (2k, 2k+1): <Mv,Mw> = nu<v,w>, q(Mv) = nu^2 q(v), flat(Mv) = nu M flat(v)."""
    failures = 0
    first = -1
    nu2 = nu * nu % p
    for k in range(rows.shape[0] // 2):
        v = rows[2 * k]
        w = rows[2 * k + 1]
        Mv = matvec(M, v, p)
        Mw = matvec(M, w, p)
        ok = w_symplectic(Mv, Mw, alg, p) == nu * w_symplectic(v, w, alg, p) % p
        ok = ok and w_quartic(Mv, alg, p, inv2) == nu2 * w_quartic(v, alg, p, inv2) % p
        if ok:
            lhs = w_flat(Mv, alg, p, inv2)
            rhs = matvec(M, w_flat(v, alg, p, inv2), p)
            for i in range(lhs.shape[0]):
                if lhs[i] != nu * rhs[i] % p:
                    ok = False
                    break
        if not ok:
            failures += 1
            if first < 0:
                first = k
    return failures, first


@njit(nogil=True, cache=True)
def w_rank_change_rows(alg, p, inv2, mats, words, rows):
    """Строка r проходит через mats[words[r, 0]], mats[words[r, 1]], ...; ранг не меняется."""
    changes = 0
    first = -1
    ranks = np.zeros(rows.shape[0], dtype=np.int64)
    for r in range(rows.shape[0]):
        V = rows[r].copy()
        r0 = w_rank(V, alg, p, inv2)
        ranks[r] = r0
        for t in range(words.shape[1]):
            V = matvec(mats[words[r, t]], V, p)
        if w_rank(V, alg, p, inv2) != r0:
            changes += 1
            if first < 0:
                first = r
    return changes, first, ranks


@njit(nogil=True, cache=True)
def j_rank_change_rows(alg, p, inv2, acts, rows):
    changes = 0
    first = -1
    for r in range(rows.shape[0]):
        X = rows[r]
        if j_rank(matvec(acts[r % acts.shape[0]], X, p), alg, p, inv2) != j_rank(X, alg, p, inv2):
            changes += 1
            if first < 0:
                first = r
    return changes, first
    return out


# ---------------------------
# слои над (C^0)^3 в координатах базиса C^0
# ---------------------------
@njit(nogil=True, cache=True)
def _gram(x, m, G0, p):
    """g[i, j] = sum G0[a, b] x_i[a] x_j[b] = 1/2 Tr(x_i x_j)."""
    g = np.zeros((3, 3), dtype=np.int64)
    for i in range(3):
        for j in range(i, 3):
            s = 0
            for a in range(m):
                xa = x[i * m + a]
                if xa == 0:
                    continue
                for b in range(m):
                    s = (s + G0[a, b] * xa % p * x[j * m + b]) % p
            g[i, j] = s
            g[j, i] = s
    return g


@njit(nogil=True, cache=True)
def _triple(x, m, T, p):
    """Tr((x1 x2) x3) через тензор T."""
    s = 0
    for a in range(m):
        xa = x[a]
        if xa == 0:
            continue
        for b in range(m):
            xb = x[m + b]
            if xb == 0:
                continue
            for c in range(m):
                s = (s + T[a, b, c] * xa % p * xb % p * x[2 * m + c]) % p
    return s


@njit(nogil=True, cache=True)
def _det3(g, p):
    d = g[0, 0] * ((g[1, 1] * g[2, 2] - g[1, 2] * g[2, 1]) % p)
    d -= g[0, 1] * ((g[1, 0] * g[2, 2] - g[1, 2] * g[2, 0]) % p)
    d += g[0, 2] * ((g[1, 0] * g[2, 1] - g[1, 1] * g[2, 0]) % p)
    return d % p


@njit(nogil=True, cache=True)
def fiber_scan(G0, T, cmat, d, p, start, stop):
    """Число x из (C^0)^3 с 1/2 Tr(x_i x_j) = c_ij и Tr(x1 x2 x3) = d; первый свидетель."""
    m = G0.shape[0]
    x = np.zeros(3 * m, dtype=np.int64)
    count = 0
    first = -1
    for idx in range(start, stop):
        decode(idx, p, x)
        g = _gram(x, m, G0, p)
        ok = True
        for i in range(3):
            for j in range(3):
                if g[i, j] != cmat[i, j]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        if _triple(x, m, T, p) != d:
            continue
        count += 1
        if first < 0:
            first = idx
    return count, first


@njit(nogil=True, cache=True)
def sextic_scan(G0, T, p, start, stop):
    """Нарушения -4 det(1/2 Tr(x_i x_j)) = Tr(x1 x2 x3)^2; первый контрпример."""
    m = G0.shape[0]
    x = np.zeros(3 * m, dtype=np.int64)
    failures = 0
    first = -1
    for idx in range(start, stop):
        decode(idx, p, x)
        lhs = (-4 * _det3(_gram(x, m, G0, p), p)) % p
        t = _triple(x, m, T, p)
        if lhs != t * t % p:
            failures += 1
            if first < 0:
                first = idx
    return failures, first


# ---------------------------
# SO(3, c)
# ---------------------------
@njit(nogil=True, cache=True)
def _form(r, s, cmat, p):
    acc = 0
    for i in range(3):
        for j in range(3):
            acc = (acc + r[i] * cmat[i, j] % p * s[j]) % p
    return acc


@njit(nogil=True, cache=True)
def _so3_walk(cmat, p, out, fill):
    """Строки r0, r1, r2 по очереди: r_i c r_j^T = c_ij, затем det = 1."""
    q3 = p * p * p
    r0 = np.zeros(3, dtype=np.int64)
    r1 = np.zeros(3, dtype=np.int64)
    r2 = np.zeros(3, dtype=np.int64)
    g = np.zeros((3, 3), dtype=np.int64)
    count = 0
    for i0 in range(q3):
        decode(i0, p, r0)
        if _form(r0, r0, cmat, p) != cmat[0, 0]:
            continue
        for i1 in range(q3):
            decode(i1, p, r1)
            if _form(r1, r1, cmat, p) != cmat[1, 1] or _form(r0, r1, cmat, p) != cmat[0, 1]:
                continue
            for i2 in range(q3):
                decode(i2, p, r2)
                if _form(r2, r2, cmat, p) != cmat[2, 2]:
                    continue
                if _form(r0, r2, cmat, p) != cmat[0, 2] or _form(r1, r2, cmat, p) != cmat[1, 2]:
                    continue
                for k in range(3):
                    g[0, k] = r0[k]
                    g[1, k] = r1[k]
                    g[2, k] = r2[k]
                if _det3(g, p) != 1:
                    continue
                if fill:
                    for a in range(3):
                        for b in range(3):
                            out[count, a * 3 + b] = g[a, b]
                count += 1
    return count


@njit(nogil=True, cache=True)
def so3_count(cmat, p):
    dummy = np.zeros((1, 9), dtype=np.int64)
    return _so3_walk(cmat, p, dummy, False)


@njit(nogil=True, cache=True)
def so3_fill(cmat, p, size):
    out = np.zeros((size, 9), dtype=np.int64)
    _so3_walk(cmat, p, out, True)
    return out


# ---------------------------
# слой F^-1(0): пары (J(beta), J(gamma))
# ---------------------------
@njit(nogil=True, cache=True)
def _strip_to_jordan(beta, t0, p):
    """beta в координатах C^0 (3 x m) -> вектор J(beta) с нулевой диагональю."""
    m, n = t0.shape[0], t0.shape[1]
    X = np.zeros(3 + 3 * n, dtype=np.int64)
    for k in range(3):
        for a in range(m):
            ba = beta[k * m + a]
            if ba == 0:
                continue
            for i in range(n):
                X[3 + k * n + i] = (X[3 + k * n + i] + ba * t0[a, i]) % p
    return X


@njit(nogil=True, cache=True)
def sharp_null_strips(alg, p, inv2, t0, fill, size):
    """beta из (C^0)^3 с J(beta)# = 0: сначала подсчёт (fill=False), затем заполнение."""
    m, n = t0.shape[0], t0.shape[1]
    jd = 3 + 3 * n
    total = p ** (3 * m)
    beta = np.zeros(3 * m, dtype=np.int64)
    coords = np.zeros((size if fill else 1, 3 * m), dtype=np.int64)
    jords = np.zeros((size if fill else 1, jd), dtype=np.int64)
    count = 0
    for idx in range(total):
        decode(idx, p, beta)
        X = _strip_to_jordan(beta, t0, p)
        if not is_zero(j_sharp(X, alg, p, inv2)):
            continue
        if fill:
            coords[count] = beta
            jords[count] = X
        count += 1
    return count, coords, jords


@njit(nogil=True, cache=True)
def _pure_tensor(rows, m, G0, p):
    """6 строк из C^0 пропорциональны одной x с x^2 = 0 (n(x) = -x G0 x^T = 0)."""
    piv = -1
    for r in range(6):
        for a in range(m):
            if rows[r * m + a] != 0:
                piv = r
                break
        if piv >= 0:
            break
    if piv < 0:
        return False
    x = rows[piv * m:(piv + 1) * m]
    lead = 0
    while x[lead] == 0:
        lead += 1
    for r in range(6):
        y = rows[r * m:(r + 1) * m]
        mu = y[lead] * inv_mod(x[lead], p) % p
        for a in range(m):
            if (y[a] - mu * x[a]) % p != 0:
                return False
    s = 0
    for a in range(m):
        for b in range(m):
            s = (s + G0[a, b] * x[a] % p * x[b]) % p
    return s == 0


@njit(nogil=True, cache=True)
def rank0_pair_scan(alg, p, inv2, G0, coords, jords, start, stop):
    """Пары (i, j) с i из [start, stop): ранги (0, J(beta_i), J(gamma_j), 0), число нарушений разложения."""
    L = jords.shape[0]
    jd = jords.shape[1]
    m = G0.shape[0]
    counts = np.zeros(5, dtype=np.int64)
    violations = 0
    first_violation = -1
    V = np.zeros(2 + 2 * jd, dtype=np.int64)
    rows = np.zeros(6 * m, dtype=np.int64)
    for i in range(start, stop):
        for j in range(L):
            V[1:1 + jd] = jords[i]
            V[1 + jd:1 + 2 * jd] = jords[j]
            r = w_rank(V, alg, p, inv2)
            counts[r] += 1
            if r != 1:
                continue
            rows[:3 * m] = coords[i]
            rows[3 * m:] = coords[j]
            if not _pure_tensor(rows, m, G0, p):
                violations += 1
                if first_violation < 0:
                    first_violation = i * L + j
    return counts, violations, first_violation
