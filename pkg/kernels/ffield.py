# kernels/ffield.py
"""
Арифметика над F_p для ядер numba.

Элемент C: вектор int64 длины n; элемент J: [c1, c2, c3, x1.., x2.., x3..];
элемент W: [a, b.., c.., d]. Все значения приведены в [0, p).
Таблица алгебры: alg = (mi, mj, mk, mc, conj, bform, tr), b_mi * b_mj += mc * b_mk.
"""
import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def inv_mod(a, p):
    a = a % p
    t, new_t = 0, 1
    r, new_r = p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit(nogil=True, cache=True)
def decode(idx, p, out):
    """Одометр: координата 0 старший разряд."""
    for c in range(out.shape[0] - 1, -1, -1):
        out[c] = idx % p
        idx //= p


@njit(nogil=True, cache=True)
def is_zero(x):
    for i in range(x.shape[0]):
        if x[i] != 0:
            return False
    return True


@njit(nogil=True, cache=True)
def vadd(x, y, p):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = (x[i] + y[i]) % p
    return out


@njit(nogil=True, cache=True)
def vsub(x, y, p):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = (x[i] - y[i]) % p
    return out


@njit(nogil=True, cache=True)
def vscale(s, x, p):
    out = np.empty_like(x)
    s = s % p
    for i in range(x.shape[0]):
        out[i] = s * x[i] % p
    return out


@njit(nogil=True, cache=True)
def matvec(M, x, p):
    out = np.zeros(M.shape[0], dtype=np.int64)
    for j in range(M.shape[1]):
        xj = x[j]
        if xj == 0:
            continue
        for i in range(M.shape[0]):
            out[i] = (out[i] + M[i, j] * xj) % p
    return out


# ---------------------------
# композиционная алгебра
# ---------------------------
@njit(nogil=True, cache=True)
def c_mul(x, y, alg, p):
    mi, mj, mk, mc = alg[0], alg[1], alg[2], alg[3]
    out = np.zeros(x.shape[0], dtype=np.int64)
    for t in range(mi.shape[0]):
        xi = x[mi[t]]
        if xi == 0:
            continue
        yj = y[mj[t]]
        if yj == 0:
            continue
        out[mk[t]] = (out[mk[t]] + mc[t] * xi % p * yj) % p
    return out


@njit(nogil=True, cache=True)
def c_conj(x, alg, p):
    conj = alg[4]
    n = x.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        s = 0
        for j in range(n):
            s = (s + conj[i, j] * x[j]) % p
        out[i] = s
    return out


@njit(nogil=True, cache=True)
def c_bilinear(x, y, alg, p):
    bform = alg[5]
    n = x.shape[0]
    s = 0
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            s = (s + bform[i, j] * x[i] % p * y[j]) % p
    return s


@njit(nogil=True, cache=True)
def c_norm(x, alg, p, inv2):
    return c_bilinear(x, x, alg, p) * inv2 % p


@njit(nogil=True, cache=True)
def c_trace(x, alg, p):
    tr = alg[6]
    s = 0
    for i in range(x.shape[0]):
        s = (s + tr[i] * x[i]) % p
    return s


# ---------------------------
# J_C
# ---------------------------
@njit(nogil=True, cache=True)
def j_norm(X, alg, p, inv2):
    n = (X.shape[0] - 3) // 3
    c1, c2, c3 = X[0], X[1], X[2]
    x1 = X[3:3 + n]
    x2 = X[3 + n:3 + 2 * n]
    x3 = X[3 + 2 * n:3 + 3 * n]
    r = c1 * c2 % p * c3 % p
    r = r - c1 * c_norm(x1, alg, p, inv2) - c2 * c_norm(x2, alg, p, inv2) - c3 * c_norm(x3, alg, p, inv2)
    r = r + c_trace(c_mul(c_mul(x1, x2, alg, p), x3, alg, p), alg, p)
    return r % p


@njit(nogil=True, cache=True)
def j_sharp(X, alg, p, inv2):
    n = (X.shape[0] - 3) // 3
    c1, c2, c3 = X[0], X[1], X[2]
    x1 = X[3:3 + n]
    x2 = X[3 + n:3 + 2 * n]
    x3 = X[3 + 2 * n:3 + 3 * n]
    b1 = c_conj(x1, alg, p)
    b2 = c_conj(x2, alg, p)
    b3 = c_conj(x3, alg, p)
    out = np.empty_like(X)
    out[0] = (c2 * c3 - c_norm(x1, alg, p, inv2)) % p
    out[1] = (c1 * c3 - c_norm(x2, alg, p, inv2)) % p
    out[2] = (c1 * c2 - c_norm(x3, alg, p, inv2)) % p
    y1 = c_mul(b3, b2, alg, p)
    y2 = c_mul(b1, b3, alg, p)
    y3 = c_mul(b2, b1, alg, p)
    for i in range(n):
        out[3 + i] = (y1[i] - c1 * x1[i]) % p
        out[3 + n + i] = (y2[i] - c2 * x2[i]) % p
        out[3 + 2 * n + i] = (y3[i] - c3 * x3[i]) % p
    return out


@njit(nogil=True, cache=True)
def j_pairing(X, Y, alg, p):
    n = (X.shape[0] - 3) // 3
    s = (X[0] * Y[0] + X[1] * Y[1] + X[2] * Y[2]) % p
    for k in range(3):
        lo = 3 + k * n
        s = (s + c_bilinear(X[lo:lo + n], Y[lo:lo + n], alg, p)) % p
    return s


@njit(nogil=True, cache=True)
def j_cross(X, Y, alg, p, inv2):
    s = j_sharp(vadd(X, Y, p), alg, p, inv2)
    return vsub(vsub(s, j_sharp(X, alg, p, inv2), p), j_sharp(Y, alg, p, inv2), p)


@njit(nogil=True, cache=True)
def j_mul(X, Y, jt, p):
    """Йорданово произведение по разреженной таблице jt = (ji, jj, jk, jc)."""
    ji, jj, jk, jc = jt[0], jt[1], jt[2], jt[3]
    out = np.zeros(X.shape[0], dtype=np.int64)
    for t in range(ji.shape[0]):
        xi = X[ji[t]]
        if xi == 0:
            continue
        yj = Y[jj[t]]
        if yj == 0:
            continue
        out[jk[t]] = (out[jk[t]] + jc[t] * xi % p * yj) % p
    return out


@njit(nogil=True, cache=True)
def j_rank(X, alg, p, inv2):
    if is_zero(X):
        return 0
    if is_zero(j_sharp(X, alg, p, inv2)):
        return 1
    if j_norm(X, alg, p, inv2) == 0:
        return 2
    return 3


# ---------------------------
# W_C
# ---------------------------
@njit(nogil=True, cache=True)
def w_symplectic(V, U, alg, p):
    jd = (V.shape[0] - 2) // 2
    d = 1 + 2 * jd
    s = V[0] * U[d] - V[d] * U[0]
    s = s - j_pairing(V[1:1 + jd], U[1 + jd:d], alg, p)
    s = s + j_pairing(V[1 + jd:d], U[1:1 + jd], alg, p)
    return s % p


@njit(nogil=True, cache=True)
def w_t(V, alg, p):
    jd = (V.shape[0] - 2) // 2
    return (V[0] * V[1 + 2 * jd] - j_pairing(V[1:1 + jd], V[1 + jd:1 + 2 * jd], alg, p)) % p


@njit(nogil=True, cache=True)
def w_quartic(V, alg, p, inv2):
    jd = (V.shape[0] - 2) // 2
    a = V[0]
    b = V[1:1 + jd]
    c = V[1 + jd:1 + 2 * jd]
    d = V[1 + 2 * jd]
    t = w_t(V, alg, p)
    q = t * t % p
    q = q + 4 * a % p * j_norm(c, alg, p, inv2)
    q = q + 4 * d % p * j_norm(b, alg, p, inv2)
    q = q - 4 * j_pairing(j_sharp(b, alg, p, inv2), j_sharp(c, alg, p, inv2), alg, p)
    return q % p


@njit(nogil=True, cache=True)
def w_flat(V, alg, p, inv2):
    jd = (V.shape[0] - 2) // 2
    a = V[0]
    b = V[1:1 + jd]
    c = V[1 + jd:1 + 2 * jd]
    d = V[1 + 2 * jd]
    t = w_t(V, alg, p)
    bs = j_sharp(b, alg, p, inv2)
    cs = j_sharp(c, alg, p, inv2)
    cb = j_cross(c, bs, alg, p, inv2)
    bc = j_cross(b, cs, alg, p, inv2)
    out = np.empty_like(V)
    out[0] = (-a * t - 2 * j_norm(b, alg, p, inv2)) % p
    for i in range(jd):
        out[1 + i] = (-2 * cb[i] + 2 * a * cs[i] - t * b[i]) % p
        out[1 + jd + i] = (2 * bc[i] - 2 * d * bs[i] + t * c[i]) % p
    out[1 + 2 * jd] = (d * t + 2 * j_norm(c, alg, p, inv2)) % p
    return out


@njit(nogil=True, cache=True)
def _flat_derivative(V, E, alg, p, inv2):
    # D(E) = [flat(V+E) - flat(V-E)]/2 - flat(E)
    fp = w_flat(vadd(V, E, p), alg, p, inv2)
    fm = w_flat(vsub(V, E, p), alg, p, inv2)
    return vsub(vscale(inv2, vsub(fp, fm, p), p), w_flat(E, alg, p, inv2), p)


@njit(nogil=True, cache=True)
def w_rank1_test(V, alg, p, inv2):
    """(V,V,w,w') = 0 на V^perp <=> производная flat на V^perp лежит в span(V)."""
    D = V.shape[0]
    E = np.zeros(D, dtype=np.int64)
    ell = np.zeros(D, dtype=np.int64)
    for i in range(D):
        E[i] = 1
        ell[i] = w_symplectic(V, E, alg, p)
        E[i] = 0
    k = -1
    for i in range(D):
        if ell[i] != 0:
            k = i
            break
    p0 = -1
    for i in range(D):
        if V[i] != 0:
            p0 = i
            break
    inv_v = inv_mod(V[p0], p)
    E[k] = 1
    dk = _flat_derivative(V, E, alg, p, inv2)
    E[k] = 0
    inv_lk = inv_mod(ell[k], p)
    for i in range(D):
        if i == k:
            continue
        E[i] = 1
        di = _flat_derivative(V, E, alg, p, inv2)
        E[i] = 0
        coef = ell[i] * inv_lk % p
        w = vsub(di, vscale(coef, dk, p), p)
        lam = w[p0] * inv_v % p
        for j in range(D):
            if (w[j] - lam * V[j]) % p != 0:
                return False
    return True


@njit(nogil=True, cache=True)
def w_rank(V, alg, p, inv2):
    if is_zero(V):
        return 0
    if w_quartic(V, alg, p, inv2) != 0:
        return 4
    if not is_zero(w_flat(V, alg, p, inv2)):
        return 3
    if w_rank1_test(V, alg, p, inv2):
        return 1
    return 2
