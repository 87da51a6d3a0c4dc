"""Straight-line reference implementations, written independently of ecoval.

Plain Python loops, no numpy and no imports from the package, so that they
share no code path with what they check.
"""

import math


def climate(c1, c2):
    return 1.63 * c1 + 1.19 * c2


def pollution(pairs, h, q):
    total = 0.0
    for x, c in pairs:
        total = total + x * c
    return h * total / q


def landscape(u, i_use, unit):
    scores = []
    for row in u:
        s = 0.0
        for uij, ij in zip(row, i_use):
            s = s + uij * ij
        scores.append(s)
    return scores, unit * (sum(scores) / len(scores))


def fishery(r, c, s):
    return (r - c) / s


def urban(p_v, p_0, e_protect, area_s, delta, sigma, p_s, rho):
    return p_v * p_0 * e_protect / (area_s * delta) * sigma * p_s * rho


def entropy(matrix, cost_columns=()):
    m, n = len(matrix), len(matrix[0])
    d = []
    for j in range(n):
        col = [matrix[i][j] for i in range(m)]
        lo, hi = min(col), max(col)
        if hi == lo:
            d.append(0.0)
            continue
        if j in cost_columns:
            x = [(hi - v) / (hi - lo) for v in col]
        else:
            x = [(v - lo) / (hi - lo) for v in col]
        s = sum(x)
        e = 0.0
        for v in x:
            p = v / s
            if p > 0:
                e -= p * math.log(p)
        d.append(1 - e / math.log(m))
    total = sum(d)
    return [v / total for v in d]


def matvec_left(w, r):
    out = []
    for j in range(len(r[0])):
        s = 0.0
        for i in range(len(w)):
            s += w[i] * r[i][j]
        out.append(s)
    return out


def _sig(z):
    return 1.0 / (1.0 + math.exp(-z))


def lstm_step(W, b, h, c, x):
    """One cell step; ``W[g]`` is a list of rows over ``[h, x]``, ``b[g]`` a list."""
    z = list(h) + list(x)
    H = len(h)

    def affine(g, k):
        return sum(W[g][k][j] * z[j] for j in range(len(z))) + b[g][k]

    f = [_sig(affine("f", k)) for k in range(H)]
    i = [_sig(affine("i", k)) for k in range(H)]
    g = [math.tanh(affine("c", k)) for k in range(H)]
    o = [_sig(affine("o", k)) for k in range(H)]
    c_new = [f[k] * c[k] + i[k] * g[k] for k in range(H)]
    h_new = [o[k] * math.tanh(c_new[k]) for k in range(H)]
    return h_new, c_new


def ishigami_indices(a=7.0, b=0.1):
    """Closed-form first-order and total indices on [-pi, pi]^3."""
    pi = math.pi
    v1 = 0.5 * (1 + b * pi ** 4 / 5) ** 2
    v2 = a ** 2 / 8
    v13 = b ** 2 * pi ** 8 * (1 / 18 - 1 / 50)
    v = v1 + v2 + v13
    return (v1 / v, v2 / v, 0.0), ((v1 + v13) / v, v2 / v, v13 / v)
