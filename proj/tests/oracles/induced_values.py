"""Reference values for the induced-transform tests, computed with mpmath.

det(I + D_n T_n) for T = p a^{|i-j|}, D_n = diag(e(lambda^k t) - 1), and the
deviation from prod_k (p e(lambda^k t) + 1 - p).
"""
from mpmath import mp, mpf, exp, pi, matrix, det, fabs

mp.dps = 40


def e(x):
    return exp(2j * pi * x)


def det_n(p, a, lam, t, n):
    m = matrix(n, n)
    for i in range(n):
        d = e(lam ** (i + 1) * t) - 1
        for j in range(n):
            m[i, j] = (1 if i == j else 0) + d * p * a ** abs(i - j)
    return det(m)


def product(p, lam, t, n):
    v = mpf(1)
    for k in range(1, n + 1):
        v *= p * e(lam ** k * t) + 1 - p
    return v


p, a, lam = mpf("0.3"), mpf("0.5"), mpf("0.5")
for t in (mpf("0.7"), mpf("1.3")):
    devs = [fabs(det_n(p, a, lam, t, n) - product(p, lam, t, n)) for n in range(1, 14)]
    print(f"t={t}: det_8 =", mp.nstr(det_n(p, a, lam, t, 8), 17))
    print("  dev(n), n=1..13:", [mp.nstr(d, 8) for d in devs])
    print("  ratios n=6..12:", [mp.nstr(devs[n] / devs[n - 1], 6) for n in range(6, 13)])

# minors of A_n = [a^{|i-j|}]
for n, aa in ((3, mpf("0.5")), (5, mpf("0.2"))):
    A = matrix(n, n)
    for i in range(n):
        for j in range(n):
            A[i, j] = aa ** abs(i - j)
    minors = []
    for k in range(n):
        idx = [i for i in range(n) if i != k]
        minors.append(det(matrix([[A[i, j] for j in idx] for i in idx])))
    print(f"A_{n}(a={aa}): det =", mp.nstr(det(A), 17), " minors =", [mp.nstr(m, 17) for m in minors])
