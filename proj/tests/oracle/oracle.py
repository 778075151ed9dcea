# Copyright 2026 The csapir Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference computations whose outputs are frozen into the C++
tests. Written from the formulas with 1-based indices, plain Python ints and
sympy; shares no code with the library.

Run: python3 tests/oracle/oracle.py
"""

from fractions import Fraction
from itertools import product

import sympy


def inv(a, q):
    return pow(a % q, q - 2, q)


def gpow(g, e, q):
    return pow(g % q, e, q) if e >= 0 else pow(inv(g, q), -e, q)


def points(L, N, q):
    return [l for l in range(1, L + 1)], [(L + n) % q for n in range(1, N + 1)]


def storage(W, Z, f, a, Kc, X, K, L, q):
    """S[n][l][m], W[m][s] with s 1-based symbol index L(k-1)+l."""
    S = []
    for n in range(len(a)):
        rows = []
        for l in range(1, L + 1):
            g = f[l - 1] - a[n]
            row = []
            for m in range(K):
                v = 0
                for k in range(1, Kc + 1):
                    v += W[m][L * (k - 1) + l - 1] * gpow(g, -(Kc - k + 1), q)
                for x in range(1, X + 1):
                    v += gpow(g, x - 1, q) * Z[l - 1][x - 1][m]
                row.append(v % q)
            rows.append(row)
        S.append(rows)
    return S


def queries(theta, Zp, f, a, Kc, T, K, L, q):
    """Q[n][kappa][l][m]."""
    Q = []
    for n in range(len(a)):
        rounds = []
        for kappa in range(1, Kc + 1):
            layers = []
            for l in range(1, L + 1):
                g = f[l - 1] - a[n]
                col = []
                for m in range(1, K + 1):
                    v = gpow(g, Kc - kappa, q) if m == theta else 0
                    for t in range(1, T + 1):
                        v += gpow(g, Kc + t - 1, q) * Zp[kappa - 1][l - 1][t - 1][m - 1]
                    col.append(v % q)
                layers.append(col)
            rounds.append(layers)
        Q.append(rounds)
    return Q


def answers(S, Q, q):
    out = []
    for n in range(len(S)):
        out.append([sum(S[n][l][m] * Q[n][r][l][m] for l in range(len(S[n])) for m in range(len(S[n][l]))) % q
                    for r in range(len(Q[n]))])
    return out


def cv_matrix(f, a, rows, L, width, q):
    M = []
    for n in rows:
        row = [inv(f[l] - a[n], q) for l in range(L)]
        row += [gpow(a[n], j, q) for j in range(width - L)]
        M.append(row)
    return M


def det_mod(M, q):
    return int(sympy.Matrix(M).det()) % q


def solve_mod(M, b, q):
    Mi = sympy.Matrix(M).inv_mod(q)
    return [int(v) % q for v in Mi * sympy.Matrix(b)]


def decode(A, f, a, Kc, L, width, q):
    """Successive decoding with cancellation, all servers, no errors."""
    N = len(a)
    M = cv_matrix(f, a, range(N), L, width, q)
    decoded = []  # decoded[kappa-1][l-1]
    offsets_all = []
    for kappa in range(1, Kc + 1):
        offsets = []
        for n in range(N):
            off = 0
            for k in range(1, kappa):
                for l in range(1, L + 1):
                    off += decoded[k - 1][l - 1] * gpow(f[l - 1] - a[n], -(kappa - k + 1), q)
            offsets.append(off % q)
        rhs = [(A[n][kappa - 1] - offsets[n]) % q for n in range(N)]
        sol = solve_mod(M, rhs, q)
        decoded.append(sol[:L])
        offsets_all.append(offsets)
    return decoded, offsets_all


def worked(N, q, W, Z, Zp, theta):
    Kc, X, T = 2, 1, 1
    K = len(W)
    L = N - (X + T + Kc - 1)
    f, a = points(L, N, q)
    S = storage(W, Z, f, a, Kc, X, K, L, q)
    Q = queries(theta, Zp, f, a, Kc, T, K, L, q)
    A = answers(S, Q, q)
    dec, offs = decode(A, f, a, Kc, L, N, q)
    return dict(L=L, f=f, alpha=a, S=S, A=A, decoded=dec, offsets=offs,
                rate=Fraction(L * Kc, Kc * N))


def audit_support(N, Kc, X, T, K, q, colluding, target, s1, s2):
    """Exact distribution comparison by brute force."""
    L = N - (X + T + Kc - 1)
    f, a = points(L, N, q)

    def dist(scenario):
        counts = {}
        if target == "storage":
            W = scenario
            for flat in product(range(q), repeat=L * X * K):
                Z = [[list(flat[(l * X + x) * K:(l * X + x + 1) * K]) for x in range(X)] for l in range(L)]
                S = storage(W, Z, f, a, Kc, X, K, L, q)
                obs = tuple(v for n in colluding for layer in S[n - 1] for v in layer)
                counts[obs] = counts.get(obs, 0) + 1
        else:
            theta = scenario
            for flat in product(range(q), repeat=Kc * L * T * K):
                Zp = [[[list(flat[((r * L + l) * T + t) * K:((r * L + l) * T + t + 1) * K]) for t in range(T)]
                       for l in range(L)] for r in range(Kc)]
                Q = queries(theta, Zp, f, a, Kc, T, K, L, q)
                obs = tuple(v for n in colluding for rnd in Q[n - 1] for layer in rnd for v in layer)
                counts[obs] = counts.get(obs, 0) + 1
        return counts

    d1, d2 = dist(s1), dist(s2)
    return len(d1), d1 == d2


def psdmm_exponent_span(Kc, XA, XB):
    """Exponents of g appearing in A~ * B~ as a Laurent polynomial."""
    g = sympy.symbols("g")
    Aks = sympy.symbols(f"A1:{Kc + 1}")
    Zs = sympy.symbols(f"Z1:{XA + 1}") if XA else ()
    Zb = sympy.symbols(f"Y1:{XB + 1}") if XB else ()
    B = sympy.symbols("B")
    At = sum(Aks[k - 1] / g ** (Kc - k + 1) for k in range(1, Kc + 1)) + sum(
        g ** (x - 1) * Zs[x - 1] for x in range(1, XA + 1))
    Bt = B + sum(g ** (Kc + x - 1) * Zb[x - 1] for x in range(1, XB + 1))
    expr = sympy.expand(At * Bt * g ** Kc)
    exps = sorted(sympy.Poly(expr, g).monoms())
    return sorted(e[0] - Kc for e in exps)


def psdmm_scalar(N, T, XA, XB, Kc, q, A, Blib, ZA, ZB, ZQ, theta):
    """lambda = chi = mu = 1. Returns answers Y[n][kappa] and the products."""
    L = N - (XA + XB + T + 2 * Kc - 2) if XB else N - (XA + T + Kc - 1)
    f, a = points(L, N, q)
    M = len(Blib)
    Y = []
    for n in range(N):
        row = []
        for kappa in range(1, Kc + 1):
            acc = 0
            for l in range(1, L + 1):
                g = f[l - 1] - a[n]
                At = sum(A[L * (k - 1) + l - 1] * gpow(g, -(Kc - k + 1), q) for k in range(1, Kc + 1))
                At += sum(gpow(g, x - 1, q) * ZA[l - 1][x - 1] for x in range(1, XA + 1))
                Bt = [Blib[m] + sum(gpow(g, Kc + x - 1, q) * ZB[l - 1][x - 1][m] for x in range(1, XB + 1))
                      for m in range(M)]
                Qv = [(gpow(g, Kc - kappa, q) if m == theta - 1 else 0) +
                      sum(gpow(g, Kc + t - 1, q) * ZQ[kappa - 1][l - 1][t - 1][m] for t in range(1, T + 1))
                      for m in range(M)]
                acc += At * sum(Bt[m] * Qv[m] for m in range(M))
            row.append(acc % q)
        Y.append(row)
    return L, Y, [(x * Blib[theta - 1]) % q for x in A]


def main():
    print("== GF(11) inverses 1..10:", [inv(x, 11) for x in range(1, 11)])
    print("== next_prime(8), (9), (12), (14):", [sympy.nextprime(n - 1) for n in (8, 9, 12, 14)])

    # Worked example, four servers, q = 5.
    W4 = [[1, 2], [3, 4], [0, 1]]
    Z4 = [[[2, 0, 4]]]
    Zp4 = [[[[1, 3, 2]]], [[[4, 4, 0]]]]
    r = worked(4, 5, W4, Z4, Zp4, theta=2)
    print("== N=4 q=5", r)

    # Worked example, five servers, q = 7.
    W5 = [[1, 2, 3, 4], [5, 6, 0, 1]]
    Z5 = [[[3, 1]], [[6, 2]]]
    Zp5 = [[[[2, 5]], [[1, 1]]], [[[0, 4]], [[3, 6]]]]
    r = worked(5, 7, W5, Z5, Zp5, theta=1)
    print("== N=5 q=7", r)

    f, a = points(2, 5, 7)
    print("== det M_{2,5} over GF(7):", det_mod(cv_matrix(f, a, range(5), 2, 5, 7), 7))
    f, a = points(1, 4, 5)
    print("== det M_{1,4} over GF(5):", det_mod(cv_matrix(f, a, range(4), 1, 4, 5), 5))

    # Rates.
    print("== rate N=8 Kc=2 X=T=U=B=1:", 1 - Fraction(2 + 1 + 1 + 2 - 1, 8 - 1))
    print("== prior N=8 Kc=2 X=T=U=B=1:", (1 - Fraction(5, 7)) * Fraction(2, 3))
    print("== rates N=4..12 at Kc=2 X=T=1:", [str(1 - Fraction(3, n)) for n in range(4, 13)])

    # Audits at q = 5, N=4 Kc=2 X=T=1 K=2.
    print("== storage audit {1}:", audit_support(4, 2, 1, 1, 2, 5, [1], "storage", [[1, 2], [3, 4]], [[0, 0], [4, 4]]))
    print("== storage audit {1,2}:", audit_support(4, 2, 1, 1, 2, 5, [1, 2], "storage", [[1, 2], [3, 4]], [[0, 0], [4, 4]]))
    print("== query audit {3}:", audit_support(4, 2, 1, 1, 2, 5, [3], "query", 1, 2))
    print("== query audit {1,4}:", audit_support(4, 2, 1, 1, 2, 5, [1, 4], "query", 1, 2))

    for kc, xa, xb in [(1, 1, 0), (1, 1, 1), (2, 1, 1), (2, 2, 1), (3, 1, 2), (2, 1, 0)]:
        span = psdmm_exponent_span(kc, xa, xb)
        print(f"== psdmm span Kc={kc} XA={xa} XB={xb}: min {span[0]} max {span[-1]} count {len(set(span))}")

    L, Y, prod = psdmm_scalar(6, 1, 1, 1, 1, 11, A=[3, 7, 1], Blib=[5, 9], ZA=[[2], [4], [6]],
                              ZB=[[[1, 6]], [[8, 3]], [[0, 7]]], ZQ=[[[[10, 2]], [[5, 5]], [[4, 9]]]], theta=2)
    print("== psdmm scalar N=6 T=XA=XB=Kc=1 q=11:", dict(L=L, Y=Y, product=prod))

    hull = []
    for kc in range(1, 9):
        n = 10
        Lc = n - (1 + 1 + kc - 1)
        if Lc < 1:
            continue
        hull.append((kc, str(Fraction(n, kc)), str(Fraction(n, Lc)),
                     str(Fraction(kc + 1, kc) * Fraction(n, n - (kc + 1)))))
    print("== psdmm hull N=10 XA=T=1 XB=0:", hull)


if __name__ == "__main__":
    main()
