"""Regenerates h_oracle.json: optimal values of H(N,N) solved with HiGHS.

A(i, j) = ((7*i + 13*j + 3*i*j + seed) mod 97) / 97, exact in binary64.
"""
import json

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import coo_matrix

CASES = [(4, 12, 2, 1), (5, 16, 3, 2), (6, 20, 3, 3), (10, 30, 4, 5), (10, 40, 3, 4)]


def matrix(d, n, seed):
    return np.array([[((7 * i + 13 * j + 3 * i * j + seed) % 97) / 97.0 for j in range(n)] for i in range(d)])


def hottopixx(a, r):
    d, n = a.shape
    nx, nr = n * n, d * n
    xo, po, mo, uo = 0, nx, nx + nr, nx + 2 * nr
    nv = uo + 1
    X = lambda i, j: xo + i * n + j
    rows, cols, vals, beq = [], [], [], []
    eq = 0
    for k in range(d):
        for j in range(n):
            for i in range(n):
                rows.append(eq); cols.append(X(i, j)); vals.append(a[k, i])
            rows += [eq, eq]; cols += [po + k * n + j, mo + k * n + j]; vals += [1.0, -1.0]
            beq.append(a[k, j]); eq += 1
    for i in range(n):
        rows.append(eq); cols.append(X(i, i)); vals.append(1.0)
    beq.append(float(r)); eq += 1
    a_eq = coo_matrix((vals, (rows, cols)), shape=(eq, nv))
    rows, cols, vals, bub = [], [], [], []
    ub = 0
    for j in range(n):
        for k in range(d):
            rows += [ub, ub]; cols += [po + k * n + j, mo + k * n + j]; vals += [1.0, 1.0]
        rows.append(ub); cols.append(uo); vals.append(-1.0)
        bub.append(0.0); ub += 1
    for i in range(n):
        for j in range(n):
            if i != j:
                rows += [ub, ub]; cols += [X(i, j), X(i, i)]; vals += [1.0, -1.0]
                bub.append(0.0); ub += 1
    a_ub = coo_matrix((vals, (rows, cols)), shape=(ub, nv))
    c = np.zeros(nv); c[uo] = 1.0
    bounds = [(0, 1)] * nx + [(0, None)] * (2 * nr + 1)
    res = linprog(c, A_ub=a_ub, b_ub=bub, A_eq=a_eq, b_eq=beq, bounds=bounds, method="highs",
                  options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10})
    assert res.status == 0, res.message
    return res.fun


out = []
for d, n, r, seed in CASES:
    out.append({"d": d, "n": n, "r": r, "seed": seed, "optimum": hottopixx(matrix(d, n, seed), r)})
with open("h_oracle.json", "w") as f:
    json.dump(out, f, indent=2)
    f.write("\n")
