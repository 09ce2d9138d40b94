"""Independent oracles, frozen to frozen.json.

Nothing from bethecert is imported here.  Representations come from
polynomial and exterior-power models, counts from brute force, and the
limit angles from a floating-point residue pipeline.  Re-run with
``python tests/oracles/build_frozen.py`` to regenerate.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy as sp

OUT = Path(__file__).with_name("frozen.json")


# counts ----------------------------------------------------------------------

def weyl_dim(lam):
    d = Fraction(1)
    for i in range(len(lam)):
        for j in range(i + 1, len(lam)):
            d *= Fraction(lam[i] - lam[j] + j - i, j - i)
    return int(d)


def gt_count(lam, bottom=None):
    """Brute-force interlacing patterns; ``bottom`` fixes the length-1 row."""
    rows = [tuple(lam)]

    def rec(row):
        if len(row) == 1:
            return 1 if bottom is None or row[0] == bottom else 0
        total = 0
        for nxt in itertools.product(*[range(row[i + 1], row[i] + 1) for i in range(len(row) - 1)]):
            total += rec(nxt)
        return total

    return rec(rows[0])


def ssyt_bruteforce(lam, mu, n):
    mu = list(mu) + [0] * (len(lam) - len(mu))
    cells = [(r, c) for r in range(len(lam)) for c in range(mu[r], lam[r])]
    count = 0
    for fill in itertools.product(range(1, n + 1), repeat=len(cells)):
        t = dict(zip(cells, fill))
        ok = all(
            (t.get((r, c + 1), 10**9) >= x) and (t.get((r + 1, c), 10**9) > x)
            for (r, c), x in t.items()
        )
        count += ok
    return count


def casimir(lam):
    # sum_ij E_ij E_ji on the highest vector
    n = len(lam)
    return sum(l * (l + n + 1 - 2 * (i + 1)) for i, l in enumerate(lam))


# models ----------------------------------------------------------------------

def sym_model(n, l):
    xs = sp.symbols(f"x1:{n + 1}")
    monos = [sp.Mul(*[x**e for x, e in zip(xs, exps)]) for exps in itertools.product(range(l + 1), repeat=n) if sum(exps) == l]
    poly_basis = [sp.Poly(m, *xs) for m in monos]
    keys = [p.monoms()[0] for p in poly_basis]

    def E(i, j):
        M = sp.zeros(len(monos))
        for b, m in enumerate(monos):
            img = sp.Poly(sp.expand(xs[i] * sp.diff(m, xs[j])), *xs)
            for mon, coef in zip(img.monoms(), img.coeffs()):
                if coef == 0:
                    continue
                M[keys.index(mon), b] += coef
        return M

    return len(monos), E


def wedge_model(n, r):
    basis = list(itertools.combinations(range(n), r))

    def E(i, j):
        M = sp.zeros(len(basis))
        for b, s in enumerate(basis):
            if j not in s:
                continue
            t = list(s)
            t[t.index(j)] = i
            if len(set(t)) < r:
                continue
            perm = sorted(range(r), key=lambda k: t[k])
            sign = sp.Matrix(r, r, lambda a, c: 1 if perm[a] == c else 0).det()
            M[basis.index(tuple(sorted(t))), b] += sign
        return M

    return len(basis), E


def kr_scalar(n, l, r):
    if r == 1:
        d, E = sym_model(n, l)
    elif l == 1:
        d, E = wedge_model(n, r)
    else:
        raise NotImplementedError
    P = sp.zeros(n * d)
    for i in range(n):
        for j in range(n):
            e = sp.zeros(n)
            e[i, j] = 1
            P += sp.kronecker_product(e, E(i, j))
    P2 = P * P
    k = next(k for k in range(len(P)) if P[k] != 0)
    a = P2[k] / P[k]
    assert P2 == a * P
    return int(a)


def qdet_c2(z):
    u = sp.symbols("u")
    e = lambda i, j: sp.Matrix(2, 2, lambda a, b: 1 if (a, b) == (i, j) else 0)
    t = lambda i, j, v: (sp.eye(2) if i == j else sp.zeros(2)) + e(i, j) / (v - z)
    q = sp.simplify(t(0, 0, u) * t(1, 1, u - 1) - t(1, 0, u) * t(0, 1, u - 1))
    assert q.is_diagonal() and sp.simplify(q[0, 0] - q[1, 1]) == 0
    num, den = sp.fraction(sp.factor(q[0, 0]))
    return [str(sp.expand(num)), str(sp.expand(den))]


def skew_box_t11():
    """(1,0)/(0): invert 1 + E/(-u-2) on C^2 by hand, keep t_11 on the E_22 = 0 line."""
    u = sp.symbols("u")
    big = sp.eye(4)
    for i in range(2):
        for j in range(2):
            big[2 * i + i, 2 * j + j] += 1 / (-u - 2)  # block (i,j) = e_ij
    inv = sp.simplify(big.inv())
    val = sp.factor(inv[0, 0])  # block (1,1), vector e_1
    num, den = sp.fraction(val)
    return [str(sp.expand(num)), str(sp.expand(den))]


def krylov_sym2():
    """Bethe image of V_(2,0)(0), C = diag(1,2): span{1, E11 + 2 E22} in the Sym^2 model."""
    d, E = sym_model(2, 2)
    H = E(0, 0) + 2 * E(1, 1)
    v = sp.Matrix([1] * d)
    K = sp.Matrix.hstack(v, H * v, H * H * v)
    span = sp.Matrix([list(sp.eye(d)), list(H)])
    return {"krylov_dim": int(K.rank()), "span_dim": int(span.rank())}


# limit angles ----------------------------------------------------------------

def _residues(c, z1, z2):
    """Residues at z1, z2 of sum_i c_i t_ii(u) on C^2(z1) (x) C^2(z2)."""
    e = lambda i, j: np.outer(np.eye(2)[i], np.eye(2)[j])
    A = lambda i, j: np.kron(e(i, j), np.eye(2))
    B = lambda i, j: np.kron(np.eye(2), e(i, j))
    R1 = sum(c[i] * A(i, i) for i in range(2))
    R2 = sum(c[i] * B(i, i) for i in range(2))
    R12 = sum(c[i] * A(i, k) @ B(k, i) for i in range(2) for k in range(2))
    return R1 + R12 / (z1 - z2), R2 - R12 / (z1 - z2)


def _closure(gens):
    basis: list[np.ndarray] = []

    def add(m):
        v = m.reshape(-1).astype(complex)
        for b in basis:
            v = v - (b.conj() @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-10 * max(1.0, np.linalg.norm(m)):
            basis.append(v / nv)
            return True
        return False

    items = [np.eye(4)] + list(gens)
    for g in items:
        add(g)
    frontier = list(items)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                if add(y):
                    nxt.append(y)
        frontier = nxt
    return np.array(basis).T


def _max_angle(Q1, Q2):
    resid = Q2 - Q1 @ (Q1.conj().T @ Q2)
    s = np.linalg.svd(resid, compute_uv=False)
    return float(np.arcsin(min(1.0, s.max())))


def caterpillar_angles(ts, z1=0.0, z2=1 / 3):
    gt = _closure(_residues([1.0, 0.0], z1, z2))
    out = []
    for t in ts:
        b = _closure(_residues([1.0, t], z1, z2))
        assert b.shape[1] == gt.shape[1]
        out.append(_max_angle(gt, b))
    return {"dim": int(gt.shape[1]), "angles": out}


def main():
    weights = [(1, 0), (2, 0), (3, 0), (3, 1), (1, 0, 0), (2, 1, 0), (2, 0, 0), (1, 1, 0), (3, 1, 0), (2, 1, 1, 0)]
    frozen = {
        "weyl_dim": {",".join(map(str, w)): weyl_dim(w) for w in weights},
        "gt_count": {",".join(map(str, w)): gt_count(w) for w in weights},
        "casimir": {",".join(map(str, w)): casimir(w) for w in weights},
        "ssyt": {
            f"{','.join(map(str, l))}/{','.join(map(str, m))}/{n}": ssyt_bruteforce(l, m, n)
            for l, m, n in [((1,), (), 2), ((1, 1), (), 2), ((2, 1), (), 2), ((2, 1), (), 3), ((2, 1, 0), (1,), 2),
                            ((3, 2), (1,), 3), ((2, 2), (1,), 3), ((3, 1, 1), (2,), 3), ((2, 1), (), 4)]
        },
        "branching_gl3_gl1": {"2,1,0|1": gt_count((2, 1, 0), bottom=1)},
        "kr_scalar": {f"{n},{l},{r}": kr_scalar(n, l, r) for n, l, r in [(2, 1, 1), (2, 2, 1), (3, 1, 1), (3, 1, 2), (3, 2, 1), (4, 1, 2)]},
        "qdet_c2": {"0": qdet_c2(0), "1/2": qdet_c2(sp.Rational(1, 2))},
        "skew_box_t11": skew_box_t11(),
        "bethe_sym2": krylov_sym2(),
        "caterpillar": {"ts": ["1/10", "1/100", "1/1000", "1/10000"], **caterpillar_angles([1e-1, 1e-2, 1e-3, 1e-4])},
    }
    OUT.write_text(json.dumps(frozen, indent=2, sort_keys=True) + "\n")
    print(json.dumps(frozen, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
