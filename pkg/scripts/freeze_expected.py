"""Freeze expected invariant tables for the small named sets.

Independent of lievar's cohomology and series code: the coboundary is built
from the textbook formula on alternating maps and ranks come from sympy.
Only the structure constants are read through the catalog.

    python3 scripts/freeze_expected.py [SET ...]
"""

import argparse
from itertools import combinations
from pathlib import Path

import sympy

from lievar.catalog import default_catalog, get_set

SETS = ["N3", "N4", "N5", "N6-filiform", "L2", "L3", "L4"]
OUT = Path(__file__).resolve().parents[1] / "src" / "lievar" / "data" / "expected"


def constants(ref):
    L = default_catalog().get(ref)
    n = L.n
    c = [[[sympy.Rational(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, v in enumerate(L.structure(i, j)):
                c[i][j][k] = sympy.Rational(v.numerator, v.denominator)
    return n, c


def sort_sign(idx):
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, None
    sign = 1
    for a in range(len(idx)):
        for b in range(len(idx) - 1 - a):
            if idx[b] > idx[b + 1]:
                idx[b], idx[b + 1] = idx[b + 1], idx[b]
                sign = -sign
    return sign, tuple(idx)


def coboundary(n, c, j, adjoint):
    """Matrix of d: C^j -> C^(j+1) in the basis (subset, module index)."""
    dm = n if adjoint else 1
    src = [(T, m) for T in combinations(range(n), j) for m in range(dm)]
    dst = [(S, m) for S in combinations(range(n), j + 1) for m in range(dm)]
    col = {b: k for k, b in enumerate(src)}
    M = sympy.zeros(len(dst), len(src))
    for r, (S, m) in enumerate(dst):
        # (d f)(x_S)_m for f = delta_(T, m')
        for i in range(j + 1):
            rest = S[:i] + S[i + 1:]
            if adjoint:
                # sign (-1)^i, term rho(x_Si) f(rest)
                for mp in range(n):
                    coef = c[S[i]][mp][m]
                    if coef:
                        M[r, col[(rest, mp)]] += (-1) ** i * coef
        for a in range(j + 1):
            for b in range(a + 1, j + 1):
                rest = S[:a] + S[a + 1:b] + S[b + 1:]
                for l in range(n):
                    coef = c[S[a]][S[b]][l]
                    if not coef:
                        continue
                    sgn, T = sort_sign((l,) + rest)
                    if sgn:
                        M[r, col[(T, m if adjoint else 0)]] += (-1) ** (a + b) * sgn * coef
    return M


def span_rank(vectors):
    return sympy.Matrix(vectors).rank() if vectors else 0


def brackets(n, c, A, B):
    out = []
    for u in A:
        for v in B:
            w = [sum(u[i] * v[j] * c[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]
            out.append(w)
    if not out:
        return []
    M = sympy.Matrix(out)
    return [list(M.row(i)) for i in range(M.rows)] if M.rank() else []


def basis(vectors):
    if not vectors:
        return []
    M = sympy.Matrix(vectors).rref()[0]
    return [list(M.row(i)) for i in range(M.rows) if any(M.row(i))]


def series_class(n, c, lower):
    full = [list(r) for r in sympy.eye(n).tolist()]
    cur, k = full, 1
    while cur:
        nxt = basis(brackets(n, c, full if lower else cur, cur))
        if len(nxt) == len(cur):
            return "-"
        cur, k = nxt, k + 1
    return str(k - 1)


def row(ref):
    n, c = constants(ref)
    out = []
    for adjoint in (True, False):
        r = [coboundary(n, c, j, adjoint).rank() for j in range(n + 1)]
        dim = [(n if adjoint else 1) * sympy.binomial(n, j) for j in range(n + 1)]
        h = [dim[j] - r[j] - (r[j - 1] if j else 0) for j in range(n + 1)]
        out.append(h)
        if adjoint:
            der = dim[1] - r[1]
    h, b = out
    return [ref, " ".join(map(str, h)), " ".join(map(str, b[1:])),
            series_class(n, c, True), series_class(n, c, False), str(n * n - der)]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("sets", nargs="*", default=SETS)
    args = ap.parse_args(argv)
    for name in args.sets:
        aset = get_set(name)
        lines = ["# source: independent sympy recomputation (scripts/freeze_expected.py)",
                 "# ref\th0..hn\tb1..bn\tnil_class\tsolv_class\torbit_dim"]
        for ref in aset.refs:
            lines.append("\t".join(row(ref)))
        (OUT / f"{name}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        print(f"{name}: {len(aset.refs)} rows")


if __name__ == "__main__":
    main()
