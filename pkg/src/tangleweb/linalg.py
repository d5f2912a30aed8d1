"""Exact sparse linear algebra over the rationals and over prime fields.

Rows are dicts mapping column index -> nonzero scalar.  Everything here is
elimination-based; no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def clear_denominators(row):
    """Scale a Fraction row to a primitive integer row (gcd 1)."""
    if not row:
        return {}
    lcm = 1
    for v in row.values():
        d = Fraction(v).denominator
        lcm = lcm * d // gcd(lcm, d)
    ints = {j: int(v * lcm) for j, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {j: v // g for j, v in ints.items()}
    return ints


def sparse_rank(rows, mod=None):
    """Rank of a sparse matrix given as an iterable of rows.

    With mod=None the computation is exact over Q (integer rows with gcd
    normalization, so entries stay bounded in practice).  With a prime mod,
    arithmetic is in GF(mod); the result is then a lower bound on the
    rational rank, exact for all but finitely many primes.
    """
    if mod is None:
        pending = [clear_denominators(r) for r in rows]
    else:
        pending = [_row_mod(r, mod) for r in rows]
    pending = [r for r in pending if r]

    # pivots: column -> reduced row with leading entry normalized to 1 (mod p)
    pivots = {}
    usage = {}
    # sparsest-first keeps fill down
    pending.sort(key=len)
    for row in pending:
        row = _reduce_row(row, pivots, mod)
        if not row:
            continue
        col = _pick_pivot_col(row, usage, mod)
        if mod is not None:
            inv = pow(row[col], mod - 2, mod)
            if inv != 1:
                row = {j: v * inv % mod for j, v in row.items()}
        pivots[col] = row
        for j in row:
            usage[j] = usage.get(j, 0) + 1
    return len(pivots)


def _row_mod(r, mod):
    rr = {}
    for j, v in r.items():
        if isinstance(v, int):
            x = v % mod
        else:
            f = Fraction(v)
            den = f.denominator % mod
            if den == 0:
                raise ZeroDivisionError("denominator divisible by modulus")
            x = f.numerator % mod * pow(den, mod - 2, mod) % mod
        if x:
            rr[j] = x
    return rr


def _pick_pivot_col(row, usage, mod):
    # approximate Markowitz: pivot on the least-used column; for exact rows
    # prefer small entries to slow coefficient growth
    best = None
    if mod is None:
        for j, v in row.items():
            key = (usage.get(j, 0), abs(v), j)
            if best is None or key < best:
                best = key
    else:
        for j in row:
            key = (usage.get(j, 0), 0, j)
            if best is None or key < best:
                best = key
    return best[2]


def _reduce_row(row, pivots, mod):
    row = dict(row)
    if mod is not None:
        while True:
            hits = row.keys() & pivots.keys()
            if not hits:
                return row
            for col in hits:
                piv = pivots.get(col)
                a = row.pop(col, 0)
                if piv is None or not a:
                    if a:
                        row[col] = a
                    continue
                # pivot rows are normalized: piv[col] == 1
                for j, v in piv.items():
                    if j == col:
                        continue
                    w = (row.get(j, 0) - a * v) % mod
                    if w:
                        row[j] = w
                    elif j in row:
                        del row[j]
    while True:
        hits = row.keys() & pivots.keys()
        if not hits:
            return row
        col = min(hits)
        piv = pivots[col]
        a = row[col]
        b = piv[col]
        new = {j: b * v for j, v in row.items()}
        for j, v in piv.items():
            w = new.get(j, 0) - a * v
            if w:
                new[j] = w
            elif j in new:
                del new[j]
        g = 0
        for v in new.values():
            g = gcd(g, v)
        if g > 1:
            new = {j: v // g for j, v in new.items()}
        row = new


def solve_exact(columns, target):
    """Solve sum_i x_i * columns[i] = target exactly over Q.

    columns and target are sparse dicts key -> Fraction over an arbitrary
    (hashable) key space.  Raises ValueError if the system is inconsistent;
    if the solution is not unique, returns one solution (free vars at 0).
    """
    keys = set(target)
    for c in columns:
        keys.update(c)
    keys = sorted(keys)
    m = len(columns)
    # dense augmented rows over the occupied key set; these systems are tiny
    rows = []
    for k in keys:
        row = [Fraction(c.get(k, 0)) for c in columns]
        row.append(Fraction(target.get(k, 0)))
        rows.append(row)

    pivot_of_col = [-1] * m
    rpos = 0
    for col in range(m):
        piv = None
        for i in range(rpos, len(rows)):
            if rows[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        rows[rpos], rows[piv] = rows[piv], rows[rpos]
        pr = rows[rpos]
        inv = pr[col]
        rows[rpos] = pr = [v / inv for v in pr]
        for i in range(len(rows)):
            if i != rpos and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], pr)]
        pivot_of_col[col] = rpos
        rpos += 1

    for i in range(rpos, len(rows)):
        if rows[i][m] != 0:
            raise ValueError("inconsistent linear system")

    x = [Fraction(0)] * m
    for col in range(m):
        if pivot_of_col[col] >= 0:
            x[col] = rows[pivot_of_col[col]][m]
    # verify: inconsistency can hide when free columns interact
    for k in keys:
        acc = Fraction(0)
        for i, c in enumerate(columns):
            if x[i]:
                acc += x[i] * c.get(k, 0)
        if acc != target.get(k, 0):
            raise ValueError("inconsistent linear system")
    return x


def invert_matrix(mat):
    """Exact inverse of a small dense rational matrix (list of lists)."""
    n = len(mat)
    aug = [[Fraction(mat[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [v / inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    return [row[n:] for row in aug]
