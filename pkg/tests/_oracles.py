"""Independent brute-force oracles for the kernel tests.

Everything here is deliberately written against the package's engine grain:
dense matrices instead of sparse rows, forward elimination on the leftmost
column instead of incremental reduced echelon, and a different monomial
order.  The only shared ingredient is exact rational arithmetic.
"""

from fractions import Fraction


def oracle_monomials(truncation):
    # degree, then x-exponent ascending: not the package's order
    out = []
    for d in range(truncation):
        for i in range(d + 1):
            out.append((i, d - i))
    return out


def dense_colength(gens, truncation):
    """dim of jet space / span(monomial multiples of gens), dense elimination.

    ``gens`` is a list of dicts (i, j) -> coefficient.  The caller picks a
    truncation safely above the expected value.
    """
    monos = oracle_monomials(truncation)
    index = {m: k for k, m in enumerate(monos)}
    ncols = len(monos)
    rows = []
    for g in gens:
        g = {e: Fraction(c) for e, c in g.items() if c}
        if not g:
            continue
        for p in range(truncation):
            for q in range(truncation - p):
                row = [Fraction(0)] * ncols
                nonzero = False
                for (i, j), c in g.items():
                    ii, jj = i + p, j + q
                    if ii + jj < truncation:
                        row[index[(ii, jj)]] = c
                        nonzero = True
                if nonzero:
                    rows.append(row)
    rank = 0
    for col in range(ncols):
        pivot = None
        for k in range(rank, len(rows)):
            if rows[k][col] != 0:
                pivot = k
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for k in range(rank + 1, len(rows)):
            if rows[k][col] != 0:
                f = rows[k][col] / pv
                for c2 in range(col, ncols):
                    rows[k][c2] -= f * rows[rank][c2]
        rank += 1
    return ncols - rank


def dense_mono_membership(gens, mono, truncation):
    """Does the monomial lie in the span?  Compares ranks with and without."""
    base = dense_colength(gens, truncation)
    extended = dense_colength(list(gens) + [{mono: Fraction(1)}], truncation)
    return extended == base
