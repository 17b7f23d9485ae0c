"""Second independent canonicalizer for audit use.

Exhausts every signed row arrangement (n! * 2^n of them, vectorized) and
resolves the column side exactly: normalize each column's sign by its first
row, then sort columns lexicographically in the structural order.  Unlike the
package's tie-set search this holds the entire row side in memory at once, so
it is practical up to n = 6 and shares no search logic with the engine.
"""

import itertools

import numpy as np

from zerofree.matrix import IntMatrix

_BIG = 128


def _row_side(n: int):
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    signs = np.array(list(itertools.product((1, -1), repeat=n)), dtype=np.int64)
    p = np.repeat(perms, len(signs), axis=0)
    s = np.tile(signs, (len(perms), 1))
    return p, s


def semi_canonical(m: IntMatrix) -> IntMatrix:
    """Exact canonical form; requires a zerofree matrix with |entries| < 64."""
    n = m.n
    arr = np.array(m.rows(), dtype=np.int64)
    assert not m.has_zero() and m.max_abs() < 64
    perms, signs = _row_side(n)
    g = len(perms)
    # apply every signed row arrangement: images[k, i, j] = s[k,i] * m[p[k,i], j]
    images = arr[perms] * signs[:, :, None]
    # normalize each column so its first entry is positive
    images *= np.sign(images[:, :1, :])
    keys = np.where(images > 0, images, _BIG - images)
    # pack columns most-significant-row-first and sort them
    packed = np.zeros((g, n), dtype=np.int64)
    for i in range(n):
        packed = (packed << 8) | keys[:, i, :]
    packed.sort(axis=1)
    # row-major flattening keys of each candidate
    flat = np.empty((g, n * n), dtype=np.int64)
    for i in range(n):
        flat[:, i * n : (i + 1) * n] = (packed >> (8 * (n - 1 - i))) & 0xFF
    # lexicographic argmin over candidates
    live = np.arange(g)
    for col in range(n * n):
        vals = flat[live, col]
        live = live[vals == vals.min()]
        if len(live) == 1:
            break
    best = flat[live[0]]
    entries = [int(k) if k < _BIG else _BIG - int(k) for k in best]
    return IntMatrix(n, tuple(entries))


def explicit_equivalent(a: IntMatrix, b: IntMatrix) -> bool:
    """Search directly for P, Q with P a Q = b; no canonical forms involved."""
    n = a.n
    if sorted(map(abs, a.entries)) != sorted(map(abs, b.entries)):
        return False
    arr = np.array(a.rows(), dtype=np.int64)
    target_cols = [tuple(int(b[i, j]) for i in range(n)) for j in range(n)]
    perms, signs = _row_side(n)
    images = arr[perms] * signs[:, :, None]
    for k in range(len(images)):
        cols = [tuple(int(x) for x in images[k, :, j]) for j in range(n)]
        pool: dict[tuple, int] = {}
        for col in cols:
            pool[col] = pool.get(col, 0) + 1
        ok = True
        for col in target_cols:
            neg = tuple(-x for x in col)
            if pool.get(col, 0):
                pool[col] -= 1
            elif pool.get(neg, 0):
                pool[neg] -= 1
            else:
                ok = False
                break
        if ok:
            return True
    return False
