"""Exhaustive search engine for unimodular zerofree equivalence classes.

The generator is orderly: matrices are built one row at a time, a partial
matrix survives only while

  * no signed row/column rearrangement of the filled rows gives a
    structurally smaller flattening (prefix canonicality),
  * the gcd of the determinants of its maximal square minors is 1
    (necessary for completion to a unimodular matrix), and
  * when the target inverse-entry bound is finite, every k x k minor
    respects the complementary-minor bound |minor| <= (n-k)! * cap^(n-k)
    that a bounded inverse forces on a unimodular matrix.

A finished matrix is accepted only if it equals its own canonical form, so
every class is emitted exactly once, as its representative, with no global
duplicate set.  Candidate rows are scanned in structural order, which makes
the output stream sorted by flattening and bit-identical across thread
budgets and checkpoint splits.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .canonical import CanonicalClass, minimize_rows
from .matrix import ClassStats, IntMatrix, RegimeError

MAX_SEARCH_DIM = 7
MAX_SEARCH_ALPHA = 64
_MAX_SPACE = 5_000_000  # candidate rows per level; positions beyond this are hopeless anyway

# Narrow packing constants for search matrices (|entry| <= 64).
_BIG = 128
_BASE = 256
_KEY_SHIFT = 8

CHECKPOINT_VERSION = 1

_ENV_THREADS = "ZEROFREE_THREADS"


class TierGateError(ValueError):
    """Long-running query issued without the long-run flag or a node limit."""


class IncompleteSearchError(RuntimeError):
    """A search that must be exhaustive stopped before exploring everything."""


class CheckpointError(ValueError):
    """Checkpoint file is malformed or belongs to a different query."""


def default_thread_budget() -> int:
    try:
        return max(1, int(os.environ.get(_ENV_THREADS, "1")))
    except ValueError:
        return 1


def theoretical_beta_bound(n: int) -> int:
    """Worst-case inverse entry bound (n-1)! * 2^(n-1) for max |entry| = 2."""
    if n < 2:
        raise ValueError("bound is defined for n >= 2")
    if n > 20:
        raise RegimeError("bound overflows the supported integer regime beyond n = 20")
    return factorial(n - 1) * 2 ** (n - 1)


@dataclass(frozen=True)
class ClassQuery:
    """One enumeration request.

    `beta` is either an exact value or an inclusive (low, high) range; ranges
    are how sequence scans ask for every bucket in one pass.
    """

    n: int
    alpha: int
    beta: int | tuple[int, int]
    positive_only: bool = False
    count_only: bool = False
    thread_budget: int | None = None
    node_limit: int | None = None
    long_run: bool = False

    def __post_init__(self):
        if not 1 <= self.n <= MAX_SEARCH_DIM:
            raise RegimeError(f"enumeration supports 1 <= n <= {MAX_SEARCH_DIM}")
        if not 1 <= self.alpha <= MAX_SEARCH_ALPHA:
            raise RegimeError(f"alpha must be within 1..{MAX_SEARCH_ALPHA}")
        lo, hi = self.beta_range
        if lo > hi:
            raise ValueError("empty beta range")
        if self.n > 1 and (self.alpha < 2 or lo < 2):
            raise ValueError("alpha and beta below 2 are vacuous for n > 1")
        if self.thread_budget is not None and self.thread_budget < 1:
            raise ValueError("thread_budget must be positive")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")

    @property
    def beta_range(self) -> tuple[int, int]:
        if isinstance(self.beta, tuple):
            return self.beta
        return (self.beta, self.beta)

    @property
    def tier(self) -> int:
        lo, hi = self.beta_range
        if self.n <= 3:
            return 1
        if self.n == 4:
            if self.alpha <= 2:
                return 2
            if self.alpha == 3 and (lo, hi) == (3, 3):
                return 2
        return 3


@dataclass(frozen=True)
class EnumerationResult:
    query: ClassQuery
    classes: tuple[CanonicalClass, ...]
    total_count: int
    positive_count: int
    nodes_explored: int
    wall_time: float
    complete: bool


@dataclass
class SearchCheckpoint:
    """Resumable frontier of a search: which work units are already done.

    A work unit is one accepted two-row prefix (one-row for n = 2); its
    subtree result is stored verbatim, so resuming replays nothing and the
    merged outcome is bit-identical to an uninterrupted run.
    """

    format_version: int
    query: dict
    total_units: int
    completed: dict[int, dict]
    digest: str = ""

    def payload_digest(self) -> str:
        blob = json.dumps(
            {str(k): self.completed[k] for k in sorted(self.completed)},
            sort_keys=True,
        ).encode()
        return hashlib.sha256(blob).hexdigest()

    def to_json(self) -> str:
        return json.dumps(
            {
                "format_version": self.format_version,
                "query": self.query,
                "total_units": self.total_units,
                "completed": {str(k): v for k, v in sorted(self.completed.items())},
                "digest": self.payload_digest(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "SearchCheckpoint":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"invalid checkpoint JSON: {exc}") from exc
        if raw.get("format_version") != CHECKPOINT_VERSION:
            raise CheckpointError(
                f"unsupported checkpoint version {raw.get('format_version')!r}"
            )
        cp = cls(
            format_version=raw["format_version"],
            query=raw["query"],
            total_units=raw["total_units"],
            completed={int(k): v for k, v in raw["completed"].items()},
            digest=raw.get("digest", ""),
        )
        if cp.digest != cp.payload_digest():
            raise CheckpointError("checkpoint digest mismatch (file corrupted?)")
        return cp


def save_checkpoint(path: str, cp: SearchCheckpoint) -> None:
    """Atomic write: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(prefix=".ckpt-", dir=directory)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(cp.to_json())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_checkpoint(path: str) -> SearchCheckpoint:
    with open(path) as fh:
        return SearchCheckpoint.from_json(fh.read())


# --------------------------------------------------------------------------
# candidate-row spaces and minor bookkeeping


def _entry_keys(arr: np.ndarray) -> np.ndarray:
    return np.where(arr > 0, arr, np.where(arr == 0, 0, _BIG - arr))


@lru_cache(maxsize=32)
def _space(n: int, alpha: int, zeros_allowed: bool, positive_only: bool):
    """All candidate rows for one search, sorted in structural order."""
    values = list(range(1, alpha + 1))
    if zeros_allowed:
        values = [0] + values
    if not positive_only:
        values += [-v for v in range(1, alpha + 1)]
    if len(values) ** n > _MAX_SPACE:
        raise RegimeError(
            f"candidate space {len(values)}^{n} is too large to enumerate"
        )
    if factorial(n) * alpha**n > 2**62:
        raise RegimeError("determinant bound would overflow 64-bit arithmetic")
    rows = np.array(list(itertools.product(values, repeat=n)), dtype=np.int64)
    keys = _entry_keys(rows)
    powers = _BASE ** np.arange(n - 1, -1, -1, dtype=np.int64)
    packed = keys @ powers
    rowmin = np.sort(np.abs(rows), axis=1) @ powers
    order = np.argsort(packed, kind="stable")
    rows, keys, packed, rowmin = rows[order], keys[order], packed[order], rowmin[order]
    row_tuples = [tuple(int(x) for x in r) for r in rows]
    first_rows = np.flatnonzero(packed == rowmin)
    return rows, keys, packed, rowmin, row_tuples, first_rows


@lru_cache(maxsize=64)
def _ext_table(n: int, k: int):
    """Laplace data to grow k-column minors into (k+1)-column minors."""
    parents = {T: i for i, T in enumerate(itertools.combinations(range(n), k))}
    cols, tpos, pidx, sgn = [], [], [], []
    t = -1
    for t, T in enumerate(itertools.combinations(range(n), k + 1)):
        for j, c in enumerate(T):
            cols.append(c)
            tpos.append(t)
            pidx.append(parents[T[:j] + T[j + 1 :]])
            sgn.append(-1 if (k + j) % 2 else 1)
    return (
        np.array(cols),
        np.array(tpos),
        np.array(pidx),
        np.array(sgn, dtype=np.int64),
        t + 1,
    )


def _grow_minors(n: int, k: int, minors: np.ndarray, rows_arr: np.ndarray) -> np.ndarray:
    """Minors of all (k+1)-column subsets for every candidate next row.

    Laplace expansion along the appended row: each (k+1)-column minor is a
    signed combination of the parent k-column minors.
    """
    cols, tpos, pidx, sgn, s_next = _ext_table(n, k)
    w = np.zeros((n, s_next), dtype=np.int64)
    w[cols, tpos] = sgn * minors[pidx]
    return rows_arr @ w


def _prefix_minors(rows: list[tuple[int, ...]], n: int) -> np.ndarray:
    k = len(rows)
    arr = np.array(rows, dtype=np.int64)
    minors = arr[0]
    for d in range(1, k):
        minors = _grow_minors(n, d, minors, arr[d : d + 1])[0]
    return minors


def _jacobi_cap(n: int, depth: int, alpha: int, beta_cap: int | None) -> int | None:
    """Bound on depth x depth minors implied by a capped inverse, if useful."""
    if beta_cap is None or depth >= n:
        return None
    bound = factorial(n - depth) * beta_cap ** (n - depth)
    natural = factorial(depth) * alpha**depth
    return bound if bound < natural else None


@lru_cache(maxsize=64)
def _grow_table_py(n: int, k: int, first_row: bool):
    """Laplace terms growing k-column minors by one row, as Python lists.

    first_row expands along a prepended row (sign (-1)^j), otherwise along an
    appended row (sign (-1)^(k+j)).
    """
    parents = {T: i for i, T in enumerate(itertools.combinations(range(n), k))}
    out = []
    for T in itertools.combinations(range(n), k + 1):
        terms = []
        for j, c in enumerate(T):
            exp = j if first_row else k + j
            terms.append((c, parents[T[:j] + T[j + 1 :]], -1 if exp % 2 else 1))
        out.append(terms)
    return out


@lru_cache(maxsize=16)
def _cofactor_tables(n: int):
    """Terms assembling cofactor(i, j) from top-block and bottom-block minors.

    Deleting row i and column j splits the remaining rows into the block
    above row i and the block below it; a generalized Laplace expansion by
    the top block expresses the cofactor through i-column minors of the top
    and (n-1-i)-column minors of the bottom.
    """
    comb_index = {
        size: {T: t for t, T in enumerate(itertools.combinations(range(n), size))}
        for size in range(n)
    }
    tables = []
    for i in range(n):
        per_j = []
        for j in range(n):
            cols = [c for c in range(n) if c != j]
            pos = {c: p for p, c in enumerate(cols)}
            terms = []
            for s_cols in itertools.combinations(cols, i):
                s_set = set(s_cols)
                comp = tuple(c for c in cols if c not in s_set)
                sigma = sum(pos[c] for c in s_cols) + i * (i - 1) // 2 + i + j
                terms.append(
                    (
                        -1 if sigma % 2 else 1,
                        comb_index[i][s_cols],
                        comb_index[n - 1 - i][comp],
                    )
                )
            per_j.append(terms)
        tables.append(per_j)
    return tables


def _inverse_entries(rows, n: int, det: int) -> tuple[int, ...]:
    """Exact inverse of a unimodular matrix given as row tuples, flattened.

    Pure integer arithmetic sized for the search loop: O(n 2^n) products via
    cached Laplace tables instead of repeated recursive expansions.
    """
    if n == 1:
        return (det,)
    tops = [[1]]
    cur = [1]
    for i in range(n - 1):
        table = _grow_table_py(n, i, False)
        row = rows[i]
        cur = [sum(sign * row[c] * cur[p] for c, p, sign in terms) for terms in table]
        tops.append(cur)
    bots = [None] * n
    bots[n - 1] = [1]
    cur = [1]
    for i in range(n - 2, -1, -1):
        table = _grow_table_py(n, n - 2 - i, True)
        row = rows[i + 1]
        cur = [sum(sign * row[c] * cur[p] for c, p, sign in terms) for terms in table]
        bots[i] = cur
    cof = _cofactor_tables(n)
    inv = [0] * (n * n)
    for i in range(n):
        tops_i = tops[i]
        bots_i = bots[i]
        cof_i = cof[i]
        for j in range(n):
            acc = 0
            for sign, t_idx, b_idx in cof_i[j]:
                acc += sign * tops_i[t_idx] * bots_i[b_idx]
            inv[j * n + i] = acc * det
    return tuple(inv)


# --------------------------------------------------------------------------
# the depth-first generator


@dataclass
class _SearchParams:
    n: int
    alpha: int
    beta_cap: int | None
    zeros_allowed: bool
    positive_only: bool
    require_zerofree: bool

    def space_key(self):
        return (self.n, self.alpha, self.zeros_allowed, self.positive_only)


class _NodeBudget(Exception):
    pass


def _key_row(row) -> tuple[int, ...]:
    return tuple(x if x > 0 else (0 if x == 0 else _BIG - x) for x in row)


class _Generator:
    def __init__(self, params: _SearchParams):
        self.p = params
        self.n = params.n
        (
            self.rows_arr,
            self.keys_arr,
            self.packed,
            self.rowmin,
            self.row_tuples,
            self.first_rows,
        ) = _space(*params.space_key())
        self.nodes = 0
        self.budget: int | None = None
        self.found: dict[tuple[int, int], list] = {}

    def _spend(self):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise _NodeBudget

    def _candidates(self, depth: int, minors: np.ndarray, base_mask, profs, prev_packed: int):
        """Vectorized filters; returns (indices, minors per candidate).

        Rows of a canonical matrix are structurally nondecreasing (swapping
        two adjacent rows is a group move), so the scan starts at the first
        candidate whose packed key reaches the previous row's.
        """
        n = self.n
        start = int(np.searchsorted(self.packed, prev_packed, side="left"))
        if start == len(self.packed):
            return np.empty(0, dtype=np.int64), None
        mask = base_mask[start:].copy()
        for c in range(n - 1):
            if profs[c] == profs[c + 1]:
                mask &= self.keys_arr[start:, c] <= self.keys_arr[start:, c + 1]
        idx = np.flatnonzero(mask)
        if len(idx) == 0:
            return idx, None
        idx += start
        grown = _grow_minors(n, depth, minors, self.rows_arr[idx])
        absg = np.abs(grown)
        if depth + 1 == n:
            keep = absg[:, 0] == 1
        else:
            keep = np.gcd.reduce(absg, axis=1) == 1
            cap = _jacobi_cap(n, depth + 1, self.p.alpha, self.p.beta_cap)
            if cap is not None:
                keep &= absg.max(axis=1) <= cap
            if depth + 1 == n - 1 and self.p.require_zerofree:
                # these minors are the last inverse column, up to signs
                keep &= absg.min(axis=1) > 0
        return idx[keep], grown[keep]

    def _accept(self, rows, krows, det: int):
        n = self.n
        inv = _inverse_entries(rows, n, det)
        if self.p.require_zerofree and 0 in inv:
            return
        beta = max(abs(x) for x in inv)
        if self.p.beta_cap is not None and beta > self.p.beta_cap:
            return
        if minimize_rows(rows, n, _BIG, _BASE, target=krows) is None:
            return
        entries = tuple(itertools.chain.from_iterable(rows))
        alpha = max(abs(x) for x in entries)
        positive = all(x > 0 for x in entries)
        self.found.setdefault((alpha, beta), []).append((entries, positive, det))

    def _accept_batch(self, rows, krows, idx, dets):
        """Final-depth acceptance for a whole candidate batch.

        Every candidate shares the same first n-1 rows, so the inverse of
        each completion is assembled for all of them at once: bottom-block
        minor ladders are matmuls against the batch, top-block ladders come
        from the shared prefix.
        """
        n = self.n
        m = len(idx)
        cand = self.rows_arr[idx]
        # tops[i]: i-column minors of the shared rows[0..i-1] (plain ints)
        tops = [[1]]
        cur = [1]
        for i in range(n - 1):
            table = _grow_table_py(n, i, False)
            row = rows[i]
            cur = [
                sum(sign * row[c] * cur[p] for c, p, sign in terms) for terms in table
            ]
            tops.append(cur)
        # bots[i]: (n-1-i)-column minors of rows[i+1..n-1] per candidate
        bots: dict[int, np.ndarray] = {n - 2: cand}
        cur_arr = cand
        for i in range(n - 3, -1, -1):
            table = _grow_table_py(n, n - 2 - i, True)
            row = rows[i + 1]
            v = np.zeros((cur_arr.shape[1], len(table)), dtype=np.int64)
            for t, terms in enumerate(table):
                for c, p, sign in terms:
                    v[p, t] = sign * row[c]
            cur_arr = cur_arr @ v
            bots[i] = cur_arr
        cof = _cofactor_tables(n)
        inv = np.empty((m, n * n), dtype=np.int64)
        for i in range(n - 1):
            assemble = np.zeros((bots[i].shape[1], n), dtype=np.int64)
            tops_i = tops[i]
            for j, terms in enumerate(cof[i]):
                for sign, t_idx, b_idx in terms:
                    assemble[b_idx, j] += sign * tops_i[t_idx]
            inv[:, i::n] = bots[i] @ assemble
        # bottom block for i = n-1 is empty: cofactors are shared prefix minors
        last = np.empty(n, dtype=np.int64)
        tops_last = tops[n - 1]
        for j, terms in enumerate(cof[n - 1]):
            acc = 0
            for sign, t_idx, b_idx in terms:
                acc += sign * tops_last[t_idx]
            last[j] = acc
        inv[:, n - 1 :: n] = last
        inv *= dets[:, None]
        absinv = np.abs(inv)
        keep = np.ones(m, dtype=bool)
        if self.p.require_zerofree:
            keep &= absinv.min(axis=1) > 0
        betas = absinv.max(axis=1)
        if self.p.beta_cap is not None:
            keep &= betas <= self.p.beta_cap
        for pos in np.flatnonzero(keep):
            i = int(idx[pos])
            row = self.row_tuples[i]
            new_rows = rows + [row]
            if (
                minimize_rows(new_rows, n, _BIG, _BASE, target=krows + [_key_row(row)])
                is None
            ):
                continue
            entries = tuple(itertools.chain.from_iterable(new_rows))
            alpha = max(abs(x) for x in entries)
            positive = all(x > 0 for x in entries)
            self.found.setdefault((alpha, int(betas[pos])), []).append(
                (entries, positive, int(dets[pos]))
            )

    def _descend(self, rows, krows, minors, profs, base_mask, prev_packed, depth: int, stop_depth: int, sink):
        idx, grown = self._candidates(depth, minors, base_mask, profs, prev_packed)
        n = self.n
        if depth + 1 == n:
            if len(idx):
                self.nodes += len(idx)
                if self.budget is not None and self.nodes > self.budget:
                    raise _NodeBudget
                self._accept_batch(rows, krows, idx, grown[:, 0])
            return
        for pos in range(len(idx)):
            i = int(idx[pos])
            krow = _key_row(self.row_tuples[i])
            new_rows = rows + [self.row_tuples[i]]
            new_krows = krows + [krow]
            self._spend()
            if minimize_rows(new_rows, n, _BIG, _BASE, target=new_krows) is None:
                continue
            new_profs = tuple(
                (profs[c] << _KEY_SHIFT) | krow[c] for c in range(n)
            )
            if depth + 1 == stop_depth:
                sink((new_rows, grown[pos]))
            else:
                self._descend(
                    new_rows,
                    new_krows,
                    grown[pos],
                    new_profs,
                    base_mask,
                    int(self.packed[i]),
                    depth + 1,
                    stop_depth,
                    sink,
                )

    def run_prefixes(self, stop_depth: int):
        """Stage 1: every accepted prefix of `stop_depth` rows, in order."""
        out = []
        for i in self.first_rows:
            i = int(i)
            row = self.row_tuples[i]
            minors = self.rows_arr[i]
            if self.n == 1:
                if abs(int(minors[0])) == 1:
                    self._spend()
                    self._accept([row], [_key_row(row)], int(minors[0]))
                continue
            if np.gcd.reduce(np.abs(minors)) != 1:
                continue
            cap = _jacobi_cap(self.n, 1, self.p.alpha, self.p.beta_cap)
            if cap is not None and np.abs(minors).max() > cap:
                continue
            self._spend()
            krow = _key_row(row)
            if stop_depth == 1:
                out.append(([row], minors))
            else:
                packed = int(self.packed[i])
                base_mask = self.rowmin >= packed
                self._descend(
                    [row], [krow], minors, krow, base_mask, packed, 1, stop_depth, out.append
                )
        return out

    def run_subtree(self, rows, minors):
        """Finish the search below one stored prefix."""
        n = self.n
        krows = [_key_row(r) for r in rows]
        profs = [0] * n
        for kr in krows:
            for c in range(n):
                profs[c] = (profs[c] << _KEY_SHIFT) | kr[c]
        packs = []
        for kr in krows:
            p = 0
            for k in kr:
                p = (p << _KEY_SHIFT) | k
            packs.append(p)
        base_mask = self.rowmin >= packs[0]
        self._descend(
            rows, krows, minors, tuple(profs), base_mask, packs[-1], len(rows), n + 1, None
        )


# --------------------------------------------------------------------------
# work units, checkpoints, merging


def _params_dict(p: _SearchParams) -> dict:
    return {
        "n": p.n,
        "alpha": p.alpha,
        "beta_cap": p.beta_cap,
        "zeros_allowed": p.zeros_allowed,
        "positive_only": p.positive_only,
        "require_zerofree": p.require_zerofree,
    }


def _unit_worker(args):
    params_dict, index, rows = args
    params = _SearchParams(**params_dict)
    gen = _Generator(params)
    rows = [tuple(r) for r in rows]
    gen.run_subtree(rows, _prefix_minors(rows, params.n))
    found = {
        f"{a},{b}": [[list(e), pos, det] for e, pos, det in hits]
        for (a, b), hits in gen.found.items()
    }
    return index, {"nodes": gen.nodes, "found": found}


@dataclass
class _RawResult:
    buckets: dict[tuple[int, int], list]
    nodes: int
    complete: bool
    units_total: int
    units_done: int


def _merge_units(unit_payloads) -> dict[tuple[int, int], list]:
    buckets: dict[tuple[int, int], list] = {}
    for payload in unit_payloads:
        for key, hits in payload["found"].items():
            a, b = (int(x) for x in key.split(","))
            dest = buckets.setdefault((a, b), [])
            for entries, positive, det in hits:
                dest.append((tuple(entries), bool(positive), int(det)))
    return buckets


def _run_search(
    params: _SearchParams,
    *,
    thread_budget: int = 1,
    node_limit: int | None = None,
    checkpoint_path: str | None = None,
    resume: bool = False,
    stop_after_units: int | None = None,
) -> _RawResult:
    gen = _Generator(params)
    gen.budget = node_limit
    unit_depth = min(2, params.n - 1) if params.n > 1 else 1
    try:
        prefixes = gen.run_prefixes(unit_depth)
    except _NodeBudget:
        return _RawResult({}, gen.nodes, False, 0, 0)
    if params.n == 1:
        return _RawResult(dict(gen.found), gen.nodes, True, 0, 0)
    stage_nodes = gen.nodes

    completed: dict[int, dict] = {}
    if resume:
        if checkpoint_path is None:
            raise CheckpointError("resume requested without a checkpoint file")
        cp = load_checkpoint(checkpoint_path)
        if cp.query != _params_dict(params):
            raise CheckpointError("checkpoint belongs to a different query")
        if cp.total_units != len(prefixes):
            raise CheckpointError("checkpoint unit count disagrees with this search")
        completed = dict(cp.completed)

    def write_checkpoint():
        if checkpoint_path is not None:
            save_checkpoint(
                checkpoint_path,
                SearchCheckpoint(
                    CHECKPOINT_VERSION, _params_dict(params), len(prefixes), completed
                ),
            )

    pending = [i for i in range(len(prefixes)) if i not in completed]
    params_dict = _params_dict(params)
    complete = True
    done_this_run = 0

    def budget_left() -> int | None:
        if node_limit is None:
            return None
        used = stage_nodes + sum(p["nodes"] for p in completed.values())
        return node_limit - used

    if thread_budget <= 1:
        for index in pending:
            left = budget_left()
            if left is not None and left <= 0:
                complete = False
                break
            if stop_after_units is not None and done_this_run >= stop_after_units:
                complete = False
                break
            rows, minors = prefixes[index]
            sub = _Generator(params)
            sub.budget = left
            try:
                sub.run_subtree(rows, minors)
            except _NodeBudget:
                complete = False
                break
            completed[index] = _unit_payload(sub)
            done_this_run += 1
            write_checkpoint()
    else:
        with ProcessPoolExecutor(max_workers=thread_budget) as pool:
            batch = pending
            if stop_after_units is not None:
                batch = pending[:stop_after_units]
                if len(batch) < len(pending):
                    complete = False
            futures = [
                pool.submit(_unit_worker, (params_dict, i, prefixes[i][0]))
                for i in batch
            ]
            for fut in futures:
                index, payload = fut.result()
                completed[index] = payload
                done_this_run += 1
                write_checkpoint()
                left = budget_left()
                if left is not None and left <= 0:
                    complete = False
                    for other in futures:
                        other.cancel()
                    break

    if complete and len(completed) != len(prefixes):
        complete = False
    nodes = stage_nodes + sum(p["nodes"] for p in completed.values())
    buckets = _merge_units(completed[i] for i in sorted(completed))
    return _RawResult(buckets, nodes, complete, len(prefixes), len(completed))


def _unit_payload(gen: _Generator) -> dict:
    return {
        "nodes": gen.nodes,
        "found": {
            f"{a},{b}": [[list(e), pos, det] for e, pos, det in hits]
            for (a, b), hits in gen.found.items()
        },
    }


# --------------------------------------------------------------------------
# public operations


def _gate(query: ClassQuery) -> None:
    if query.tier >= 3 and not query.long_run and query.node_limit is None:
        raise TierGateError(
            f"query {query.n=} {query.alpha=} {query.beta=} is long-running; "
            "set long_run=True (--long-run) or provide a node_limit"
        )


def _classes_from_bucket(n: int, hits) -> list[CanonicalClass]:
    out = []
    for (a, b), entries, positive, det in hits:
        rep = IntMatrix(n, entries)
        out.append(CanonicalClass(rep, ClassStats(a, b, det, positive)))
    return out


def _select(buckets, alpha: int, beta_lo: int, beta_hi: int):
    hits = []
    for (a, b), items in buckets.items():
        if a == alpha and beta_lo <= b <= beta_hi:
            for entries, positive, det in items:
                hits.append(((a, b), entries, positive, det))
    hits.sort(key=lambda h: tuple(x if x > 0 else _BIG - x for x in h[1]))
    return hits


def enumerate_classes(
    q: ClassQuery,
    *,
    checkpoint_path: str | None = None,
    resume: bool = False,
    _stop_after_units: int | None = None,
) -> EnumerationResult:
    """All equivalence classes whose attained (alpha, beta) match the query.

    The engine enumerates with entries bounded by q.alpha and buckets by the
    attained maxima afterwards, so a range query costs one search.  Matrices
    are returned as canonical representatives in ascending structural order
    of their flattenings.
    """
    _gate(q)
    start = time.perf_counter()
    lo, hi = q.beta_range
    params = _SearchParams(
        n=q.n,
        alpha=q.alpha,
        beta_cap=hi,
        zeros_allowed=False,
        positive_only=q.positive_only,
        require_zerofree=True,
    )
    raw = _run_search(
        params,
        thread_budget=q.thread_budget or default_thread_budget(),
        node_limit=q.node_limit,
        checkpoint_path=checkpoint_path,
        resume=resume,
        stop_after_units=_stop_after_units,
    )
    hits = _select(raw.buckets, q.alpha, lo, hi)
    positive_count = sum(1 for h in hits if h[2])
    classes = () if q.count_only else tuple(_classes_from_bucket(q.n, hits))
    return EnumerationResult(
        query=q,
        classes=classes,
        total_count=len(hits),
        positive_count=positive_count,
        nodes_explored=raw.nodes,
        wall_time=time.perf_counter() - start,
        complete=raw.complete,
    )


def sequence_scan(
    n: int,
    alpha: int,
    beta_range: tuple[int, int],
    *,
    positive_only: bool = False,
    thread_budget: int | None = None,
    node_limit: int | None = None,
    long_run: bool = False,
) -> list[tuple[int, int, int]]:
    """(beta, class count, positive count) for every beta in the range.

    Zero counts are reported as rows too; the whole scan is one enumeration.
    """
    q = ClassQuery(
        n=n,
        alpha=alpha,
        beta=(beta_range[0], beta_range[1]),
        positive_only=positive_only,
        count_only=False,
        thread_budget=thread_budget,
        node_limit=node_limit,
        long_run=long_run,
    )
    _gate(q)
    params = _SearchParams(
        n=n,
        alpha=alpha,
        beta_cap=beta_range[1],
        zeros_allowed=False,
        positive_only=positive_only,
        require_zerofree=True,
    )
    raw = _run_search(
        params,
        thread_budget=q.thread_budget or default_thread_budget(),
        node_limit=node_limit,
    )
    if not raw.complete:
        raise IncompleteSearchError("scan hit its node limit; counts would be wrong")
    rows = []
    for beta in range(beta_range[0], beta_range[1] + 1):
        items = raw.buckets.get((alpha, beta), [])
        rows.append((beta, len(items), sum(1 for _, pos, _ in items if pos)))
    return rows


@dataclass(frozen=True)
class MaxBetaResult:
    n: int
    alpha: int
    mode: str
    beta_max: int
    witness: IntMatrix
    certified: bool
    nodes_explored: int


def max_beta_search(
    n: int,
    alpha: int,
    mode: str = "zerofree",
    *,
    best_effort: bool = False,
    node_limit: int | None = None,
    thread_budget: int | None = None,
) -> MaxBetaResult:
    """Largest inverse-entry magnitude over matrices with max |entry| = alpha.

    zerofree mode ranges over unimodular zerofree matrices; unrestricted mode
    ranges over all unimodular matrices (zero entries permitted in both the
    matrix and its inverse).  For n <= 5 the search is exhaustive and the
    result certified; larger n requires best_effort=True plus a node limit,
    and the answer is then only a lower bound.
    """
    if mode not in ("zerofree", "unrestricted"):
        raise ValueError("mode must be 'zerofree' or 'unrestricted'")
    if n > 5:
        if not best_effort:
            raise TierGateError(
                "exhaustive certification is limited to n <= 5; "
                "pass best_effort=True for a lower-bound search"
            )
        if node_limit is None:
            raise TierGateError("best-effort search requires a node_limit")
    params = _SearchParams(
        n=n,
        alpha=alpha,
        beta_cap=None,
        zeros_allowed=(mode == "unrestricted"),
        positive_only=False,
        require_zerofree=(mode == "zerofree"),
    )
    raw = _run_search(
        params,
        thread_budget=thread_budget or default_thread_budget(),
        node_limit=node_limit,
    )
    best = None
    for (a, b), items in sorted(raw.buckets.items()):
        if a != alpha:
            continue
        for entries, _, _ in items:
            if best is None or b > best[0]:
                best = (b, entries)
    if best is None:
        raise ValueError(f"no unimodular matrix attains max |entry| = {alpha} for n = {n}")
    certified = raw.complete and n <= 5
    if not raw.complete and not best_effort:
        raise IncompleteSearchError("search stopped early; rerun with a larger budget")
    return MaxBetaResult(
        n=n,
        alpha=alpha,
        mode=mode,
        beta_max=best[0],
        witness=IntMatrix(n, best[1]),
        certified=certified,
        nodes_explored=raw.nodes,
    )


_CONJECTURES = {
    1: (3, 2, (2, 4)),
    2: (4, 2, (3, 3)),
    3: (5, 2, (2, 2)),
}


@dataclass(frozen=True)
class ConjectureReport:
    conjecture_id: int
    cases: tuple[tuple[int, int, int, int], ...]  # (n, alpha, beta, count)
    nodes_explored: int
    complete: bool
    confirmed: bool


def verify_conjecture(conjecture_id: int, *, thread_budget: int | None = None) -> ConjectureReport:
    """Exhaustively confirm one of the three emptiness statements.

    1: no 3x3 classes with alpha = 2 and beta in 2..4
    2: no 4x4 classes with alpha = 2 and beta = 3
    3: no 5x5 classes with alpha = beta = 2

    Raises IncompleteSearchError rather than ever reporting a truncated
    search as confirmed.
    """
    if conjecture_id not in _CONJECTURES:
        raise ValueError(
            "conjecture id must be 1, 2 or 3 (the 6x6 alpha=beta=3 statement "
            "is reachable through a long-run enumeration instead)"
        )
    n, alpha, (lo, hi) = _CONJECTURES[conjecture_id]
    params = _SearchParams(
        n=n,
        alpha=alpha,
        beta_cap=hi,
        zeros_allowed=False,
        positive_only=False,
        require_zerofree=True,
    )
    raw = _run_search(params, thread_budget=thread_budget or default_thread_budget())
    if not raw.complete:
        raise IncompleteSearchError("conjecture search did not run to completion")
    cases = []
    for beta in range(lo, hi + 1):
        count = len(raw.buckets.get((alpha, beta), []))
        cases.append((n, alpha, beta, count))
    confirmed = all(c[3] == 0 for c in cases)
    return ConjectureReport(
        conjecture_id=conjecture_id,
        cases=tuple(cases),
        nodes_explored=raw.nodes,
        complete=True,
        confirmed=confirmed,
    )
