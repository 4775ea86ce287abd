import logging
import math
from collections import deque

import numpy as np

from .. import config
from ..errors import ConstructionError
from .binary_code import NestedCodeChain
from .matrix import SparseBinaryMatrix

logger = logging.getLogger('PEG')


class EdgeGrower:
    """
    Progressive edge growth over a bipartite symbol/check graph

    Checks are grown level by level: a level owns the row window
    [lo, hi) and only checks in that window receive its edges, while graph
    distances are always measured on the whole graph built so far.
    """

    def __init__(self, n, r, rng):
        self.n = n
        self.r = r
        self.rng = rng
        self.sym_adj = [[] for _ in range(n)]
        self.chk_adj = [[] for _ in range(r)]
        self.chk_degrees = np.zeros(r, dtype=np.int64)
        self.capacity_fallbacks = 0
        self.swaps = 0

    def grow_edge(self, sym, chk):
        self.sym_adj[sym].append(chk)
        self.chk_adj[chk].append(sym)
        self.chk_degrees[chk] += 1

    def check_distances(self, sym):
        """BFS depth of every check from `sym`; unreached checks are at infinity"""
        dist = np.full(self.r, np.inf)
        seen = np.zeros(self.n, dtype=bool)
        seen[sym] = True
        frontier = [sym]
        depth = 0
        while frontier:
            reached = []
            for s in frontier:
                for c in self.sym_adj[s]:
                    if dist[c] == np.inf:
                        dist[c] = depth
                        reached.append(c)
            frontier = []
            for c in reached:
                for s in self.chk_adj[c]:
                    if not seen[s]:
                        seen[s] = True
                        frontier.append(s)
            depth += 1
        return dist

    def pick_check(self, sym, lo, hi, cap):
        window = np.arange(lo, hi)
        adjacent = np.zeros(self.r, dtype=bool)
        adjacent[self.sym_adj[sym]] = True
        free = window[~adjacent[lo:hi]]
        candidates = free[self.chk_degrees[free] < cap]
        if len(candidates) == 0:
            # every non-adjacent check is full; overfill the emptiest one
            self.capacity_fallbacks += 1
            return int(free[np.argmin(self.chk_degrees[free])])
        dist = self.check_distances(sym)[candidates]
        # lexsort: last key is primary (farthest first, then lowest degree, then lowest index)
        order = np.lexsort((candidates, self.chk_degrees[candidates], -dist))
        return int(candidates[order[0]])

    def grow_level(self, lo, hi, edges_per_symbol, cap):
        for sym in self.rng.permutation(self.n):
            for _ in range(edges_per_symbol):
                self.grow_edge(int(sym), self.pick_check(int(sym), lo, hi, cap))

    def to_matrix(self):
        return SparseBinaryMatrix.from_rows(self.n, self.chk_adj)

    def _move(self, sym, old, new):
        self.sym_adj[sym].remove(old)
        self.chk_adj[old].remove(sym)
        self.sym_adj[sym].append(new)
        self.chk_adj[new].append(sym)

    def four_cycle(self):
        """The four edges (sym, chk) of some 4-cycle, or None"""
        for chk in range(self.r):
            first_sym = {}
            for sym in self.chk_adj[chk]:
                for other in self.sym_adj[sym]:
                    if other == chk:
                        continue
                    if other in first_sym:
                        first = first_sym[other]
                        return (first, chk), (first, other), (sym, chk), (sym, other)
                    first_sym[other] = sym
        return None

    def _closes_four_cycle(self, sym, chk):
        # (sym, chk) is already an edge, so a shared check besides chk closes a cycle
        mine = set(self.sym_adj[sym])
        return any(other != sym and len(mine.intersection(self.sym_adj[other])) > 1
                   for other in self.chk_adj[chk])

    def _swap_away(self, sym, chk, windows):
        """
        Trade edge (sym, chk) with an edge (other_sym, other_chk) of the same
        level window, giving (sym, other_chk) and (other_sym, chk); both row
        and column degrees are unchanged
        """
        lo, hi = next(w for w in windows if w[0] <= chk < w[1])
        for other_chk in self.rng.permutation(np.arange(lo, hi)).tolist():
            if other_chk == chk or other_chk in self.sym_adj[sym]:
                continue
            for other_sym in self.rng.permutation(self.chk_adj[other_chk]).tolist():
                if chk in self.sym_adj[other_sym]:
                    continue
                self._move(sym, chk, other_chk)
                self._move(other_sym, other_chk, chk)
                if not (self._closes_four_cycle(sym, other_chk) or self._closes_four_cycle(other_sym, chk)):
                    self.swaps += 1
                    return True
                self._move(other_sym, chk, other_chk)
                self._move(sym, other_chk, chk)
        return False

    def break_four_cycles(self, windows):
        """
        Remove 4-cycles by degree-preserving edge swaps

        Every swap deletes at least one 4-cycle and creates none, so the
        loop ends; returns False when some cycle admits no valid swap.
        """
        while True:
            cycle = self.four_cycle()
            if cycle is None:
                return True
            if not any(self._swap_away(sym, chk, windows) for sym, chk in cycle):
                return False


def has_four_cycle(m):
    """True iff two rows of m share at least two columns"""
    if m.rows < 2:
        return False
    csr = m.to_csr().astype(np.int64)
    overlap = (csr @ csr.T).tolil()
    overlap.setdiag(0)
    overlap = overlap.tocsr()
    return overlap.nnz > 0 and overlap.max() >= 2


def girth(m):
    """
    Length of the shortest cycle in the Tanner graph of m

    Returns:
        even int, or math.inf when the graph is a forest
    """
    n = m.cols
    adj = [[] for _ in range(n + m.rows)]
    for j, support in enumerate(m.row_support):
        for c in support:
            adj[c].append(n + j)
            adj[n + j].append(c)

    best = math.inf
    for start in range(n):
        dist = {start: 0}
        parent = {start: -1}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif v != parent[u]:
                    best = min(best, dist[u] + dist[v] + 1)
        if best == 4:
            return 4
    return best


def _needs_girth_six(n, r, symbol_degree):
    return n >= 2 * r and symbol_degree >= 2 and n * math.comb(symbol_degree, 2) <= math.comb(r, 2)


def _balanced(matrix, windows):
    degrees = matrix.row_degrees()
    for lo, hi in windows:
        if hi > lo and degrees[lo:hi].max() - degrees[lo:hi].min() > 1:
            return False
    return True


def _grow(n, r_total, levels, seed, girth_six):
    """
    Run the grower with retries until rows are balanced and, if requested, 4-cycle free

    levels is a list of (lo, hi, edges_per_symbol, cap).
    """
    windows = [(lo, hi) for lo, hi, _, _ in levels]
    best = None
    for attempt in range(config.PEG_MAX_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        grower = EdgeGrower(n, r_total, rng)
        for lo, hi, edges, cap in levels:
            grower.grow_level(lo, hi, edges, cap)
        if girth_six and not grower.break_four_cycles(windows):
            logger.warning(f"PEG attempt {attempt + 1}: a 4-cycle admits no degree-preserving swap")
        elif grower.swaps:
            logger.info(f"PEG attempt {attempt + 1}: removed 4-cycles with {grower.swaps} edge swaps")
        matrix = grower.to_matrix()

        balanced = _balanced(matrix, windows)
        cycle_free = not girth_six or not has_four_cycle(matrix)
        if balanced and cycle_free:
            logger.info(f"PEG accepted attempt {attempt + 1} for n={n}, r={r_total}")
            return matrix
        logger.warning(
            f"PEG attempt {attempt + 1} rejected (balanced={balanced}, four_cycle_free={cycle_free}, "
            f"capacity fallbacks={grower.capacity_fallbacks})")
        if best is None or (cycle_free and balanced >= best[1]):
            best = (matrix, balanced)

    logger.warning(f"PEG gave up after {config.PEG_MAX_ATTEMPTS} attempts; returning the best graph found")
    return best[0]


def peg_construct(n, r, symbol_degree, seed):
    """
    Single-level PEG parity matrix with constant column weight

    Args:
        n: number of symbol nodes (columns)
        r: number of check nodes (rows)
        symbol_degree: ones per column
        seed: integer seed; the same seed always yields the same matrix

    Returns:
        SparseBinaryMatrix of shape r x n

    Raises:
        ConstructionError: unless 1 <= symbol_degree <= r <= n
    """
    if not 1 <= symbol_degree <= r:
        raise ConstructionError(f"Symbol degree {symbol_degree} infeasible with {r} check nodes")
    if r > n:
        raise ConstructionError(f"More check nodes ({r}) than symbol nodes ({n})")
    cap = -(-n * symbol_degree // r)
    girth_six = _needs_girth_six(n, r, symbol_degree)
    logger.info(f"Building PEG graph n={n}, r={r}, d_s={symbol_degree}, row cap {cap}, girth-6 target {girth_six}")
    return _grow(n, r, [(0, r, symbol_degree, cap)], seed, girth_six)


def epeg_construct(a, n, r_levels, degree_profile, seed):
    """
    Nested chain from one shared basis grown level by level

    Level l appends rows r_{l-1}..r_l - 1 and gives every symbol node
    d_s^l - d_s^(l-1) new edges into them, so the prefix of r_l rows has
    column weight d_s^l and the chain is nested by construction.

    Raises:
        ConstructionError: on malformed r_levels or when n * (new edges per
            symbol) != (new rows) * d_c for some level
    """
    r_levels = tuple(int(r) for r in r_levels)
    if len(r_levels) != a + 1:
        raise ConstructionError(f"Expected {a + 1} row counts for a={a}, got {list(r_levels)}")
    if any(b <= c for c, b in zip(r_levels, r_levels[1:])) or r_levels[0] < 1:
        raise ConstructionError(f"r_levels must be positive and strictly increasing: {list(r_levels)}")
    if r_levels[-1] > n:
        raise ConstructionError(f"r_a = {r_levels[-1]} exceeds n = {n}")
    if degree_profile.r_levels != r_levels:
        raise ConstructionError(
            f"Degree profile rows {list(degree_profile.r_levels)} disagree with r_levels {list(r_levels)}")

    d_c = degree_profile.check_degree
    levels = []
    previous_rows, previous_degree = 0, 0
    for level, (rows, degree) in enumerate(zip(r_levels, degree_profile.symbol_degree)):
        window = rows - previous_rows
        delta = degree - previous_degree
        if n * delta != window * d_c:
            raise ConstructionError(
                f"Level {level}: {n} symbols x {delta} new edges != {window} new rows x d_c={d_c}")
        if delta > window:
            raise ConstructionError(f"Level {level}: {delta} new edges per symbol but only {window} new rows")
        levels.append((previous_rows, rows, delta, d_c))
        previous_rows, previous_degree = rows, degree

    girth_six = a == 0 and _needs_girth_six(n, r_levels[0], degree_profile.symbol_degree[0])
    logger.info(f"Building E-PEG chain a={a}, n={n}, r_levels={list(r_levels)}, d_c={d_c}")
    basis = _grow(n, r_levels[-1], levels, seed, girth_six)
    return NestedCodeChain.from_basis(basis, r_levels)
