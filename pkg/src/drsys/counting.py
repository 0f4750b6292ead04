"""Exact and greedy solvers for the two NP-hard cores of the count pipeline:
maximum independent set (separated sets) and minimum dominating set
(spanning/generating sets).

Graphs are given as closed-neighborhood bitmasks.  Exact search decomposes
into connected components first (cliques short-circuit), then runs plain
branch and bound; the exactness budget is enforced by callers on the number
of points, and a safety cap on search nodes turns pathological instances
into an explicit error rather than a silent stall.
"""

from __future__ import annotations


class ExactnessBudgetError(RuntimeError):
    """Raised when an exact count is requested beyond the configured budget."""


_NODE_CAP = 2_000_000


def _build_neighbor_masks(n, adjacent):
    """adjacent(i, j) -> closed-neighborhood masks (self bit included)."""
    masks = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if adjacent(i, j):
                masks[i] |= 1 << j
                masks[j] |= 1 << i
    return masks


def _components(n, masks):
    seen = 0
    comps = []
    for s in range(n):
        if seen >> s & 1:
            continue
        frontier = 1 << s
        comp = 0
        while frontier:
            comp |= frontier
            nxt = 0
            f = frontier
            while f:
                v = (f & -f).bit_length() - 1
                f &= f - 1
                nxt |= masks[v]
            frontier = nxt & ~comp
        comps.append(comp)
        seen |= comp
    return comps


def _bits(mask):
    while mask:
        b = mask & -mask
        yield b.bit_length() - 1
        mask &= mask - 1


def _is_clique(comp, masks):
    for v in _bits(comp):
        if masks[v] & comp != comp:
            return False
    return True


def max_independent_set(n, adjacent):
    """Exact maximum independent set; returns a sorted list of indices.

    Deterministic: the pivot is the highest-degree candidate with ties toward
    the smallest index, and the take-branch is explored first, so witnesses
    are reproducible across runs.
    """
    if n == 0:
        return []
    masks = _build_neighbor_masks(n, adjacent)
    budget = [_NODE_CAP]
    total = 0
    for comp in _components(n, masks):
        if _is_clique(comp, masks):
            total |= 1 << next(_bits(comp))
            continue
        best = [0, 0]  # size, mask

        def bb(cand, size, mask):
            budget[0] -= 1
            if budget[0] < 0:
                raise ExactnessBudgetError(
                    "exact independent-set search node cap hit"
                )
            if cand == 0:
                if size > best[0]:
                    best[0], best[1] = size, mask
                return
            if size + bin(cand).count("1") <= best[0]:
                return
            pivot, pdeg = -1, -1
            for v in _bits(cand):
                d = bin(masks[v] & cand).count("1")
                if d > pdeg:
                    pivot, pdeg = v, d
            bb(cand & ~masks[pivot], size + 1, mask | (1 << pivot))
            bb(cand & ~(1 << pivot), size, mask)

        bb(comp, 0, 0)
        total |= best[1]
    return sorted(_bits(total))


def min_dominating_set(n, adjacent):
    """Exact minimum dominating set (closed neighborhoods); sorted indices."""
    if n == 0:
        return []
    masks = _build_neighbor_masks(n, adjacent)
    budget = [_NODE_CAP]
    result = 0
    for comp in _components(n, masks):
        comp_vertices = list(_bits(comp))
        if _is_clique(comp, masks):
            result |= 1 << comp_vertices[0]
            continue
        best = [len(comp_vertices) + 1, 0]

        def bb(undominated, chosen_mask, chosen_count):
            budget[0] -= 1
            if budget[0] < 0:
                raise ExactnessBudgetError("exact dominating-set search node cap hit")
            if undominated == 0:
                if chosen_count < best[0]:
                    best[0] = chosen_count
                    best[1] = chosen_mask
                return
            # lower bound: each chosen vertex dominates at most max |N[v]|
            maxdeg = max(
                bin(masks[v] & comp).count("1") for v in _bits(undominated)
            )
            need = (bin(undominated).count("1") + maxdeg - 1) // maxdeg
            if chosen_count + need >= best[0]:
                return
            # branch on the undominated vertex with fewest dominators
            pick, options, best_opts = -1, None, 1 << 62
            for v in _bits(undominated):
                opts = masks[v] & comp
                c = bin(opts).count("1")
                if c < best_opts:
                    pick, options, best_opts = v, opts, c
            for d in _bits(options):
                bb(undominated & ~masks[d], chosen_mask | (1 << d), chosen_count + 1)

        bb(comp, 0, 0)
        result |= best[1]
    return sorted(_bits(result))


def greedy_independent_set(n, adjacent):
    """Canonical-order greedy independent set (a lower bound for the max)."""
    kept = []
    for v in range(n):
        if all(not adjacent(v, u) for u in kept):
            kept.append(v)
    return kept


def greedy_dominating_set(n, adjacent):
    """Classic greedy cover (an upper bound for the minimum), deterministic:
    ties break toward the smallest index."""
    if n == 0:
        return []
    masks = _build_neighbor_masks(n, adjacent)
    undominated = (1 << n) - 1
    chosen = []
    while undominated:
        best_v, best_gain = -1, -1
        for v in range(n):
            gain = bin(masks[v] & undominated).count("1")
            if gain > best_gain:
                best_v, best_gain = v, gain
        chosen.append(best_v)
        undominated &= ~masks[best_v]
    return sorted(chosen)
