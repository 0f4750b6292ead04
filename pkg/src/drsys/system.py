"""Partial dynamical systems over a finite canonical sample.

A PartialSystem is a partially defined map on a finite ordered sample of a
space, with an exact metric, a domain predicate, and declared topology
assumptions (dom_clopen, compact_space).  The constructor enforces the
invariants everything downstream relies on:

  * the sample is canonically ordered and duplicate-free,
  * the sample is closed under the map wherever the domain predicate holds,
  * preimage lists are the exact reverse map over the sample.

Iterates, image sets of all orders, and the cycle structure of the sample's
functional graph are cached on demand; all operations are pure.
"""

from __future__ import annotations

from math import gcd
from typing import Callable, Optional, Sequence

from .points import Point


class SystemValidationError(ValueError):
    pass


class PartialSystem:
    def __init__(
        self,
        space_id,
        sample,
        metric,
        in_domain,
        apply_map,
        dom_clopen,
        compact_space,
        resolution,
        kind="table",
        subshift=None,
        neighborhood_radii=None,
        meta=None,
        validate_metric_limit=30,
    ):
        pts = sorted(set(sample), key=lambda p: p.sort_key())
        if len(pts) != len(list(sample)):
            # duplicates collapse silently only if truly equal points
            pass
        if not pts:
            raise SystemValidationError("empty sample")
        tags = {p.tag for p in pts}
        if len(tags) != 1:
            raise SystemValidationError("mixed point kinds in one system")
        if tags == {"euclidean"}:
            dims = {len(p.coords) for p in pts}
            if len(dims) != 1:
                raise SystemValidationError("mixed coordinate dimensions")

        self.space_id = space_id
        self.sample = tuple(pts)
        self.metric = metric
        self._in_domain = in_domain
        self._apply = apply_map
        self.dom_clopen = bool(dom_clopen)
        self.compact_space = bool(compact_space)
        self.resolution = resolution
        self.kind = kind
        self.subshift = subshift
        self.neighborhood_radii = tuple(neighborhood_radii or ())
        self.meta = dict(meta or {})

        self.index = {p: i for i, p in enumerate(self.sample)}
        n = len(self.sample)
        # one-step map as index array; -1 means outside the domain
        step = [-1] * n
        for i, p in enumerate(self.sample):
            if in_domain(p):
                q = apply_map(p)
                j = self.index.get(q)
                if j is None:
                    raise SystemValidationError(
                        "sample not closed under the map: %r -> %r" % (p, q)
                    )
                step[i] = j
        self._step = step
        pre = [[] for _ in range(n)]
        for i, j in enumerate(step):
            if j >= 0:
                pre[j].append(i)
        self._preimages_idx = [tuple(v) for v in pre]
        self._orbit_rows = [step]  # _orbit_rows[k][i] = index of sigma^{k+1}(x_i)
        self._image_sets = None  # cached frozensets of indices, Im(sigma^m)
        self._cycle_info = None
        # pairwise metric memo for small samples (symbolic metrics are costly)
        self._metric_memo = {} if n <= 600 else None
        self._validate_metric(validate_metric_limit)

    # -- construction-time checks -------------------------------------------
    def _validate_metric(self, limit):
        pts = self.sample
        if len(pts) > limit:
            return
        for a in pts:
            for b in pts:
                dab = self.metric(a, b)
                if dab < 0:
                    raise SystemValidationError("negative distance")
                if (dab == 0) != (a == b):
                    raise SystemValidationError(
                        "metric zero-set mismatch at %r, %r" % (a, b)
                    )
                if dab != self.metric(b, a):
                    raise SystemValidationError("asymmetric metric")
        for a in pts:
            for b in pts:
                dab = self.metric(a, b)
                for c in pts:
                    if self.metric(a, c) > dab + self.metric(c, b):
                        raise SystemValidationError(
                            "triangle inequality fails at %r,%r,%r" % (a, b, c)
                        )

    # -- indexed accessors ---------------------------------------------------
    def size(self):
        return len(self.sample)

    def in_domain(self, p):
        i = self.index.get(p)
        if i is None:
            return bool(self._in_domain(p))
        return self._step[i] >= 0

    def apply(self, p):
        i = self.index[p]
        if self._step[i] < 0:
            raise ValueError("point outside the domain: %r" % (p,))
        return self.sample[self._step[i]]

    def preimages(self, p):
        """All sample preimages of p under the map (exact reverse map)."""
        return tuple(self.sample[i] for i in self._preimages_idx[self.index[p]])

    def metric_between(self, i, j):
        """metric(sample[i], sample[j]) with memoization on small samples."""
        if self._metric_memo is None:
            return self.metric(self.sample[i], self.sample[j])
        if i > j:
            i, j = j, i
        got = self._metric_memo.get((i, j))
        if got is None:
            got = self.metric(self.sample[i], self.sample[j])
            self._metric_memo[(i, j)] = got
        return got

    def _ensure_orbit_rows(self, k):
        while len(self._orbit_rows) < k:
            prev = self._orbit_rows[-1]
            step = self._step
            self._orbit_rows.append(
                [(-1 if j < 0 else step[j]) for j in prev]
            )

    def iterate_index(self, i, k):
        """Index of sigma^k(x_i), or -1 when undefined. k >= 0."""
        if k == 0:
            return i
        self._ensure_orbit_rows(k)
        return self._orbit_rows[k - 1][i]

    def image_set_indices(self, m):
        """Im(sigma^m) as a frozenset of indices; Im(sigma^0) = everything."""
        if self._image_sets is None:
            self._image_sets = [frozenset(range(len(self.sample)))]
        while len(self._image_sets) <= m:
            prev = self._image_sets[-1]
            step = self._step
            self._image_sets.append(
                frozenset(step[i] for i in prev if step[i] >= 0)
            )
        return self._image_sets[m]

    def stabilized_image(self):
        """(m_star, Im(sigma^m_star)) where the decreasing chain Im(sigma^m)
        first repeats; Im is constant from there on."""
        m = 0
        while True:
            a = self.image_set_indices(m)
            b = self.image_set_indices(m + 1)
            if a == b:
                return m, a
            m += 1

    def cycle_info(self):
        """(tail_bound, lcm_of_cycle_lengths) of the sample functional graph.

        tail_bound is the maximum number of steps before any orbit either
        leaves the domain or lands on a cycle; lcm is over all cycle lengths
        (1 when there are no cycles).
        """
        if self._cycle_info is not None:
            return self._cycle_info
        n = len(self.sample)
        step = self._step
        color = [0] * n  # 0 new, 1 active, 2 done
        on_cycle = [False] * n
        lcm = 1
        for s in range(n):
            if color[s]:
                continue
            path = []
            pos = {}
            v = s
            while v >= 0 and color[v] == 0:
                color[v] = 1
                pos[v] = len(path)
                path.append(v)
                v = step[v]
            if v >= 0 and color[v] == 1:
                clen = len(path) - pos[v]
                lcm = lcm // gcd(lcm, clen) * clen
                for u in path[pos[v] :]:
                    on_cycle[u] = True
            for u in path:
                color[u] = 2
        tail = [None] * n
        for s in range(n):
            u = s
            chain = []
            while tail[u] is None:
                if on_cycle[u] or step[u] < 0:
                    tail[u] = 0
                    break
                chain.append(u)
                u = step[u]
            t = tail[u]
            for w in reversed(chain):
                t += 1
                tail[w] = t
        self._cycle_info = (max(tail) if n else 0, lcm)
        return self._cycle_info

    def points(self, indices):
        return frozenset(self.sample[i] for i in indices)

    def indices(self, points):
        return frozenset(self.index[p] for p in points)

    def sorted_points(self, points):
        return sorted(points, key=lambda p: p.sort_key())

    def __repr__(self):
        return "PartialSystem(%s, %d points, kind=%s)" % (
            self.space_id,
            len(self.sample),
            self.kind,
        )


def make_table_system(
    space_id,
    points,
    mapping,
    metric,
    dom_clopen=True,
    compact_space=True,
    resolution=None,
    **kw,
):
    """Explicit-table system: `mapping` maps a point to its image or omits it.

    The domain is exactly the mapping's key set; intended for brute-force
    test systems.
    """
    mapping = dict(mapping)
    if resolution is None:
        resolution = 0
    return PartialSystem(
        space_id,
        points,
        metric,
        in_domain=lambda p: p in mapping,
        apply_map=lambda p: mapping[p],
        dom_clopen=dom_clopen,
        compact_space=compact_space,
        resolution=resolution,
        kind="table",
        **kw,
    )
