"""Domain-aware kernel operations: iteration, iteration domains, the d_n
pseudometric, set images and preimages-of-images, invariance checks, and
restriction of a system to an invariant subset.

Conventions: sigma^0 is the identity everywhere, sigma^n(U) means
sigma^n(U painted into Dom(sigma^n)), and for k < 0 the power sigma^k is the
inverse image.  Absence of an iterate is a value (None), not an error.
"""

from __future__ import annotations

from typing import Optional

from .points import Point
from .system import PartialSystem, SystemValidationError


def iterate(sys, x, i):
    """sigma^i(x), or None when x leaves the domain before i steps."""
    j = sys.iterate_index(sys.index[x], i)
    return None if j < 0 else sys.sample[j]


def iteration_domain(sys, x, n):
    """I_n(x) = {i in 0..n-1 : sigma^i(x) is defined}; downward closed."""
    out = set()
    idx = sys.index[x]
    for i in range(n):
        if sys.iterate_index(idx, i) < 0:
            break
        out.add(i)
    return out


def dn_distance(sys, x, y, n):
    """max over i in I_n(x) & I_n(y) of d(sigma^i x, sigma^i y)."""
    ix, iy = sys.index[x], sys.index[y]
    best = None
    for i in range(n):
        jx = sys.iterate_index(ix, i)
        jy = sys.iterate_index(iy, i)
        if jx < 0 or jy < 0:
            break
        d = sys.metric(sys.sample[jx], sys.sample[jy])
        if best is None or d > best:
            best = d
    # i = 0 always belongs to both iteration domains
    assert best is not None
    return best


def image_set(sys, U, n):
    """sigma^n(U) within the sample (samples are closed under the map)."""
    if n == 0:
        return frozenset(U)
    idx = {sys.index[p] for p in U}
    out = set()
    for i in idx:
        j = sys.iterate_index(i, n)
        if j >= 0:
            out.add(sys.sample[j])
    return frozenset(out)


def image_indices(sys, indices, n):
    out = set()
    for i in indices:
        j = sys.iterate_index(i, n)
        if j >= 0:
            out.add(j)
    return frozenset(out)


def preimage_of_image(sys, U, k):
    """sigma^-k(sigma^k(U)).

    k >= 1: all sample points of Dom(sigma^k) mapping into sigma^k(U);
    k <= 0: the identity U & Im(sigma^-k) (with Im(sigma^0) the whole sample).
    """
    if k <= 0:
        im = sys.image_set_indices(-k)
        return frozenset(p for p in U if sys.index[p] in im)
    targets = image_indices(sys, (sys.index[p] for p in U), k)
    out = set()
    for i in range(sys.size()):
        j = sys.iterate_index(i, k)
        if j >= 0 and j in targets:
            out.add(sys.sample[i])
    return frozenset(out)


def sigma_inverse(sys, U):
    """sigma^-1(U) = all sample preimages of members of U."""
    out = set()
    for p in U:
        out.update(sys.preimages(p))
    return frozenset(out)


def check_invariance(sys, Y):
    """(sigma_invariant, sigma_inv_invariant) for Y as a dict record."""
    Yset = frozenset(Y)
    fwd = image_set(sys, Yset, 1) <= Yset
    bwd = sigma_inverse(sys, Yset) <= Yset
    return {"sigma_invariant": fwd, "sigma_inv_invariant": bwd}


def invariance_violation(sys, Y):
    """First offending (point, direction) pair, or None when Y is invariant."""
    Yset = frozenset(Y)
    for p in sys.sorted_points(Yset):
        if sys.in_domain(p) and sys.apply(p) not in Yset:
            return (p, "sigma")
    for p in sys.sorted_points(Yset):
        for q in sys.preimages(p):
            if q not in Yset:
                return (q, "sigma-inverse")
    return None


def restrict(sys, Y, space_id=None):
    """Restriction of the system to a (sigma, sigma^-1)-invariant subset.

    The restricted domain is Dom(sigma) intersected with Y; openness of the
    restricted image is a recorded assumption, not a computed fact.  Raises
    on non-invariant Y, naming the offending point.
    """
    bad = invariance_violation(sys, Y)
    if bad is not None:
        raise SystemValidationError(
            "restriction set is not invariant: %r escapes via %s" % bad
        )
    Yset = frozenset(Y)
    sub = PartialSystem(
        space_id or (sys.space_id + "|restricted"),
        Yset,
        sys.metric,
        in_domain=lambda p, _s=sys, _y=Yset: p in _y and _s.in_domain(p),
        apply_map=sys.apply,
        dom_clopen=sys.dom_clopen,
        compact_space=sys.compact_space,
        resolution=sys.resolution,
        kind=sys.kind,
        subshift=sys.subshift,
        neighborhood_radii=sys.neighborhood_radii,
        meta=dict(sys.meta, restricted_from=sys.space_id),
        validate_metric_limit=0,
    )
    return sub


def closure_in_sample(sys, S):
    """One-step metric dilation of S at the system's declared resolution.

    Finite samples have no limit points; this is the declared surrogate for
    topological closure, with the dilation radius visible as sys.resolution.
    """
    Sset = frozenset(S)
    if not Sset:
        return Sset
    r = sys.resolution
    extra = set()
    if sys.kind in ("euclidean", "cantor") and len(sys.sample[0].coords) == 1:
        # 1-D fast path: sorted scan against sorted S values
        svals = sorted(p.coords[0] for p in Sset)
        import bisect

        for p in sys.sample:
            if p in Sset:
                continue
            v = p.coords[0]
            i = bisect.bisect_left(svals, v)
            near = []
            if i < len(svals):
                near.append(svals[i])
            if i:
                near.append(svals[i - 1])
            if any(abs(v - s) <= r for s in near):
                extra.add(p)
        return Sset | extra
    for p in sys.sample:
        if p in Sset:
            continue
        if any(sys.metric(p, s) <= r for s in Sset):
            extra.add(p)
    return Sset | extra
