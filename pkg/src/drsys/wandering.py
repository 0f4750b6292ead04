"""Wandering/nonwandering classification and dynamical balls.

A point is wandering when some open neighborhood U satisfies
sigma^n(U) & sigma^-k(sigma^k(U)) = empty for every n >= 1 and k in Z.
Neighborhoods are instantiated as metric balls (Euclidean kinds) or
generalized cylinders (symbolic kinds); these form neighborhood bases, so
witnesses found are genuine, while emptiness is certified exactly at sample
scale by closing both infinite quantifiers through the finite functional
graph: forward image sets either die or cycle, k-step preimage membership is
eventually periodic in k, and the image chain Im(sigma^m) stabilizes.
Sweeps that exceed their caps return Unknown rather than guessing.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

from .core import (
    check_invariance,
    closure_in_sample,
    image_set,
    invariance_violation,
    iterate,
    iteration_domain,
    preimage_of_image,
)
from .otw import classify_symbolic, cylinders_around, INF
from .points import symbolic
from .verdicts import (
    Nonwandering,
    SweepCertificate,
    Unknown,
    Wandering,
    WanderingVerdict,
    Witness,
)


@dataclass
class SweepPolicy:
    radii: tuple = ()  # Euclidean ball radii, decreasing; () = system default
    cylinder_depth: int = 8
    max_excluded: int = 2
    n_cap: int = 2000
    k_cap: int = 2000
    lcm_cap: int = 100000
    merge_horizon: int = 200


DEFAULT_POLICY = SweepPolicy()


# -- neighborhood families ---------------------------------------------------


def metric_ball(sys, x, r):
    """Open ball around x within the sample (strict inequality)."""
    if sys.kind in ("euclidean", "cantor") and len(x.coords) == 1:
        vals = sys.meta.get("_sorted_vals")
        if vals is None:
            vals = [p.coords[0] for p in sys.sample]
            sys.meta["_sorted_vals"] = vals
        v = x.coords[0]
        lo = bisect.bisect_left(vals, v - r)
        hi = bisect.bisect_right(vals, v + r)
        return frozenset(
            sys.sample[i] for i in range(lo, hi) if abs(vals[i] - v) < r
        )
    if sys.kind == "sierpinski":
        # the sample is sorted x-major, so |dx| < r gives a cheap window
        xs = sys.meta.get("_sorted_x")
        if xs is None:
            xs = [p.coords[0] for p in sys.sample]
            sys.meta["_sorted_x"] = xs
        v = x.coords[0]
        lo = bisect.bisect_left(xs, v - r)
        hi = bisect.bisect_right(xs, v + r)
        return frozenset(
            sys.sample[i]
            for i in range(lo, hi)
            if sys.metric(sys.sample[i], x) < r
        )
    return frozenset(p for p in sys.sample if sys.metric(p, x) < r)


def _isolation_radius(sys, x):
    """Half the distance to the nearest other sample point; the finest ball
    the sample can distinguish around x."""
    if sys.kind in ("euclidean", "cantor") and len(x.coords) == 1:
        vals = sys.meta.get("_sorted_vals")
        if vals is None:
            vals = [p.coords[0] for p in sys.sample]
            sys.meta["_sorted_vals"] = vals
        v = x.coords[0]
        i = bisect.bisect_left(vals, v)
        gaps = []
        if i + 1 < len(vals):
            gaps.append(vals[i + 1] - v)
        if i > 0:
            gaps.append(v - vals[i - 1])
        return min(gaps) / 2 if gaps else None
    return None


def neighborhood_family(sys, x, policy):
    """[(label, U)] pairs; smallest-first for nested ball families.

    Euclidean kinds use metric balls at the scheduled radii plus the
    per-point isolation radius (half the gap to the nearest sample point),
    so the finest instantiated neighborhood always separates x from the rest
    of the sample.  Symbolic kinds use the generalized cylinders containing
    x, with exclusion sets drawn from the declared truncated alphabet.
    """
    if sys.kind in ("euclidean", "cantor", "sierpinski"):
        radii = list(policy.radii) or list(sys.neighborhood_radii)
        if not radii:
            raise ValueError("no radii scheduled for %s" % sys.space_id)
        if sys.kind != "sierpinski":
            r0 = _isolation_radius(sys, x)
            if r0 is not None and r0 > 0:
                radii.append(r0)
        radii = sorted(set(radii))
        return [("ball(r=%s)" % (r,), metric_ball(sys, x, r)) for r in radii]
    # symbolic: generalized cylinders containing x, via shared prefix buckets
    depth = sys.meta.get("cylinder_depth", policy.cylinder_depth)
    bound = sys.subshift.alphabet_bound if sys.subshift else None
    buckets = _prefix_buckets(sys, depth)
    elem = x.elem
    fam = []
    import itertools

    max_len = depth if elem.is_infinite() else min(depth, elem.length())
    for ln in range(0, max_len + 1):
        alpha = elem.prefix(ln)
        bucket = buckets.get((ln, alpha))
        if bucket is None:
            continue
        nxt = elem.symbol_at(ln + 1)
        pool = sorted({s for s, _ in bucket if s is not INF and s != nxt})
        if bound is not None:
            pool = [s for s in pool if s <= bound]
        for r in range(0, policy.max_excluded + 1):
            for combo in itertools.combinations(pool, r):
                fset = frozenset(combo)
                members = frozenset(p for s, p in bucket if s not in fset)
                label = "Z(%s%s)" % (
                    "".join(map(str, alpha)) or "w",
                    ";!" + ",".join(map(str, combo)) if combo else "",
                )
                fam.append((label, members))
    return fam


def _prefix_buckets(sys, depth):
    """(prefix_len, prefix) -> [(next_symbol, point)] over the sample."""
    cache = sys.meta.setdefault("_prefix_buckets", {})
    if depth in cache:
        return cache[depth]
    buckets = {}
    for p in sys.sample:
        e = p.elem
        syms = e.prefix(depth + 1)
        top = depth if e.is_infinite() else min(depth, e.length())
        for ln in range(0, top + 1):
            buckets.setdefault((ln, syms[:ln]), []).append((syms[ln], p))
    cache[depth] = buckets
    return buckets


# -- the exact sample-scale sweep ---------------------------------------------


def _forward_sets(sys, U_idx, n_cap):
    """Distinct forward image index-sets A_1, A_2, ... until death or cycle.

    Returns (sets_by_n, preperiod, period) where sets_by_n[m] = A_m for
    m = 0..; the sequence is eventually periodic with the given parameters.
    None when n_cap is exceeded.
    """
    seen = {}
    seq = [frozenset(U_idx)]
    seen[seq[0]] = 0
    step_sets = seq[0]
    for m in range(1, n_cap + 1):
        nxt = frozenset(
            sys._step[i] for i in seq[-1] if sys._step[i] >= 0
        )
        if nxt in seen:
            return seq, seen[nxt], len(seq) - seen[nxt]
        seen[nxt] = len(seq)
        seq.append(nxt)
        if not nxt:
            return seq, len(seq) - 1, 1
    return None


def sweep_neighborhood(sys, U, policy=DEFAULT_POLICY):
    """Decide emptiness of sigma^n(U) & sigma^-k(sigma^k(U)) for all n>=1,
    k in Z, exactly at sample scale.

    Returns ("witness", Witness-less tuple (n, k, z)) on the first nonempty
    intersection (smallest n, then k = 0, 1, -1, 2, -2, ...),
    ("empty", (n_bound, k_bound)) when every intersection is empty, or
    ("unknown", (n_bound, k_bound)) when a cap was hit.
    """
    U_idx = frozenset(sys.index[p] for p in U)
    fw = _forward_sets(sys, U_idx, policy.n_cap)
    if fw is None:
        return ("unknown", (policy.n_cap, 0))
    seq, pre, per = fw
    tail_bound, cycle_lcm = sys.cycle_info()
    L = per // gcd(per, cycle_lcm) * cycle_lcm
    if L > policy.lcm_cap:
        return ("unknown", (len(seq), 0))
    k_hi = max(pre, tail_bound) + L
    if k_hi > policy.k_cap:
        return ("unknown", (len(seq), policy.k_cap))

    def a_set(m):
        if m < len(seq):
            return seq[m]
        return seq[pre + (m - pre) % per]

    # n ranges over one full eventual period; later n repeat these sets
    n_list = [n for n in range(1, min(len(seq) - 1, pre + per - 1) + 1)]
    n_list = [n for n in n_list if a_set(n)]
    m_star, im_inf = sys.stabilized_image()
    k_neg = list(range(0, m_star + 1))  # k = -m, P = U & Im(sigma^m)

    def p_neg(m):
        im = sys.image_set_indices(m)
        return U_idx & im

    def p_pos_contains(z, k):
        j = sys.iterate_index(z, k)
        return j >= 0 and j in a_set(k)

    # witness scan in deterministic order
    for n in n_list:
        A_n = a_set(n)
        ks = [0]
        for k in range(1, k_hi + 1):
            ks.append(k)
            if k <= m_star:
                ks.append(-k)
        for k in ks:
            if k <= 0:
                inter = A_n & p_neg(-k)
            else:
                inter = frozenset(z for z in A_n if p_pos_contains(z, k))
            if inter:
                z = min(inter, key=lambda i: sys.sample[i].sort_key())
                return ("witness", (n, k, sys.sample[z]))
    return ("empty", (len(seq) - 1, k_hi))


def eventually_merging_rule(sys, x, horizon=None):
    """Witness from a merging orbit: sigma^m(x) = sigma^n(x) with n < m puts
    x among the nonwandering points; the witness is sigma^(m-n)(x) inside
    sigma^(m-n)(U) & sigma^-n(sigma^n(U)) for any neighborhood U of x."""
    if horizon is None:
        horizon = DEFAULT_POLICY.merge_horizon
    idx = sys.index[x]
    seen = {idx: 0}
    cur = idx
    for m in range(1, horizon + 1):
        cur = sys._step[cur] if cur >= 0 else -1
        if cur < 0:
            return None
        if cur in seen:
            n = seen[cur]
            r = m - n
            z = sys.sample[sys.iterate_index(idx, r)]
            return Witness("{x}", frozenset([x]), r, n, z)
        seen[cur] = m
    return None


def verify_witness(sys, x, witness):
    """Recompute the witness membership through the set operations."""
    U = witness.U
    if x not in U:
        return False
    img = image_set(sys, U, witness.n)
    back = preimage_of_image(sys, U, witness.k)
    return witness.z in img and witness.z in back


def test_wandering_witness(sys, x, radii=None, n_max=None, k_max=None):
    """Tri-state classification of one point.

    Scheduled neighborhoods are swept smallest-first; a certified-empty sweep
    yields Wandering (one neighborhood suffices), witnesses in every swept
    neighborhood yield Nonwandering (ball families are nested, so the
    smallest ball decides), anything capped yields Unknown.
    """
    policy = SweepPolicy(
        radii=tuple(radii or ()),
        n_cap=n_max or DEFAULT_POLICY.n_cap,
        k_cap=k_max or DEFAULT_POLICY.k_cap,
    )
    return _sweep_verdict(sys, x, policy)


def _sweep_verdict(sys, x, policy):
    fam = neighborhood_family(sys, x, policy)
    nested = sys.kind in ("euclidean", "cantor", "sierpinski")
    fam = sorted(fam, key=lambda t: (len(t[1]), t[0]))
    best_witness = None
    unknown_seen = None
    witnessed = []  # neighborhoods known to intersect; supersets inherit
    for label, U in fam:
        if any(w <= U for w in witnessed):
            continue
        out, payload = sweep_neighborhood(sys, U, policy)
        if out == "empty":
            cert = SweepCertificate(label, U, "exhaustive-orbit-closure", *payload)
            return WanderingVerdict(x, Wandering(cert))
        if out == "witness":
            n, k, z = payload
            best_witness = Witness(label, U, n, k, z)
            if nested:
                # witnesses persist upward through nested balls
                return WanderingVerdict(x, Nonwandering(best_witness))
            witnessed.append(U)
            continue
        unknown_seen = payload
    if unknown_seen is not None:
        return WanderingVerdict(x, Unknown(*unknown_seen))
    if best_witness is not None:
        return WanderingVerdict(x, Nonwandering(best_witness))
    return WanderingVerdict(x, Unknown(0, 0, "no neighborhoods scheduled"))


# -- partition ----------------------------------------------------------------


@dataclass
class Partition:
    omega: frozenset
    wandering: frozenset
    unknown: frozenset
    verdicts: dict

    def counts(self):
        return (len(self.omega), len(self.wandering), len(self.unknown))


def partition_omega(sys, policy=DEFAULT_POLICY):
    """Classify every sample point: symbolic rules first, then the merging
    rule, then the neighborhood sweep; finite words follow the empty word."""
    verdicts = {}
    followers = []
    empty_word_point = None
    use_symbolic = sys.subshift is not None and sys.meta.get(
        "symbolic_rules_apply", sys.kind == "otw"
    )
    if sys.kind == "otw":
        for x in sys.sample:
            e = x.elem
            if not e.is_infinite() and e.length() == 0:
                empty_word_point = x
                break
    for x in sys.sample:
        if use_symbolic:
            elem = x.elem
            rule = classify_symbolic(
                sys.subshift,
                elem,
                [p.elem for p in sys.sample],
                cylinder_depth=sys.meta.get("cylinder_depth", policy.cylinder_depth),
                max_excluded=policy.max_excluded,
            )
            if rule is not None:
                status, rule_id = rule
                if status == "follow-empty-word":
                    followers.append(x)
                    continue
                if status == "nonwandering":
                    wit = eventually_merging_rule(sys, x, policy.merge_horizon)
                    if wit is None:
                        v = _sweep_verdict(sys, x, policy)
                        wit = (
                            v.status.witness if v.is_nonwandering() else None
                        )
                    verdicts[x] = WanderingVerdict(x, Nonwandering(wit, rule_id))
                    continue
                if status == "wandering":
                    verdicts[x] = _certified_wandering(sys, x, rule_id, policy)
                    continue
        wit = eventually_merging_rule(sys, x, policy.merge_horizon)
        if wit is not None:
            verdicts[x] = WanderingVerdict(
                x, Nonwandering(wit, "eventually-merging")
            )
            continue
        verdicts[x] = _sweep_verdict(sys, x, policy)

    if followers:
        anchor = empty_word_point
        if anchor is None or anchor not in verdicts:
            raise ValueError("finite words present but the empty word is not")
        status = verdicts[anchor].status
        for x in followers:
            if isinstance(status, Nonwandering):
                wit = eventually_merging_rule(sys, x, policy.merge_horizon)
                verdicts[x] = WanderingVerdict(
                    x, Nonwandering(wit, "finite-follows-empty-word")
                )
            elif isinstance(status, Wandering):
                verdicts[x] = _certified_wandering(
                    sys, x, "finite-follows-empty-word", policy
                )
            else:
                verdicts[x] = WanderingVerdict(x, status)

    omega = frozenset(p for p, v in verdicts.items() if v.is_nonwandering())
    wand = frozenset(p for p, v in verdicts.items() if v.is_wandering())
    unk = frozenset(p for p, v in verdicts.items() if v.is_unknown())
    return Partition(omega, wand, unk, verdicts)


def _certified_wandering(sys, x, rule_id, policy):
    """Attach the exhaustive singleton/cylinder sweep to a symbolic wandering
    rule; a witness here would contradict the rule and is a hard error."""
    fam = neighborhood_family(sys, x, policy)
    for label, U in sorted(fam, key=lambda t: len(t[1])):
        out, payload = sweep_neighborhood(sys, U, policy)
        if out == "empty":
            cert = SweepCertificate(label, U, rule_id, *payload)
            return WanderingVerdict(x, Wandering(cert, rule_id))
        if out == "witness" and len(U) == 1:
            raise RuntimeError(
                "symbolic rule %s contradicted by a sweep witness at %r"
                % (rule_id, x)
            )
    cert = SweepCertificate("(declared)", frozenset([x]), rule_id, 0, 0)
    return WanderingVerdict(x, Wandering(cert, rule_id))


# -- partition verification ----------------------------------------------------


@dataclass
class OmegaPropertyReport:
    rows: list

    def ok(self):
        return all(r["ok"] for r in self.rows)


def verify_omega_properties(sys, omega, wandering):
    """Invariance of omega, the wandering set, and its sample closure, plus
    omega inside the closure of the domain, all at sample resolution."""
    rows = []

    def inv_row(name, S):
        bad = invariance_violation(sys, S)
        rows.append(
            {
                "check": "invariance:" + name,
                "ok": bad is None,
                "violator": None if bad is None else (repr(bad[0]), bad[1]),
            }
        )

    inv_row("omega", omega)
    inv_row("wandering", wandering)
    inv_row("closure(wandering)", closure_in_sample(sys, wandering))
    dom = frozenset(p for p in sys.sample if sys.in_domain(p))
    cl_dom = closure_in_sample(sys, dom)
    missing = [p for p in omega if p not in cl_dom]
    rows.append(
        {
            "check": "omega-in-closure(dom)",
            "ok": not missing,
            "violator": repr(missing[0]) if missing else None,
        }
    )
    return OmegaPropertyReport(rows)


# -- dynamical balls -----------------------------------------------------------


@dataclass(frozen=True)
class DynamicalBall:
    center: object
    n: int
    eps: object
    u_members: frozenset
    b_members: frozenset


def dynamical_ball(sys, x, n, eps):
    """U(x,n,eps) = points eps-shadowing every defined iterate of x;
    B(x,n,eps) additionally demands the identical iteration domain.

    Checks the containments B <= U, and B = U with B inside Dom(sigma^(n-1))
    whenever x has a full iteration domain.
    """
    In_x = iteration_domain(sys, x, n)
    xi = sys.index[x]
    u = []
    b = []
    for y in sys.sample:
        yi = sys.index[y]
        ok = True
        for i in In_x:
            j = sys.iterate_index(yi, i)
            if j < 0 or not (
                sys.metric(sys.sample[j], sys.sample[sys.iterate_index(xi, i)])
                < eps
            ):
                ok = False
                break
        if ok:
            u.append(y)
            if iteration_domain(sys, y, n) == In_x:
                b.append(y)
    u_set, b_set = frozenset(u), frozenset(b)
    assert b_set <= u_set
    if len(In_x) == n:
        if b_set != u_set:
            raise AssertionError(
                "B != U at a point with full iteration domain: %r" % (x,)
            )
        for y in b_set:
            if sys.iterate_index(sys.index[y], n - 1) < 0:
                raise AssertionError(
                    "B escapes Dom(sigma^%d) at %r" % (n - 1, y)
                )
    return DynamicalBall(x, n, eps, u_set, b_set)
