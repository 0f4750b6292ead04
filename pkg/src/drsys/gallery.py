"""Catalog of sampled example systems with machine-checkable annotations.

Each builder returns a GallerySystem holding the sampled PartialSystem, the
expected nonwandering set at the documented truncation, and (where known) the
expected growth rate with its tolerance.  Resolutions are declared builder
arguments with documented defaults, so acceptance runs are reproducible.

Samples are closed under the map by construction: Euclidean grids are dyadic
(exact in binary floats), the ternary system uses exact rationals, the
gasket stores its second coordinate in units of sqrt(3), and symbolic
systems enumerate shift-closed element families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import otw
from .otw import (
    Catalog,
    EMPTY_WORD,
    EventuallyPeriodic,
    FiniteWord,
    OtwMetric,
    OtwSubshift,
    first_difference_metric,
    rho_enumeration_from,
)
from .points import Point, abs_metric, euclidean, scaled_plane_metric, symbolic
from .system import PartialSystem


@dataclass
class GallerySystem:
    id: str
    system: PartialSystem
    expected_omega: frozenset
    expected_entropy: Optional[float] = None
    entropy_tolerance: Optional[float] = None
    default_schedule: tuple = ()
    notes: str = ""

    def expected_wandering(self):
        return frozenset(self.system.sample) - self.expected_omega

    def compact_set(self):
        """The documented compact window K used in growth-rate runs.

        Euclidean systems restrict K to the declared base grid: the sample's
        closure padding (iterate images) exists to keep the map total-where-
        declared and is not part of the compact set under study.
        """
        base = self.system.meta.get("k_base")
        if base is not None:
            return frozenset(base)
        lo, hi = self.system.meta.get("k_window", (None, None))
        if lo is None:
            return frozenset(self.system.sample)
        return frozenset(
            p for p in self.system.sample if lo <= p.coords[0] <= hi
        )


def _schedule(n_lo, n_hi, eps_list):
    return tuple((n, e) for e in eps_list for n in range(n_lo, n_hi + 1))


# -- Euclidean interval systems ------------------------------------------------


def doubling_line(depth=12, window_exp=7):
    """x -> 2x on the line, sampled on dyadic grids of [-2^w, 2^w].

    The grid of [-1, 1] at step 2^-depth is extended by doubled copies so
    every iterate up to the horizon stays representable; the domain predicate
    cuts at half the window.  All values are dyadic floats (exact).
    """
    step = 2.0 ** (-depth)
    vals = set()
    for i in range(window_exp + 1):
        scale = step * (2**i)
        vals.update(k * scale for k in range(-(2**depth), 2**depth + 1))
    half_window = float(2 ** (window_exp - 1))
    pts = [euclidean(v) for v in vals]
    sysm = PartialSystem(
        "doubling-line[d=%d,w=%d]" % (depth, window_exp),
        pts,
        abs_metric,
        in_domain=lambda p: abs(p.coords[0]) <= half_window,
        apply_map=lambda p: euclidean(p.coords[0] * 2.0),
        dom_clopen=True,
        compact_space=False,
        resolution=step,
        kind="euclidean",
        neighborhood_radii=(step / 2, step * 8),
        meta={"k_window": (-1.0, 1.0)},
    )
    return GallerySystem(
        "doubling-line",
        sysm,
        expected_omega=frozenset([euclidean(0.0)]),
        expected_entropy=math.log(2),
        entropy_tolerance=0.15,
        default_schedule=_schedule(2, 8, [0.25, 0.125, 0.0625]),
        notes="expanding homeomorphism of the line; rate log 2 concentrates "
        "outside the fixed point, so restriction to it drops the rate to 0",
    )


def half_domain_interval(depth=12):
    """x -> 2x on [0, 1] with domain [0, 1/2); the n-step domain shrinks to
    [0, 2^-(n-1)) and every growth count stays bounded by 1/eps."""
    step = 2.0 ** (-depth)
    pts = [euclidean(k * step) for k in range(2**depth + 1)]
    sysm = PartialSystem(
        "half-domain-interval[d=%d]" % depth,
        pts,
        abs_metric,
        in_domain=lambda p: p.coords[0] < 0.5,
        apply_map=lambda p: euclidean(p.coords[0] * 2.0),
        dom_clopen=False,
        compact_space=True,
        resolution=step,
        kind="euclidean",
        neighborhood_radii=(step / 2, step * 8),
    )
    return GallerySystem(
        "half-domain-interval",
        sysm,
        expected_omega=frozenset([euclidean(0.0)]),
        expected_entropy=0.0,
        entropy_tolerance=0.05,
        default_schedule=_schedule(2, 8, [0.25, 0.125, 0.0625]),
        notes="domain shrinks geometrically; zero growth rate",
    )


def cantor_times_3(depth=8):
    """x -> 3x on the middle-thirds set, domain [0, 1/3]; exact rationals."""
    pts = []
    for mask in range(2**depth):
        x = Fraction(0)
        for i in range(depth):
            if mask >> i & 1:
                x += Fraction(2, 3 ** (i + 1))
        pts.append(euclidean(x))
    third = Fraction(1, 3)
    sysm = PartialSystem(
        "cantor-times-3[d=%d]" % depth,
        pts,
        abs_metric,
        in_domain=lambda p: p.coords[0] <= third,
        apply_map=lambda p: euclidean(p.coords[0] * 3),
        dom_clopen=True,
        compact_space=True,
        resolution=Fraction(1, 3 ** (depth - 1)),
        kind="cantor",
        neighborhood_radii=(Fraction(1, 3**depth), Fraction(1, 3 ** (depth // 2))),
    )
    return GallerySystem(
        "cantor-times-3",
        sysm,
        expected_omega=frozenset([euclidean(Fraction(0))]),
        expected_entropy=0.0,
        entropy_tolerance=0.05,
        default_schedule=_schedule(2, 6, [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]),
        notes="clopen domain on a compact set; rate concentrates on the fixed point",
    )


def sierpinski_double(depth=8):
    """x -> 2x on the gasket, domain the bottom-left half-scale copy.

    Points are the depth-step address images of the corner (0,0); the second
    coordinate is stored in units of sqrt(3), so the plane metric uses weight
    3 on that coordinate and all comparisons stay exact.
    """
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    pts = {(Fraction(0), Fraction(0))}
    for _ in range(depth):
        nxt = set()
        for (x, u) in pts:
            nxt.add((x / 2, u / 2))
            nxt.add((x / 2 + half, u / 2))
            nxt.add((x / 2 + quarter, u / 2 + quarter))
        pts = nxt
    sample = [euclidean(x, u) for (x, u) in pts]
    present = set(pts)

    def in_dom(p):
        x, u = p.coords
        return (x * 2, u * 2) in present

    sysm = PartialSystem(
        "sierpinski-double[d=%d]" % depth,
        sample,
        scaled_plane_metric(3),
        in_domain=in_dom,
        apply_map=lambda p: euclidean(p.coords[0] * 2, p.coords[1] * 2),
        dom_clopen=False,
        compact_space=True,
        resolution=Fraction(1, 2 ** (depth - 1)),
        kind="sierpinski",
        neighborhood_radii=(Fraction(1, 2 ** (depth + 1)), Fraction(1, 2 ** (depth - 2))),
    )
    return GallerySystem(
        "sierpinski-double",
        sysm,
        expected_omega=frozenset([euclidean(Fraction(0), Fraction(0))]),
        notes="iterated-function-system attractor; only the corner recurs",
    )


def square_on_two_intervals(depth=8, pad=20):
    """x -> x^2 on [-1,-1/2] union [0,1], sampled on a dyadic grid with the
    sample closed under squaring for `pad` steps.

    Values are float64: grid values are exact dyadics, while deep iterates
    round to nearest (the sampled map is squaring composed with rounding;
    comparisons between stored values stay exact).  The long horizon matters:
    separated counts grow linearly along the chains stacked against the
    expanding fixed points at +-1 until the grid caps them, and the terminal
    plateau is what exposes the zero growth rate.
    """
    g = 2.0 ** (-depth)
    grid = [k * g for k in range(-(2**depth), -(2 ** (depth - 1)) + 1)]
    grid += [k * g for k in range(0, 2**depth + 1)]
    vals = set(grid)
    frontier = set(grid)
    for _ in range(pad):
        frontier = {v * v for v in frontier} - vals
        vals |= frontier
    pts = [euclidean(v) for v in vals]
    present = vals

    sysm = PartialSystem(
        "square-two-intervals[d=%d,pad=%d]" % (depth, pad),
        pts,
        abs_metric,
        in_domain=lambda p: p.coords[0] * p.coords[0] in present,
        apply_map=lambda p: euclidean(p.coords[0] * p.coords[0]),
        dom_clopen=True,
        compact_space=True,
        resolution=g,
        kind="euclidean",
        neighborhood_radii=(g / 2, g * 8),
        meta={"k_base": [euclidean(v) for v in grid]},
    )
    return GallerySystem(
        "square-on-two-intervals",
        sysm,
        expected_omega=frozenset([euclidean(-1.0), euclidean(0.0), euclidean(1.0)]),
        expected_entropy=0.0,
        entropy_tolerance=0.05,
        default_schedule=_schedule(2, 16, [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]),
        notes="total squaring map with three recurrent points",
    )


# -- finite-alphabet shift systems ----------------------------------------------


def _word_points(symbols, word_len):
    """All tails u 0^inf for words u of length <= word_len (canonical dedup)."""
    elems = {EventuallyPeriodic((), (0,))}
    words = [()]
    for _ in range(word_len):
        words = [w + (a,) for w in words for a in range(symbols)]
        elems.update(EventuallyPeriodic(w, (0,)) for w in words)
    return sorted(elems, key=lambda e: e.sort_key())


def full_shift_finite(symbols=2, word_len=5):
    """Full one-sided shift on a finite alphabet, sampled on the eventually-
    zero tails of bounded description length; the classical 2^-i metric."""
    elems = _word_points(symbols, word_len)
    pts = [symbolic(e) for e in elems]
    sub = OtwSubshift(
        name="full-shift-%d" % symbols,
        alphabet_start=0,
        alphabet_bound=symbols - 1,
        rational_cylinder_rule=lambda cyl: True,
    )
    sysm = PartialSystem(
        "full-shift-%d[L=%d]" % (symbols, word_len),
        pts,
        lambda a, b: first_difference_metric(a.elem, b.elem),
        in_domain=lambda p: True,
        apply_map=lambda p: symbolic(otw.shift(p.elem)),
        dom_clopen=True,
        compact_space=True,
        resolution=Fraction(1, 2 ** (word_len + 2)),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": True},
    )
    return GallerySystem(
        "full-shift-%d" % symbols,
        sysm,
        expected_omega=frozenset(pts),
        expected_entropy=math.log(symbols),
        entropy_tolerance=0.15,
        default_schedule=_schedule(2, word_len, [Fraction(1, 2)]),
        notes="every point recurs; block counts grow like |alphabet|^n",
    )


def binary_clopen_mix(word_len=10):
    """Injective mix on binary tails: the fixed all-zero point, a two-step
    shift on even zero-blocks, and a two-zero prepend on odd zero-blocks;
    domain is the cylinder of sequences starting with 0."""
    elems = _word_points(2, word_len)
    pts = [symbolic(e) for e in elems]
    zero = EventuallyPeriodic((), (0,))

    def leading_zeros(e):
        i = 1
        while e.symbol_at(i) == 0:
            i += 1
            if i > word_len + 1:
                return None  # all-zero tail
        return i - 1

    def image(e):
        if e == zero:
            return zero
        k = leading_zeros(e)
        if k is None:
            return zero
        if k == 0:
            return None
        syms = e.prefix_word
        if k % 2 == 0:
            return EventuallyPeriodic(syms[2:], (0,))
        if len(syms) + 2 > word_len:
            return None  # truncation frontier
        return EventuallyPeriodic((0, 0) + syms, (0,))

    img = {e: image(e) for e in elems}
    sub = OtwSubshift(name="binary-clopen-mix", alphabet_start=0, alphabet_bound=1)
    sysm = PartialSystem(
        "binary-clopen-mix[L=%d]" % word_len,
        pts,
        lambda a, b: first_difference_metric(a.elem, b.elem),
        in_domain=lambda p: img[p.elem] is not None,
        apply_map=lambda p: symbolic(img[p.elem]),
        dom_clopen=True,
        compact_space=True,
        resolution=Fraction(1, 2 ** (word_len - 1)),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": False, "cylinder_depth": word_len + 1},
    )
    return GallerySystem(
        "binary-clopen-mix",
        sysm,
        expected_omega=frozenset([symbolic(zero)]),
        expected_entropy=0.0,
        entropy_tolerance=0.05,
        default_schedule=_schedule(2, 5, [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]),
        notes="injective map, clopen domain, compact space; only the fixed "
        "point recurs and the growth rate is zero",
    )


# -- countable-alphabet subshifts -----------------------------------------------


def otw_full_shift(symbols=3, word_len=4, alphabet_bound=12):
    """Full shift over a countable alphabet, truncated: finite words over the
    first `symbols` letters, constant and two-letter periodic tails, and the
    empty word (the compactification point)."""
    elems = set()
    words = [()]
    for _ in range(word_len):
        words = [w + (a,) for w in words for a in range(1, symbols + 1)]
        elems.update(FiniteWord(w) for w in words)
    elems.add(EMPTY_WORD)
    for a in range(1, symbols + 1):
        elems.add(EventuallyPeriodic((), (a,)))
    elems.add(EventuallyPeriodic((), (1, 2)))
    elems.add(EventuallyPeriodic((), (2, 1)))
    pts = [symbolic(e) for e in sorted(elems, key=lambda e: e.sort_key())]
    sub = OtwSubshift(
        name="otw-full-shift",
        alphabet_start=1,
        alphabet_bound=alphabet_bound,
        rational_cylinder_rule=lambda cyl: True,
    )
    metric = OtwMetric(rho_enumeration_from(1))

    def in_dom(p):
        e = p.elem
        return e.is_infinite() or e.length() >= 1

    sysm = PartialSystem(
        "otw-full-shift[s=%d,L=%d]" % (symbols, word_len),
        pts,
        lambda a, b: metric(a.elem, b.elem),
        in_domain=in_dom,
        apply_map=lambda p: symbolic(otw.shift(p.elem)),
        dom_clopen=False,
        compact_space=True,
        resolution=Fraction(1, 4),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": True},
    )
    return GallerySystem(
        "otw-full-shift",
        sysm,
        expected_omega=frozenset(pts),
        notes="periodic tails are dense in every cylinder, so everything "
        "recurs, including the empty word and all finite words",
    )


def otw_orbit_of_123(max_shift=30):
    """The forward orbit of the increasing sequence 1 2 3 4 ... plus the
    empty word: every orbit point is isolated and drifts, while the empty
    word is a limit of the orbit and recurs."""
    catalog = Catalog()
    catalog.register(
        "inc",
        symbol_rule=lambda params, i: params[0] + i - 1,
        shift_rule=lambda params: ("listed", "inc", (params[0] + 1,)),
    )
    incs = [catalog.element("inc", (s,)) for s in range(1, max_shift + 1)]
    elems = [EMPTY_WORD] + incs
    pts = [symbolic(e) for e in elems]
    sub = OtwSubshift(
        name="otw-orbit-of-123",
        alphabet_start=1,
        alphabet_bound=12,
        catalog=catalog,
        isolated_rule=lambda e: isinstance(e, otw.Listed),
        rational_cylinder_rule=lambda cyl: False,
    )
    metric = OtwMetric(rho_enumeration_from(1))

    def in_dom(p):
        e = p.elem
        if not e.is_infinite():
            return False
        return e.params[0] + 1 <= max_shift

    res = metric(EMPTY_WORD, catalog.element("inc", (max_shift - 1,)))
    sysm = PartialSystem(
        "otw-orbit-of-123[N=%d]" % max_shift,
        pts,
        lambda a, b: metric(a.elem, b.elem),
        in_domain=in_dom,
        apply_map=lambda p: symbolic(otw.shift(p.elem)),
        dom_clopen=False,
        compact_space=True,
        resolution=res * Fraction(11, 10),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": True},
    )
    return GallerySystem(
        "otw-orbit-of-123",
        sysm,
        expected_omega=frozenset([symbolic(EMPTY_WORD)]),
        notes="a wandering orbit accumulating only at the empty word",
    )


def otw_labeled_graph(inc_max=46, jump_s_max=20, jump_j_max=7):
    """Label sequences of one-way paths: pure increment runs, runs with one
    double-and-add-one jump, and the empty word.

    The catalog annotation records the published expectation that the whole
    space recurs.  The classifier provably disagrees on the jump paths: a
    pinned jump determines the entire tail, so each jump path is an isolated
    point with pairwise-distinct iterates, and the isolated-irrational rule
    certifies it as wandering.  The acceptance suite keeps the published
    expectation and documents the mismatch.
    """
    catalog = Catalog()

    def jump_symbol(params, i):
        s, j = params
        if i <= j:
            return s + i - 1
        return 2 * (s + j - 1) + 1 + (i - j - 1)

    def jump_shift(params):
        s, j = params
        if j >= 2:
            return ("listed", "jump", (s + 1, j - 1))
        return ("listed", "inc", (2 * s + 1,))

    catalog.register(
        "inc",
        symbol_rule=lambda params, i: params[0] + i - 1,
        shift_rule=lambda params: ("listed", "inc", (params[0] + 1,)),
    )
    catalog.register("jump", symbol_rule=jump_symbol, shift_rule=jump_shift)

    elems = [EMPTY_WORD]
    elems += [catalog.element("inc", (s,)) for s in range(1, inc_max + 1)]
    elems += [
        catalog.element("jump", (s, j))
        for s in range(1, jump_s_max + 1)
        for j in range(1, jump_j_max + 1)
    ]
    pts = [symbolic(e) for e in elems]
    sub = OtwSubshift(
        name="otw-labeled-graph",
        alphabet_start=1,
        alphabet_bound=12,
        catalog=catalog,
        isolated_rule=lambda e: isinstance(e, otw.Listed) and e.family == "jump",
        rational_cylinder_rule=lambda cyl: False,
    )
    metric = OtwMetric(rho_enumeration_from(1))
    in_sample = set(elems)

    def in_dom(p):
        e = p.elem
        if not e.is_infinite():
            return False
        return otw.shift(e) in in_sample

    sysm = PartialSystem(
        "otw-labeled-graph[inc=%d,jump=%dx%d]" % (inc_max, jump_s_max, jump_j_max),
        pts,
        lambda a, b: metric(a.elem, b.elem),
        in_domain=in_dom,
        apply_map=lambda p: symbolic(otw.shift(p.elem)),
        dom_clopen=False,
        compact_space=True,
        resolution=Fraction(1, 2**40),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": True, "cylinder_depth": jump_j_max - 1},
    )
    return GallerySystem(
        "otw-labeled-graph",
        sysm,
        expected_omega=frozenset(pts),
        notes="published expectation: everything recurs; computed: jump "
        "paths are isolated with non-returning orbits and come out wandering",
    )


def otw_p_sequence(shift_max=26, np_max=8, zero_blocks=10):
    """Sparse-ones sequence p = 1 0 1 0^2 1 0^3 ... with its shifts, the
    one-symbol prefixes m.p, the eventually-zero spikes 0^n 1 0^inf, the
    all-zero point, and the empty word."""
    catalog = Catalog()

    def p_symbol(n, i):
        m = n + i  # 1-based index into p itself when n = 0 shifts
        # ones sit at positions t_k = k(k+1)/2 + 1, k >= 0
        # solve k(k+1)/2 = m - 1
        k = int((math.isqrt(8 * (m - 1) + 1) - 1) // 2)
        return 1 if k * (k + 1) // 2 == m - 1 else 0

    catalog.register(
        "pshift",
        symbol_rule=lambda params, i: p_symbol(params[0], i),
        shift_rule=lambda params: ("listed", "pshift", (params[0] + 1,)),
    )
    catalog.register(
        "np",
        symbol_rule=lambda params, i: params[0] if i == 1 else p_symbol(0, i - 1),
        shift_rule=lambda params: ("listed", "pshift", (0,)),
    )
    zero = EventuallyPeriodic((), (0,))
    spikes = [
        EventuallyPeriodic((0,) * n + (1,), (0,)) for n in range(zero_blocks + 1)
    ]
    pshifts = [catalog.element("pshift", (n,)) for n in range(shift_max + 1)]
    nps = [catalog.element("np", (m,)) for m in range(1, np_max + 1)]
    elems = [EMPTY_WORD, zero] + spikes + pshifts + nps
    pts = [symbolic(e) for e in elems]
    in_sample = set(elems)
    sub = OtwSubshift(
        name="otw-p-sequence",
        alphabet_start=0,
        alphabet_bound=np_max,
        catalog=catalog,
        isolated_rule=lambda e: isinstance(e, otw.Listed),
    )
    metric = OtwMetric(rho_enumeration_from(0))

    def in_dom(p):
        e = p.elem
        if not e.is_infinite():
            return False
        nxt = otw.shift(e)
        return nxt in in_sample

    sysm = PartialSystem(
        "otw-p-sequence[N=%d]" % shift_max,
        pts,
        lambda a, b: metric(a.elem, b.elem),
        in_domain=in_dom,
        apply_map=lambda p: symbolic(otw.shift(p.elem)),
        dom_clopen=False,
        compact_space=True,
        resolution=Fraction(1, 2**60),
        kind="otw",
        subshift=sub,
        meta={"symbolic_rules_apply": True},
    )
    expected = frozenset([symbolic(zero)] + [symbolic(s) for s in spikes])
    return GallerySystem(
        "otw-p-sequence",
        sysm,
        expected_omega=expected,
        expected_entropy=0.0,
        entropy_tolerance=0.05,
        default_schedule=_schedule(2, 5, [Fraction(1, 4), Fraction(1, 8), Fraction(1, 16)]),
        notes="recurrent spikes against a wandering sparse orbit; the empty "
        "word is wandering via the prefix cylinder excluding symbols 0 and 1",
    )


BUILDERS = {
    "doubling-line": doubling_line,
    "half-domain-interval": half_domain_interval,
    "cantor-times-3": cantor_times_3,
    "sierpinski-double": sierpinski_double,
    "square-on-two-intervals": square_on_two_intervals,
    "full-shift-2": lambda **kw: full_shift_finite(symbols=2, **kw),
    "full-shift-3": lambda **kw: full_shift_finite(symbols=3, **kw),
    "otw-full-shift": otw_full_shift,
    "binary-clopen-mix": binary_clopen_mix,
    "otw-orbit-of-123": otw_orbit_of_123,
    "otw-labeled-graph": otw_labeled_graph,
    "otw-p-sequence": otw_p_sequence,
}

# Coarser documented truncations used for full-sample classification runs;
# growth-rate runs use the builder defaults above.
CLASSIFY_OVERRIDES = {
    "doubling-line": {"depth": 8, "window_exp": 5},
    "half-domain-interval": {"depth": 8},
    "square-on-two-intervals": {"depth": 6, "pad": 5},
    "sierpinski-double": {"depth": 6},
}


def ids():
    return sorted(BUILDERS)


def build(gallery_id, **overrides):
    """Construct a gallery system; unknown ids raise KeyError."""
    if gallery_id not in BUILDERS:
        raise KeyError("unknown gallery id: %r" % (gallery_id,))
    return BUILDERS[gallery_id](**overrides)


def build_for_classification(gallery_id):
    return build(gallery_id, **CLASSIFY_OVERRIDES.get(gallery_id, {}))
