"""Subshift machinery for countable-alphabet shift spaces.

Elements come in three flavours: finite words (the empty word acts as the
compactification point), eventually periodic sequences stored in canonical
(minimal prefix, minimal period) form, and cataloged aperiodic sequences
given by an index->symbol rule plus a shift rule.  All are immutable and
hashable, so they can serve as sample points of a partial system.

The metric embeds the enumerated alphabet via rho(a_k) = 1/k (rho(INF) = 0)
and sums 2^-i * |rho(x_i) - rho(y_i)|.  For closed-form pairs the geometric
tail is summed exactly; pairs involving cataloged sequences are evaluated to
a guaranteed precision of 2^-PARTIAL_SUM_BITS.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Optional, Sequence


class _InfSymbol:
    """Sentinel for the padding symbol of finite sequences."""

    __slots__ = ()

    def __repr__(self):
        return "INF"


INF = _InfSymbol()

PARTIAL_SUM_BITS = 128
_EQUALITY_SCAN_HORIZON = 4096


def _minimal_period(word):
    """Smallest p such that word is a power of its first p symbols."""
    n = len(word)
    # failure function of KMP
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1] if n else 0
    return p if p and n % p == 0 else n


class OtwElement:
    """Base class; concrete kinds below. Instances are immutable values."""

    __slots__ = ()

    def symbol_at(self, i):
        """1-based symbol access; INF past the end of a finite word."""
        raise NotImplementedError

    def is_infinite(self):
        raise NotImplementedError

    def length(self):
        """Length of a finite word, None for infinite elements."""
        raise NotImplementedError

    def prefix(self, n):
        return tuple(self.symbol_at(i) for i in range(1, n + 1))

    def sort_key(self):
        raise NotImplementedError


class FiniteWord(OtwElement):
    __slots__ = ("symbols",)

    def __init__(self, symbols=()):
        object.__setattr__(self, "symbols", tuple(symbols))

    def __setattr__(self, *a):
        raise AttributeError("FiniteWord is immutable")

    def symbol_at(self, i):
        return self.symbols[i - 1] if i <= len(self.symbols) else INF

    def is_infinite(self):
        return False

    def length(self):
        return len(self.symbols)

    def sort_key(self):
        return (0, len(self.symbols), self.symbols)

    def __eq__(self, other):
        return isinstance(other, FiniteWord) and self.symbols == other.symbols

    def __hash__(self):
        return hash(("fw", self.symbols))

    def __repr__(self):
        return "w" if not self.symbols else "".join(map(str, self.symbols))


EMPTY_WORD = FiniteWord(())


class EventuallyPeriodic(OtwElement):
    """Sequence prefix . period^inf, canonicalized so equality is decidable."""

    __slots__ = ("prefix_word", "period")

    def __init__(self, prefix_word, period):
        period = tuple(period)
        prefix_word = tuple(prefix_word)
        if not period:
            raise ValueError("period must be nonempty")
        p = _minimal_period(period)
        period = period[:p]
        # absorb prefix tail into the period by rotating
        while prefix_word and prefix_word[-1] == period[-1]:
            prefix_word = prefix_word[:-1]
            period = (period[-1],) + period[:-1]
        object.__setattr__(self, "prefix_word", prefix_word)
        object.__setattr__(self, "period", period)

    def __setattr__(self, *a):
        raise AttributeError("EventuallyPeriodic is immutable")

    def symbol_at(self, i):
        k = len(self.prefix_word)
        if i <= k:
            return self.prefix_word[i - 1]
        return self.period[(i - k - 1) % len(self.period)]

    def is_infinite(self):
        return True

    def length(self):
        return None

    def sort_key(self):
        return (1, self.prefix(64), 0, self.prefix_word, self.period)

    def __eq__(self, other):
        return (
            isinstance(other, EventuallyPeriodic)
            and self.prefix_word == other.prefix_word
            and self.period == other.period
        )

    def __hash__(self):
        return hash(("ep", self.prefix_word, self.period))

    def __repr__(self):
        pre = "".join(map(str, self.prefix_word))
        return "%s(%s)^inf" % (pre, "".join(map(str, self.period)))


class Listed(OtwElement):
    """Cataloged aperiodic sequence: (family, params) resolved by a catalog."""

    __slots__ = ("family", "params", "catalog")

    def __init__(self, family, params, catalog):
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "params", tuple(params))
        object.__setattr__(self, "catalog", catalog)

    def __setattr__(self, *a):
        raise AttributeError("Listed is immutable")

    def symbol_at(self, i):
        return self.catalog.symbol(self.family, self.params, i)

    def is_infinite(self):
        return True

    def length(self):
        return None

    def sort_key(self):
        return (1, self.prefix(64), 1, self.family, self.params)

    def __eq__(self, other):
        return (
            isinstance(other, Listed)
            and self.family == other.family
            and self.params == other.params
        )

    def __hash__(self):
        return hash(("li", self.family, self.params))

    def __repr__(self):
        return "%s%r" % (self.family, self.params)


class Catalog:
    """Registry of aperiodic sequence families.

    Each family supplies symbol(params, i) and shift(params) -> element spec.
    A shift rule returns either ("listed", family, params) or a concrete
    OtwElement, letting families fold into one another (or into periodic
    points) under the shift.
    """

    def __init__(self):
        self._symbol_rules = {}
        self._shift_rules = {}

    def register(self, family, symbol_rule, shift_rule):
        self._symbol_rules[family] = symbol_rule
        self._shift_rules[family] = shift_rule

    def symbol(self, family, params, i):
        return self._symbol_rules[family](params, i)

    def element(self, family, params):
        return Listed(family, params, self)

    def shift(self, elem):
        out = self._shift_rules[elem.family](elem.params)
        if isinstance(out, OtwElement):
            return out
        kind, family, params = out
        assert kind == "listed"
        return self.element(family, params)


def shift(x):
    """One-step shift; None when x is the empty word (outside the domain)."""
    if isinstance(x, FiniteWord):
        if not x.symbols:
            return None
        return FiniteWord(x.symbols[1:])
    if isinstance(x, EventuallyPeriodic):
        if x.prefix_word:
            return EventuallyPeriodic(x.prefix_word[1:], x.period)
        return EventuallyPeriodic((), x.period[1:] + x.period[:1])
    if isinstance(x, Listed):
        return x.catalog.shift(x)
    raise TypeError("not a subshift element: %r" % (x,))


def is_rational(x):
    """Eventually periodic test for infinite sequences."""
    if not x.is_infinite():
        raise ValueError("rationality is defined for infinite sequences only")
    return isinstance(x, EventuallyPeriodic)


@dataclass(frozen=True)
class Cylinder:
    """Generalized cylinder: fixed prefix alpha, next symbol not in excluded."""

    alpha: tuple
    excluded: frozenset = frozenset()

    def contains(self, x):
        k = len(self.alpha)
        for i in range(1, k + 1):
            if x.symbol_at(i) != self.alpha[i - 1]:
                return False
        return x.symbol_at(k + 1) not in self.excluded

    def label(self):
        a = "".join(map(str, self.alpha)) or "w"
        if not self.excluded:
            return "Z(%s)" % a
        return "Z(%s;!%s)" % (a, ",".join(map(str, sorted(self.excluded))))


def _closed_form_spec(x):
    """(preperiod_len, period_len) of the symbol stream, or None for Listed."""
    if isinstance(x, FiniteWord):
        return (len(x.symbols), 1)
    if isinstance(x, EventuallyPeriodic):
        return (len(x.prefix_word), len(x.period))
    return None


class OtwMetric:
    """Metric d(x,y) = sum_i 2^-i |rho(x_i) - rho(y_i)| for an enumeration rho."""

    def __init__(self, rho):
        self.rho = rho

    def _r(self, s):
        return Fraction(0) if s is INF else self.rho(s)

    def distance(self, x, y):
        if x == y:
            return Fraction(0)
        sx, sy = _closed_form_spec(x), _closed_form_spec(y)
        if sx is not None and sy is not None:
            n0 = max(sx[0], sy[0])
            per = sx[1] * sy[1] // gcd(sx[1], sy[1])
            head = sum(
                Fraction(abs(self._r(x.symbol_at(i)) - self._r(y.symbol_at(i))), 1)
                / 2**i
                for i in range(1, n0 + 1)
            )
            block = sum(
                Fraction(abs(self._r(x.symbol_at(n0 + r)) - self._r(y.symbol_at(n0 + r))), 1)
                / 2 ** (n0 + r)
                for r in range(1, per + 1)
            )
            return head + block / (1 - Fraction(1, 2**per))
        # partial sum with guaranteed tail bound 2^-PARTIAL_SUM_BITS
        total = Fraction(0)
        first_diff = None
        for i in range(1, PARTIAL_SUM_BITS + 1):
            a, b = x.symbol_at(i), y.symbol_at(i)
            if a != b and first_diff is None:
                first_diff = i
            total += Fraction(abs(self._r(a) - self._r(b)), 1) / 2**i
        if first_diff is None:
            # distinct elements must differ somewhere; scan further for honesty
            for i in range(PARTIAL_SUM_BITS + 1, _EQUALITY_SCAN_HORIZON):
                if x.symbol_at(i) != y.symbol_at(i):
                    return Fraction(1, 2**i) * abs(
                        self._r(x.symbol_at(i)) - self._r(y.symbol_at(i))
                    )
            raise ValueError(
                "distinct elements agree beyond scan horizon: %r vs %r" % (x, y)
            )
        return total

    def __call__(self, x, y):
        return self.distance(x, y)


def first_difference_metric(x, y):
    """Classical finite-alphabet shift metric: 2^-(first difference index),
    indexing from zero, so sequences differing at the first symbol are at
    distance 1."""
    if x == y:
        return Fraction(0)
    sx, sy = _closed_form_spec(x), _closed_form_spec(y)
    if sx is None or sy is None:
        raise ValueError("first-difference metric needs closed-form elements")
    horizon = max(sx[0], sy[0]) + sx[1] * sy[1] // gcd(sx[1], sy[1])
    for i in range(1, horizon + 1):
        if x.symbol_at(i) != y.symbol_at(i):
            return Fraction(1, 2 ** (i - 1))
    raise ValueError("distinct closed-form elements with equal streams")


def rho_enumeration_from(alphabet_start):
    """rho for alphabets enumerated 1,2,... (start 1) or 0,1,... (start 0)."""
    if alphabet_start == 0:
        return lambda s: Fraction(1, s + 1)
    return lambda s: Fraction(1, s)


@dataclass
class OtwSubshift:
    """Finite working description of a countable-alphabet subshift.

    The truncation bounds are declared, not inferred: alphabet_bound caps the
    enumerated alphabet, forbidden lists finite forbidden blocks, catalog
    holds the aperiodic families, and isolated_rule/rational_cylinder_rule
    carry the structural knowledge the classification rules need.  Results
    that depend on the bounds are flagged by callers, not here.
    """

    name: str
    alphabet_start: int = 1
    alphabet_bound: int = 12
    forbidden: tuple = ()
    catalog: Catalog = field(default_factory=Catalog)
    # declared structural knowledge, validated against the sample where possible
    isolated_rule: Optional[Callable[[OtwElement], bool]] = None
    rational_cylinder_rule: Optional[Callable[[Cylinder], bool]] = None
    infinite_extension_checked: bool = False

    def metric(self):
        return OtwMetric(rho_enumeration_from(self.alphabet_start))

    def alphabet(self):
        return range(self.alphabet_start, self.alphabet_bound + 1)

    def is_isolated(self, x):
        if self.isolated_rule is None:
            return False
        return bool(self.isolated_rule(x))

    def cylinder_has_rational(self, cyl, sample=None):
        """True when Z(alpha, excluded) contains a rational element.

        The structural rule wins when declared; otherwise fall back to the
        rational members of the given sample (truncation-dependent answer).
        """
        if self.rational_cylinder_rule is not None:
            return bool(self.rational_cylinder_rule(cyl))
        if sample is None:
            return False
        for y in sample:
            if isinstance(y, EventuallyPeriodic) and cyl.contains(y):
                return True
        return False

    def word_allowed(self, word):
        """No forbidden block occurs in the (finite) word."""
        word = tuple(word)
        for f in self.forbidden:
            lf = len(f)
            if lf and any(word[i : i + lf] == tuple(f) for i in range(len(word) - lf + 1)):
                return False
        return True


def cylinders_around(x, max_alpha_len, excluded_pool, max_excluded=2):
    """Generalized cylinders containing x: prefixes of x up to max_alpha_len,
    with excluded sets drawn from excluded_pool (never the next symbol of x).

    This is the neighborhood base used in place of 'all open sets'.
    """
    out = []
    lengths = [n for n in range(0, max_alpha_len + 1)]
    if not x.is_infinite():
        lengths = [n for n in lengths if n <= x.length()]
    for n in lengths:
        alpha = x.prefix(n)
        if alpha and alpha[-1] is INF:
            continue
        nxt = x.symbol_at(n + 1)
        pool = sorted(s for s in excluded_pool if s != nxt and s is not INF)
        out.append(Cylinder(alpha, frozenset()))
        for r in range(1, max_excluded + 1):
            for combo in itertools.combinations(pool, r):
                out.append(Cylinder(alpha, frozenset(combo)))
    return out


def classify_symbolic(subshift, x, sample, cylinder_depth=8, max_excluded=2):
    """Symbolic wandering classification, applied in rule order.

    Returns ("nonwandering", rule) / ("wandering", rule) / ("follow-empty-word",
    None) for finite words, or None when no rule decides.  Rules mirror the
    rational/irrational dichotomy: rationals recur; points whose every
    cylinder neighborhood contains a rational are nonwandering; isolated
    irrational sequences are wandering; finite words follow the empty word.
    """
    if not x.is_infinite() and x.length() > 0:
        return ("follow-empty-word", None)
    if x.is_infinite() and is_rational(x):
        return ("nonwandering", "rational")
    isolated = x.is_infinite() and subshift.is_isolated(x)
    if not isolated:
        # an isolated irrational point can never satisfy the density
        # hypothesis: its singleton neighborhood contains no rational, even
        # when the bounded cylinder lattice is too shallow to witness that
        symbols_seen = sorted(
            {y.symbol_at(1) for y in sample if y.symbol_at(1) is not INF},
            key=lambda s: (isinstance(s, int), s),
        )
        cyls = cylinders_around(x, cylinder_depth, symbols_seen, max_excluded)
        if cyls and all(subshift.cylinder_has_rational(c, sample) for c in cyls):
            return ("nonwandering", "rational-density")
    if isolated:
        return ("wandering", "isolated-irrational")
    return None  # the empty word and unresolved points fall to the sweep


def validate_isolation_declarations(subshift, sample, cylinder_depth=8):
    """Check declared-isolated points really are cut out by a cylinder of the
    truncated lattice (within the sample).  Returns offending points."""
    bad = []
    pts = list(sample)
    for x in pts:
        if not x.is_infinite() or not subshift.is_isolated(x):
            continue
        found = False
        for n in range(1, cylinder_depth + 1):
            cyl = Cylinder(x.prefix(n))
            members = [y for y in pts if cyl.contains(y)]
            if members == [x]:
                found = True
                break
        if not found:
            bad.append(x)
    return bad


def load_labeled_graph(description):
    """Build the label-sequence subshift of a finite labeled graph.

    description: {"vertices": [...], "edges": [[src, dst, label], ...],
                  "depth": int, "include_empty_word": bool}

    Returns (subshift, sample) where the sample holds the label words of all
    paths up to depth, eventually periodic label sequences arising from
    cycles (pumped once per simple cycle through each start), and optionally
    the empty word.  Malformed edges raise ValueError naming the edge.
    """
    vertices = list(description.get("vertices", []))
    vset = set(vertices)
    edges = {}
    for e in description.get("edges", []):
        if len(e) != 3:
            raise ValueError("malformed edge (need [src, dst, label]): %r" % (e,))
        src, dst, label = e
        if src not in vset or dst not in vset:
            raise ValueError("edge endpoints unknown: %r" % (e,))
        edges.setdefault(src, []).append((dst, label))
    depth = int(description.get("depth", 6))
    include_w = bool(description.get("include_empty_word", True))

    words = set()
    periodic = set()

    def walk(v, labels):
        if labels:
            words.add(tuple(labels))
        if len(labels) >= depth:
            return
        for dst, label in edges.get(v, ()):
            walk(dst, labels + [label])

    for v in vertices:
        walk(v, [])

    # cycles give eventually periodic sequences: simple-cycle detection
    def cycles_from(v, path_v, path_l):
        for dst, label in edges.get(v, ()):
            if dst in path_v:
                i = path_v.index(dst)
                pre = tuple(path_l[:i])
                per = tuple(path_l[i:] + [label])
                periodic.add(EventuallyPeriodic(pre, per))
            elif len(path_v) < depth:
                cycles_from(dst, path_v + [dst], path_l + [label])

    for v in vertices:
        cycles_from(v, [v], [])

    sample = [FiniteWord(w) for w in sorted(words, key=lambda w: (len(w), w))]
    sample.extend(sorted(periodic, key=lambda p: p.sort_key()))
    if include_w or not vertices:
        sample.insert(0, EMPTY_WORD)
    labels_used = sorted({l for outs in edges.values() for _, l in outs})
    bound = max(labels_used) if labels_used else 1
    sub = OtwSubshift(
        name=str(description.get("name", "labeled-graph")),
        alphabet_start=min(labels_used) if labels_used else 1,
        alphabet_bound=bound,
    )
    return sub, sample
