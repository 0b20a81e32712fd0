"""Fusion state sum for colored Jones polynomials of pretzel links.

The n-cabled bracket of a pretzel word splits over fusion channels
k = (k_0, ..., k_m), one per twist region: each 2n-strand twist region is
projected onto its channel ladder, picking up an eigenvalue monomial per
crossing pair and a fusion normalization [2k+1]/theta(n, n, 2k).  What is
left is the untwisted skeleton S_k.  Expanding its projectors over the
planar-matching basis (a choice "sigma" per box, weighted by the basis
coefficient of the projector) grinds S_k down to small leftover networks
T_{k, sigma} that the generic bracket engine evaluates exactly.

The enumeration here replays that expansion literally on the skeleton's
port pairing: splice a center box, splice a junction top box, strip the
circles that close onto the bottom box, splice the bottom box at its
reduced width.  Every intermediate quantity is an exact rational function,
so the pruned and generic walks must produce identical totals; the pruned
walk only skips branches whose remaining sum is structurally zero (a cap
straight into a projector).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

from . import qring, skein, tl
from .qring import HalfLaurent, RatFunc, qint
from .skein import DiagramError
from .tl import Matching

_EMPTY_MATCHING = Matching(())


class PretzelSpec:
    """A pretzel word (w_0, ..., w_m); w_i is the signed crossing count of
    region i.  `knot` records whether the standard diagram is connected,
    which holds exactly when at most one w_i is even.
    """

    __slots__ = ("w", "knot")

    def __init__(self, w: Sequence[int]):
        wt = tuple(int(v) for v in w)
        if len(wt) < 2:
            raise ValueError("a pretzel word needs at least two twist regions")
        self.w = wt
        self.knot = skein.pretzel_components(wt) == 1

    @property
    def m(self) -> int:
        return len(self.w) - 1

    def mirror(self) -> "PretzelSpec":
        return PretzelSpec(tuple(-v for v in self.w))

    def __eq__(self, other):
        return isinstance(other, PretzelSpec) and self.w == other.w

    def __hash__(self):
        return hash(self.w)

    def __repr__(self):
        return f"PretzelSpec({self.w})"


@dataclass(frozen=True)
class FusionState:
    """One choice of channels and projector expansions.

    d has one entry per center box of regions 1..m (the empty matching when
    that channel is 0); sigma_t, sigma_b, circles have one entry per shared
    junction 1..m-1, with circles counting the strands stripped off the
    bottom box before sigma_b was chosen there.
    """

    k: Tuple[int, ...]
    d: Tuple[Matching, ...]
    sigma_t: Tuple[Matching, ...]
    sigma_b: Tuple[Matching, ...]
    circles: Tuple[int, ...]

    def tight(self) -> bool:
        return self.k[0] == sum(self.k[1:])


@dataclass(frozen=True)
class StateTerm:
    """One summand of the state sum: coeff * bracket."""

    state: FusionState
    coeff: RatFunc
    bracket: RatFunc


def fusion_weight(n: int, k: int) -> RatFunc:
    """[2k+1]/theta(n, n, 2k) in factored form.

    Written out so odd n works; the theta evaluator insists on even labels.
    """
    if not 0 <= k <= n:
        raise ValueError(f"channel k = {k} outside 0..{n}")
    fac: Dict[int, int] = {}
    qring._fact_counter(fac, 2 * k, +1)
    qring._fact_counter(fac, n, +2)
    qring._fact_counter(fac, n + k + 1, -1)
    qring._fact_counter(fac, n - k, -1)
    qring._fact_counter(fac, k, -2)
    num = -qint(2 * k + 1) if (n + k) % 2 else qint(2 * k + 1)
    dq: Dict[int, int] = {}
    for j, e in fac.items():
        if e > 0:
            num = num * qint(j) ** e
        elif e < 0:
            dq[j] = -e
    return RatFunc._build(num, dq, qring.ONE)


def _proj_weight(mt: Matching) -> RatFunc:
    # coefficient of mt in the projector at its width: P(mt) / [width]!
    s = mt.n
    if s == 0:
        return RatFunc(1)
    return RatFunc.from_qint_factors(
        tl.jw_coefficient(mt), {j: 1 for j in range(2, s + 1)})


def _sigma_weight(n: int, st: FusionState) -> RatFunc:
    total = RatFunc(1)
    for d in st.d:
        if d.n:
            total = total * _proj_weight(d)
    for top, bot, c in zip(st.sigma_t, st.sigma_b, st.circles):
        total = total * _proj_weight(top) * _proj_weight(bot)
        if c:
            total = total * qring.circle_removal(c, n - 1)
    return total


def state_coeff(spec: PretzelSpec, n: int, st: FusionState) -> RatFunc:
    """The full coefficient of one state: channel normalizations and twist
    eigenvalues, then the projector-expansion and circle-removal weights.
    """
    total = RatFunc(1)
    for wi, ki in zip(spec.w, st.k):
        total = total * fusion_weight(n, ki)
        total = total * qring.twist_coeff(wi, ki, n)
    return total * _sigma_weight(n, st)


def _dead(pair: dict, boxes: dict) -> bool:
    # a strand leaving a projector and coming straight back on the same
    # side composes a cap into it; everything downstream sums to zero
    for (ka, pa), (kb, pb) in pair.items():
        if ka == kb and ka in boxes:
            s = boxes[ka]
            if s and (pa < s) == (pb < s):
                return True
    return False


def _expand(n: int, k: Tuple[int, ...], prune: bool):
    """DFS over projector expansions of the skeleton at channel vector k.

    Yields (state, pair, boxes, loops) with the leftover wiring after all
    spliceable boxes are resolved.  Center boxes of regions 1..m go first,
    then each junction: top box, circle strip on the bottom box, bottom box
    at the stripped width.
    """
    R = len(k)
    pair0, boxes0 = skein.fused_skeleton(n, k)

    def centers(i: int, pair, boxes, loops, d_acc):
        if i == R:
            yield from junctions(1, pair, boxes, loops, d_acc, (), (), ())
            return
        if k[i] == 0:
            yield from centers(i + 1, pair, boxes, loops,
                               d_acc + (_EMPTY_MATCHING,))
            return
        for mt in tl.enumerate_basis(2 * k[i]):
            p2, b2 = dict(pair), dict(boxes)
            lp = skein.splice_box(p2, b2, ("cen", i), mt.mate)
            if prune and _dead(p2, b2):
                continue
            yield from centers(i + 1, p2, b2, loops + lp, d_acc + (mt,))

    def junctions(i: int, pair, boxes, loops, d_acc, t_acc, b_acc, c_acc):
        if i == R - 1:
            if prune and _dead(pair, boxes):
                return
            st = FusionState(k, d_acc, t_acc, b_acc, c_acc)
            yield st, pair, boxes, loops
            return
        for top in tl.enumerate_basis(n):
            p2, b2 = dict(pair), dict(boxes)
            lp = skein.splice_box(p2, b2, ("jt", i), top.mate)
            c = skein.strip_circles(p2, b2, ("jb", i))
            if prune and _dead(p2, b2):
                continue
            for bot in tl.enumerate_basis(n - c):
                p3, b3 = dict(p2), dict(b2)
                lp2 = skein.splice_box(p3, b3, ("jb", i), bot.mate)
                if prune and _dead(p3, b3):
                    continue
                yield from junctions(i + 1, p3, b3, loops + lp + lp2,
                                     d_acc, t_acc + (top,), b_acc + (bot,),
                                     c_acc + (c,))

    yield from centers(1, pair0, boxes0, 0, ())


def enumerate_fusion_states(spec: PretzelSpec, n: int,
                            prune: bool = True) -> Iterator[FusionState]:
    """Stream the fusion states of spec at cable width n.

    prune=False walks every basis choice; prune=True skips branches whose
    remaining contribution is structurally zero.  Both give the same sum.
    """
    if n < 1:
        raise ValueError("cable width must be at least 1")
    R = len(spec.w)
    for k in itertools.product(range(n + 1), repeat=R):
        for st, _pair, _boxes, _loops in _expand(n, k, prune):
            yield st


# leftover-network brackets, keyed by canonical wiring; channel sums keyed
# by (n, k).  Both are width-level caches shared across pretzel words.
_BRACKET_CACHE: Dict[tuple, RatFunc] = {}
_CHANNEL_CACHE: Dict[tuple, RatFunc] = {}
_SCRIPT_T_CACHE: Dict[tuple, RatFunc] = {}


def _wiring_key(pair: dict, boxes: dict) -> tuple:
    names = sorted(key for key in boxes if boxes[key] > 0)
    idx = {key: i for i, key in enumerate(names)}
    sizes = tuple(boxes[key] for key in names)
    edges = set()
    for a, b in pair.items():
        ea = (idx[a[0]], a[1])
        eb = (idx[b[0]], b[1])
        edges.add((ea, eb) if ea <= eb else (eb, ea))
    return sizes, tuple(sorted(edges))


def _leftover_bracket(pair: dict, boxes: dict, loops: int) -> RatFunc:
    key = _wiring_key(pair, boxes)
    val = _BRACKET_CACHE.get(key)
    if val is None:
        val = skein.bracket(skein.wiring_diagram(pair, boxes))
        _BRACKET_CACHE[key] = val
    if loops:
        val = val * tl.delta_power(loops)
    return val


def state_terms(spec: PretzelSpec, n: int,
                prune: bool = True) -> Iterator[StateTerm]:
    """Stream StateTerm(state, coeff, bracket) for every fusion state."""
    if n < 1:
        raise ValueError("cable width must be at least 1")
    R = len(spec.w)
    for k in itertools.product(range(n + 1), repeat=R):
        for st, pair, boxes, loops in _expand(n, k, prune):
            yield StateTerm(st, state_coeff(spec, n, st),
                            _leftover_bracket(pair, boxes, loops))


def _channel_sum(n: int, k: Tuple[int, ...], prune: bool = True) -> RatFunc:
    """Sum over sigma of the expansion weights times leftover brackets.

    This is the word-independent part of one channel's contribution; it
    equals the bracket of the untwisted skeleton S_k, which makes a handy
    cross-check but is not assumed here.
    """
    key = (n, k, prune)
    val = _CHANNEL_CACHE.get(key)
    if val is None:
        val = RatFunc(0)
        for st, pair, boxes, loops in _expand(n, k, prune):
            val = val + _sigma_weight(n, st) * _leftover_bracket(
                pair, boxes, loops)
        _CHANNEL_CACHE[key] = val
    return val


def colored_jones_statesum(spec: PretzelSpec, N: int,
                           prune: bool = True) -> HalfLaurent:
    """Exact unreduced colored Jones polynomial of a pretzel knot at color N.

    Internally the cable width is n = N - 1.  The channel sums are rational
    functions; the writhe-framed total must collapse to a Laurent polynomial,
    and failure to do so raises (a convention bug upstream, not bad input).
    """
    if not isinstance(N, int) or N < 2:
        raise ValueError("color N must be an integer >= 2")
    if not spec.knot:
        raise ValueError(f"{spec} is a link; the colored Jones sum here "
                         "assumes a single component")
    n = N - 1
    w = spec.w
    total = RatFunc(0)
    for k in itertools.product(range(n + 1), repeat=len(w)):
        coeff = RatFunc(1)
        for wi, ki in zip(w, k):
            coeff = coeff * fusion_weight(n, ki)
            coeff = coeff * qring.twist_coeff(wi, ki, n)
        coeff = coeff * _channel_sum(n, k, prune)
        total = total + coeff
    total = total * qring.framing_factor(skein.writhe(w), n)
    return total.as_laurent()


def unknot_jones(N: int) -> HalfLaurent:
    """Colored Jones polynomial of the zero-framed unknot at color N."""
    if not isinstance(N, int) or N < 2:
        raise ValueError("color N must be an integer >= 2")
    return skein.bracket(skein.unknot_diagram(N - 1)).as_laurent()


def script_t_bracket(n: int, k0: int) -> RatFunc:
    """Bracket of the tight leftover network at channel k0, memoized."""
    key = (n, k0)
    val = _SCRIPT_T_CACHE.get(key)
    if val is None:
        val = skein.bracket(skein.build_script_T(n, k0))
        _SCRIPT_T_CACHE[key] = val
    return val


def tight_leading_term(spec: PretzelSpec, n: int,
                       k: Sequence[int]) -> RatFunc:
    """Leading part of the channel-k contribution for tight k.

    The junction expansions collapse to squared factorial ratios against
    the tight leftover network; everything below that is separated by a
    degree gap controlled by min(|w_i| - 1) and min(k_i).
    """
    k = tuple(k)
    if len(k) != len(spec.w):
        raise ValueError("channel vector length does not match the word")
    if k[0] != sum(k[1:]):
        raise ValueError(f"k = {k} is not tight")
    if any(abs(wi) < 2 for wi in spec.w):
        raise ValueError("leading-term analysis assumes |w_i| > 1")
    if any(not 0 <= ki <= n for ki in k):
        raise ValueError(f"channels {k} outside 0..{n}")
    total = RatFunc(1)
    for wi, ki in zip(spec.w, k):
        total = total * fusion_weight(n, ki)
        total = total * qring.twist_coeff(wi, ki, n)
    m = len(spec.w) - 1
    for i in range(1, m):
        fac: Dict[int, int] = {}
        qring._fact_counter(fac, n - sum(k[1:i + 1]), +2)
        qring._fact_counter(fac, n - k[i + 1], +2)
        qring._fact_counter(fac, n - sum(k[1:i + 2]), -2)
        qring._fact_counter(fac, n, -2)
        num = qring.ONE
        dq: Dict[int, int] = {}
        for j, e in fac.items():
            if e > 0:
                num = num * qint(j) ** e
            elif e < 0:
                dq[j] = -e
        total = total * RatFunc._build(num, dq, qring.ONE)
    return total * script_t_bracket(n, k[0])
