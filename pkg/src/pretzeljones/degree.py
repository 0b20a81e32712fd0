"""Closed-form degree analysis of the pretzel state sum.

Everything here is arithmetic over exact rationals: the quadratic form
delta(n, k) attached to a tight channel vector, its sign, exhaustive
maximization over the tight lattice, and the top-degree prediction for the
colored Jones polynomial including the cancellation drop on the congruence
classes where the two lattice maximizers kill each other's leading term.

Degree conventions: q-degrees are Fractions (half-integers show up through
the writhe framing), the cable width is n, the public color is N = n + 1.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import pretzel, qring, skein


class UnsupportedRegime(ValueError):
    """The degree theorem's hypotheses fail for this pretzel word."""


def _as_word(w) -> Tuple[int, ...]:
    w = tuple(int(v) for v in w)
    if len(w) < 3:
        raise ValueError("degree analysis needs at least three twist regions")
    if any(abs(v) < 2 for v in w):
        raise ValueError("degree analysis assumes |w_i| > 1")
    return w


def _check_tight(n: int, k: Sequence[int], m: int) -> Tuple[int, ...]:
    k = tuple(int(v) for v in k)
    if len(k) != m + 1:
        raise ValueError("channel vector length does not match the word")
    if any(not 0 <= v <= n for v in k):
        raise ValueError(f"channels {k} outside 0..{n}")
    if k[0] != sum(k[1:]):
        raise ValueError(f"k = {k} is not tight")
    return k


def delta(n: int, k: Sequence[int], w: Sequence[int]) -> Fraction:
    """Top q-degree contributed by the tight channel vector k."""
    w = _as_word(w)
    m = len(w) - 1
    k = _check_tight(n, k, m)
    val = (w[0] + 1) * k[0] * k[0]
    val += sum((w[i] - 1) * k[i] * k[i] for i in range(1, m + 1))
    val += sum((-2 + w[0] + w[i]) * k[i] for i in range(1, m + 1))
    val -= Fraction(n * (n + 2), 2) * sum(w)
    val += (m - 1) * n
    return -val


def delta_sign(n: int, k: Sequence[int], w: Sequence[int]) -> int:
    """Sign of the leading monomial of the tight channel contribution."""
    w = _as_word(w)
    m = len(w) - 1
    k = _check_tight(n, k, m)
    e = w[0] * (n - k[0]) + n + k[0]
    e += sum((n - k[i]) * (w[i] - 1) for i in range(1, m + 1))
    return -1 if e % 2 else 1


@dataclass(frozen=True)
class DegreeCell:
    """One tight lattice point with its degree data."""

    k: Tuple[int, ...]
    delta: Fraction
    sign: int


def tight_lattice(n: int, m: int):
    """All tight channel vectors at width n with m free entries."""
    if m == 2:
        for k1 in range(n + 1):
            for k2 in range(n + 1 - k1):
                yield (k1 + k2, k1, k2)
        return
    for rest in itertools.product(range(n + 1), repeat=m):
        if sum(rest) <= n:
            yield (sum(rest),) + rest


def lattice_max(w: Sequence[int], n: int) -> List[DegreeCell]:
    """All tight maximizers of delta, by exhaustive enumeration."""
    w = _as_word(w)
    m = len(w) - 1
    best: List[DegreeCell] = []
    for k in tight_lattice(n, m):
        d = delta(n, k, w)
        if not best or d > best[0].delta:
            best = [DegreeCell(k, d, delta_sign(n, k, w))]
        elif d == best[0].delta:
            best.append(DegreeCell(k, d, delta_sign(n, k, w)))
    return best


def x1_star(w: Sequence[int], n: int) -> Fraction:
    """Real maximizer of delta along the full diagonal k = (n, x, n-x)."""
    w = _as_word(w)
    if len(w) != 3:
        raise ValueError("the diagonal maximizer formula is for three regions")
    w1, w2 = w[1], w[2]
    return Fraction(-2 * n - w1 + w2 + 2 * n * w2, 2 * (-2 + w1 + w2))


# --- the three-region degree theorem -------------------------------------------


def s_value(w: Sequence[int]) -> Fraction:
    w = _as_word(w)
    if len(w) != 3:
        raise ValueError("s(w) is defined for three twist regions")
    h = Fraction(1, w[1] - 1) + Fraction(1, w[2] - 1)
    return 1 + w[0] + 1 / h


def s1_value(w: Sequence[int]) -> Fraction:
    w = _as_word(w)
    if len(w) != 3:
        raise ValueError("s1(w) is defined for three twist regions")
    h = Fraction(1, w[1] - 1) + Fraction(1, w[2] - 1)
    num = sum(Fraction(w[i] + w[0] - 2, w[i] - 1) for i in (1, 2))
    return num / h


def js_value(w: Sequence[int]) -> Fraction:
    w = _as_word(w)
    return -s_value(w) + w[0] + w[2]


def jx_value(w: Sequence[int], cancellation: bool) -> Fraction:
    """Linear coefficient of the degree quadratic, per congruence class."""
    w = _as_word(w)
    val = -s1_value(w) + 2 * s_value(w) - 1
    if cancellation:
        val -= Fraction(2 * min(w[1] - 1, w[2] - 1), -2 + w[1] + w[2])
    return val


def cancellation_modulus(w: Sequence[int]) -> int:
    """Colors on the lattice N = modulus * j are where maxima cancel."""
    w = _as_word(w)
    if len(w) != 3:
        raise ValueError("cancellation analysis is for three twist regions")
    g = gcd(w[1] - 1, w[2] - 1)
    return (-2 + w[1] + w[2]) // g


def hypothesis_failure(w: Sequence[int]) -> Optional[str]:
    """Reason the degree theorem does not cover w, or None if it does."""
    w = tuple(int(v) for v in w)
    if len(w) != 3:
        return "needs exactly three twist regions"
    if any(abs(v) < 2 for v in w):
        return "needs |w_i| > 1"
    if not (w[0] < -1 < 1 < w[1] and w[2] > 1):
        return "needs w_0 < -1 < 1 < w_1, w_2"
    if w[1] % 2:
        return "needs w_1 even"
    if -w[0] <= min(w[1] - 1, w[2] - 1):
        return "needs -w_0 > min(w_1 - 1, w_2 - 1)"
    if s_value(w) >= 0:
        return "needs s(w) < 0"
    if skein.pretzel_components(w) != 1:
        return "needs a knot"
    return None


def predicted_degree(w: Sequence[int], N: int) -> Fraction:
    """Top q-degree of the color-N Jones polynomial, from the closed form.

    Assembled as writhe framing plus the tight lattice maximum, minus the
    cancellation drop when N sits on the cancellation lattice.  Raises
    UnsupportedRegime outside the theorem's hypotheses rather than guessing.
    """
    w = tuple(int(v) for v in w)
    reason = hypothesis_failure(w)
    if reason is not None:
        raise UnsupportedRegime(f"unsupported regime for {w}: {reason}")
    if not isinstance(N, int) or N < 2:
        raise ValueError("color N must be an integer >= 2")
    n = N - 1
    top = lattice_max(w, n)[0].delta
    top += Fraction(skein.writhe(w) * (n * n + 2 * n), 2)
    modulus = cancellation_modulus(w)
    if N % modulus == 0:
        j = N // modulus
        g = gcd(w[1] - 1, w[2] - 1)
        top -= Fraction(2 * min(w[1] - 1, w[2] - 1) * j, g)
    return top


def cancellation_pair_gap(w: Sequence[int], j: int) -> Fraction:
    """Degree drop from the exact sum of the two canceling leading products.

    At width n = modulus*j - 1 the diagonal maximizers are k = (n, v, n-v)
    and k' = (n, v-1, n-v+1) with v = (w_2-1)j/g; their leading terms have
    equal degree and opposite signs, and the difference of the two exact
    products drops by 2*min(w_1-1, w_2-1)*j/g.
    """
    w = _as_word(w)
    if j < 1:
        raise ValueError("the cancellation lattice starts at j = 1")
    modulus = cancellation_modulus(w)
    g = gcd(w[1] - 1, w[2] - 1)
    n = modulus * j - 1
    v = (w[2] - 1) // g * j
    spec = pretzel.PretzelSpec(w)
    a = pretzel.tight_leading_term(spec, n, (n, v, n - v))
    b = pretzel.tight_leading_term(spec, n, (n, v - 1, n - v + 1))
    return (a + b).degree() - a.degree()


# --- empirical fits --------------------------------------------------------------


def fit_quadratic_exact(points: Sequence[Tuple[int, Fraction]]
                        ) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
    """Quadratic through the first three points, or None if the rest deviate.

    Exact rational interpolation; a nonzero residual anywhere means the data
    is not quadratic and the caller must not pretend otherwise.
    """
    if len(points) < 3:
        raise ValueError("need at least three points per class")
    (x0, y0), (x1, y1), (x2, y2) = points[:3]
    # divided differences
    d01 = (y1 - y0) / Fraction(x1 - x0)
    d12 = (y2 - y1) / Fraction(x2 - x1)
    a = (d12 - d01) / Fraction(x2 - x0)
    b = d01 - a * (x0 + x1)
    c = y0 - a * x0 * x0 - b * x0
    for x, y in points:
        if a * x * x + b * x + c != y:
            return None
    return a, b, c


@dataclass(frozen=True)
class ColorRow:
    N: int
    residue: int
    degree: Fraction
    predicted: Optional[Fraction]
    match: Optional[bool]


@dataclass(frozen=True)
class DegreeReport:
    """Per-residue quadratic structure of exact top degrees."""

    w: Tuple[int, ...]
    s: Fraction
    s1: Fraction
    js: Optional[Fraction]
    jx: Dict[int, Optional[Fraction]]
    c: Dict[int, Optional[Fraction]]
    modulus: int
    cancellation_residues: Tuple[int, ...]
    rows: Tuple[ColorRow, ...]

    def to_json(self) -> str:
        def frac(x):
            return None if x is None else str(x)

        return json.dumps({
            "w": list(self.w),
            "s": frac(self.s),
            "s1": frac(self.s1),
            "js": frac(self.js),
            "jx": {str(r): frac(v) for r, v in sorted(self.jx.items())},
            "c": {str(r): frac(v) for r, v in sorted(self.c.items())},
            "modulus": self.modulus,
            "cancellation_residues": list(self.cancellation_residues),
            "rows": [{"N": r.N, "residue": r.residue, "degree": str(r.degree),
                      "predicted": frac(r.predicted), "match": r.match}
                     for r in self.rows],
        }, indent=2)

    def csv_rows(self) -> List[List[str]]:
        out = [["N", "residue", "degree", "predicted", "match"]]
        for r in self.rows:
            out.append([str(r.N), str(r.residue), str(r.degree),
                        "" if r.predicted is None else str(r.predicted),
                        "" if r.match is None else str(r.match).lower()])
        return out


def empirical_degree_fit(w: Sequence[int],
                         degrees: Mapping[int, Fraction]) -> DegreeReport:
    """Fit js*N^2 + jx_r*N + c_r per residue class r of N.

    degrees maps color N to the exact top q-degree of the color-N polynomial.
    Classes with fewer than three colors raise; non-quadratic classes are
    reported with None coefficients rather than an approximate fit.
    """
    w = _as_word(w)
    modulus = cancellation_modulus(w)
    by_class: Dict[int, List[Tuple[int, Fraction]]] = {}
    for N in sorted(degrees):
        by_class.setdefault(N % modulus, []).append((N, Fraction(degrees[N])))
    jx: Dict[int, Optional[Fraction]] = {}
    c: Dict[int, Optional[Fraction]] = {}
    js_seen: List[Fraction] = []
    for r, pts in sorted(by_class.items()):
        if len(pts) < 3:
            raise ValueError(f"residue class {r} mod {modulus} has "
                             f"{len(pts)} colors; need at least 3")
        fit = fit_quadratic_exact(pts)
        if fit is None:
            jx[r] = None
            c[r] = None
        else:
            a, b, cc = fit
            js_seen.append(a)
            jx[r] = b
            c[r] = cc
    js = js_seen[0] if js_seen and all(v == js_seen[0] for v in js_seen) else None
    # cancellation classes read off the fits: linear terms agree off the
    # class and drop strictly below it
    slopes = [v for v in jx.values() if v is not None]
    canc: Tuple[int, ...] = ()
    if slopes and len(set(slopes)) > 1:
        off = max(slopes)
        canc = tuple(r for r in sorted(jx)
                     if jx[r] is not None and jx[r] < off)
    failure = hypothesis_failure(w)
    rows = []
    for N in sorted(degrees):
        pred = None if failure else predicted_degree(w, N)
        rows.append(ColorRow(N, N % modulus, Fraction(degrees[N]), pred,
                             None if pred is None else pred == degrees[N]))
    return DegreeReport(w=w, s=s_value(w), s1=s1_value(w), js=js, jx=jx, c=c,
                        modulus=modulus, cancellation_residues=canc,
                        rows=tuple(rows))
