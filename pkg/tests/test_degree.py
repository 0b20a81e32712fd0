"""Degree formulas: delta, lattice maximizers, quadratic class structure."""

from fractions import Fraction as F

import pytest

from pretzeljones import degree as dg
from pretzeljones import pretzel
from pretzeljones.pretzel import PretzelSpec


W543 = (-5, 4, 3)


def test_constants_minus_5_4_3():
    assert dg.s_value(W543) == F(-14, 5)
    assert dg.s1_value(W543) == F(-18, 5)
    assert dg.js_value(W543) == F(4, 5)
    assert dg.jx_value(W543, cancellation=False) == -3
    assert dg.jx_value(W543, cancellation=True) == F(-19, 5)
    assert dg.cancellation_modulus(W543) == 5


def test_delta_zero_vector_closed_form():
    for w in [W543, (-3, 3, 2), (2, -3, 4, -5)]:
        m = len(w) - 1
        for n in range(1, 5):
            want = F(n * (n + 2), 2) * sum(w) - (m - 1) * n
            assert dg.delta(n, (0,) * (m + 1), w) == want


def test_delta_validation():
    with pytest.raises(ValueError):
        dg.delta(2, (1, 1, 1), W543)  # not tight
    with pytest.raises(ValueError):
        dg.delta(2, (3, 1, 2), W543)  # exceeds width
    with pytest.raises(ValueError):
        dg.delta(2, (2, 1, 1), (-1, 3, 2))  # |w_0| < 2
    with pytest.raises(ValueError):
        dg.delta_sign(2, (2, 1, 1), (1, 3, 2))
    with pytest.raises(ValueError):
        dg.s_value((-3, 3, 2, 2))


def tight_vectors(n, m=2):
    return [(k1 + k2, k1, k2)
            for k1 in range(n + 1) for k2 in range(n + 1 - k1)]


@pytest.mark.parametrize("w", [(-3, 3, 2), (3, -2, 4), W543])
def test_delta_matches_exact_leading_term(w):
    spec = PretzelSpec(w)
    for n in (1, 2):
        for k in tight_vectors(n):
            lead = pretzel.tight_leading_term(spec, n, k)
            assert lead.degree() == dg.delta(n, k, w)
            assert lead.leading_sign() == dg.delta_sign(n, k, w)


def test_delta_matches_exact_leading_term_width3():
    spec = PretzelSpec(W543)
    for k in tight_vectors(3):
        lead = pretzel.tight_leading_term(spec, 3, k)
        assert lead.degree() == dg.delta(3, k, W543)
        assert lead.leading_sign() == dg.delta_sign(3, k, W543)


def test_x1_star_and_maximizers():
    assert dg.x1_star(W543, 4) == F(3, 2)
    assert dg.x1_star(W543, 3) == F(11, 10)
    cells = dg.lattice_max(W543, 4)
    assert sorted(c.k for c in cells) == [(4, 1, 3), (4, 2, 2)]
    assert {c.sign for c in cells} == {1, -1}
    assert cells[0].delta == cells[1].delta == 78
    [cell] = dg.lattice_max(W543, 3)
    assert cell.k == (3, 1, 2) and cell.delta == 48


def test_maximizers_on_full_diagonal():
    for w in [W543, (-3, 4, 3), (-3, 3, 2)]:
        for n in range(1, 7):
            for cell in dg.lattice_max(w, n):
                assert cell.k[0] == n


def test_two_maximizers_iff_half_integer_x1():
    for n in range(1, 9):
        x = dg.x1_star(W543, n)
        cells = dg.lattice_max(W543, n)
        if x.denominator == 2:
            assert len(cells) == 2
            assert sorted(c.k[1] for c in cells) == [x - F(1, 2), x + F(1, 2)]
        else:
            assert len(cells) == 1
            assert cells[0].k[1] == round(x)


def test_predicted_degree_matches_exact_small_colors():
    spec = PretzelSpec(W543)
    for N in (2, 3, 4):
        J = pretzel.colored_jones_statesum(spec, N)
        assert J.degree() == dg.predicted_degree(W543, N)


def test_predicted_degree_quadratic_per_residue():
    degs = {N: dg.predicted_degree(W543, N) for N in range(2, 51)}
    rep = dg.empirical_degree_fit(W543, degs)
    assert rep.js == F(4, 5)
    assert rep.jx == {0: F(-19, 5), 1: -3, 2: -3, 3: -3, 4: -3}
    assert rep.c == {0: 1, 1: F(11, 5), 2: F(9, 5), 3: F(9, 5), 4: F(11, 5)}
    assert rep.modulus == 5
    assert all(r.match for r in rep.rows)


def test_unsupported_regimes():
    with pytest.raises(dg.UnsupportedRegime, match="w_1 even"):
        dg.predicted_degree((-3, 3, 3), 4)
    with pytest.raises(dg.UnsupportedRegime, match="min"):
        dg.predicted_degree((-2, 4, 3), 4)
    with pytest.raises(dg.UnsupportedRegime, match="knot"):
        dg.predicted_degree((-5, 4, 4), 4)
    with pytest.raises(dg.UnsupportedRegime, match="w_0 < -1"):
        dg.predicted_degree((3, 4, 3), 4)
    assert dg.hypothesis_failure((-3, 4, 3)) is None


def test_cancellation_pair_leading_terms_kill_each_other():
    spec = PretzelSpec(W543)
    a = pretzel.tight_leading_term(spec, 4, (4, 2, 2))
    b = pretzel.tight_leading_term(spec, 4, (4, 1, 3))
    assert a.degree() == b.degree() == 78
    assert a.leading_sign() == -b.leading_sign()
    assert dg.cancellation_pair_gap(W543, 1) == -4


def test_fit_quadratic_exact():
    pts = [(N, F(3) * N * N - 7 * N + F(1, 2)) for N in (2, 5, 9, 12, 30)]
    assert dg.fit_quadratic_exact(pts) == (3, -7, F(1, 2))
    pts[-1] = (30, pts[-1][1] + 1)
    assert dg.fit_quadratic_exact(pts) is None
    with pytest.raises(ValueError):
        dg.fit_quadratic_exact(pts[:2])


def test_fit_unknot_degrees_are_linear():
    # degree of the color-N unknot polynomial is N - 1
    degs = [(N, F(pretzel.unknot_jones(N).degree())) for N in range(2, 9)]
    assert dg.fit_quadratic_exact(degs) == (0, 1, -1)


def test_fit_insufficient_and_corrupt_classes():
    degs = {N: dg.predicted_degree(W543, N) for N in range(2, 12)}
    with pytest.raises(ValueError, match="need at least 3"):
        dg.empirical_degree_fit(W543, degs)
    degs = {N: dg.predicted_degree(W543, N) for N in range(2, 51)}
    degs[47] += 1
    rep = dg.empirical_degree_fit(W543, degs)
    assert rep.jx[47 % 5] is None and rep.c[47 % 5] is None
    assert rep.jx[0] == F(-19, 5)


def test_mirror_degree_reflection():
    for w in [(-3, 3, 2), W543]:
        spec = PretzelSpec(w)
        mir = spec.mirror()
        for N in (2, 3):
            J = pretzel.colored_jones_statesum(spec, N)
            Jm = pretzel.colored_jones_statesum(mir, N)
            assert J.min_degree() == -Jm.degree()
            assert J.degree() == -Jm.min_degree()


def test_report_serialization():
    import json

    degs = {N: dg.predicted_degree(W543, N) for N in range(2, 18)}
    rep = dg.empirical_degree_fit(W543, degs)
    data = json.loads(rep.to_json())
    assert data["js"] == "4/5" and data["modulus"] == 5
    assert data["jx"]["0"] == "-19/5"
    assert len(data["rows"]) == 16
    rows = rep.csv_rows()
    assert rows[0] == ["N", "residue", "degree", "predicted", "match"]
    assert len(rows) == 17
    assert all(r[4] == "true" for r in rows[1:])
