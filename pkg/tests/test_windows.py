import random
from fractions import Fraction

import pytest

from hfree.algebras import (
    UEAWord,
    Weight,
    build_algebra,
    finite_irrep,
    gelfand_invariant,
    irrep_gl,
    make_automorphism,
    verma_hc_eigenvalue,
)
from hfree.modules import (
    central_fingerprint,
    dual_module,
    exponential_module,
    exponential_partner_verma,
    from_sp2n_M0,
    tensor_finite,
    twist,
)
from hfree.polys import Poly
from hfree.windows import (
    NoFit,
    WeightWindow,
    almost_equivalent,
    cuspidality_test,
    default_probe_catalog,
    essential_support,
    trace_map,
    trace_polynomial,
    trace_table,
    weighting,
    window_tensor,
    window_translate,
)


def sp4_window(base=(0, 0), radius=4):
    return weighting(from_sp2n_M0(2), Weight(base), radius=radius)


def sl2_exp_window(lam=(0,), base=(0,), radius=5):
    module = exponential_module((Fraction(1),), Weight(lam), frozenset())
    return weighting(module, Weight(base), radius=radius)


def h_sq_probe():
    # f e composite along the long root 2*eps_1 of sp(4)
    return UEAWord.from_labels(("e(-2,0)", "e(2,0)"), 1)


# -- weighting ---------------------------------------------------------------


def test_weighting_slot_count_and_dims():
    w = sp4_window(radius=4)
    assert len(w.slots()) == 9 * 9
    assert w.valid_slots() == w.slots()
    assert all(d == 1 for d in w.dims.values())


def test_weighting_weight_at():
    w = sp4_window()
    assert w.weight_at((0, 0)).coords == (0, 0)
    assert w.weight_at((1, -2)).coords == (1, -5)


def test_weighting_cartan_slot_matrices_are_scalar():
    w = sp4_window()
    for m in [(0, 0), (2, -1), (-3, 3)]:
        lam = w.weight_at(m)
        assert w.slot_matrix(m, "h1") == [[lam.coords[0]]]
        assert w.slot_matrix(m, "h2") == [[lam.coords[1]]]


def test_weighting_stores_action_at_target_weight():
    w = sp4_window()
    # 2*eps_1 = 2*alpha_1 + alpha_2, and the raising action is
    # (h1 - 1/2)(h1 - 3/2) read off at the target weight (2, 0)
    assert w.target_of((0, 0), "e(2,0)") == (2, 1)
    assert w.slot_matrix((0, 0), "e(2,0)") == [[Fraction(3, 4)]]


def test_weighting_boundary_matrices_absent():
    w = sp4_window(radius=2)
    assert w.slot_matrix((2, 2), "e(2,0)") is None
    assert w.slot_matrix((-2, 0), "e(-2,0)") is None


def _window_bracket_holds(window, module):
    alg = window.algebra
    labels = alg.labels
    for m in window.slots():
        for ix, x in enumerate(labels):
            for y in labels[ix + 1 :]:
                mx, my = window._q[x], window._q[y]
                lhs_first = window.slot_matrix(tuple(a + b for a, b in zip(m, my)), x)
                lhs_second = window.slot_matrix(m, y)
                rhs_first = window.slot_matrix(tuple(a + b for a, b in zip(m, mx)), y)
                rhs_second = window.slot_matrix(m, x)
                if None in (lhs_first, lhs_second, rhs_first, rhs_second):
                    continue
                dim = window.dims[m]
                tgt = tuple(a + b + c for a, b, c in zip(m, mx, my))
                got = [
                    [
                        sum(lhs_first[i][k] * lhs_second[k][j] for k in range(dim))
                        - sum(rhs_first[i][k] * rhs_second[k][j] for k in range(dim))
                        for j in range(dim)
                    ]
                    for i in range(dim)
                ]
                want = [[Fraction(0)] * dim for _ in range(dim)]
                for lab, coeff in alg.bracket_in_basis(x, y).items():
                    zmat = window.slot_matrix(m, lab)
                    if zmat is None:
                        return False
                    for i in range(dim):
                        for j in range(dim):
                            want[i][j] += coeff * zmat[i][j]
                if got != want:
                    return False
    return True


def test_window_level_bracket_consistency():
    w = sp4_window(radius=2)
    assert _window_bracket_holds(w, None)
    module = exponential_module((Fraction(2), Fraction(-1, 3)), Weight((1, 0)), frozenset({1}))
    we = weighting(module, Weight((Fraction(1, 5), 0)), radius=2)
    assert _window_bracket_holds(we, None)


# -- trace maps and fits -----------------------------------------------------


def test_trace_map_identity_counts_dimension():
    w = sp4_window()
    assert trace_map(w, UEAWord.identity(), (0, 0)) == 1


def test_trace_map_frozen_composite_values():
    w = sp4_window()
    u = h_sq_probe()
    assert trace_map(w, u, (0, 0)) == Fraction(3, 4)
    assert trace_map(w, u, (1, 0)) == Fraction(15, 4)


def test_trace_map_cartan_probe():
    w = sp4_window()
    u = UEAWord.from_labels(("h1",), 1)
    for m in [(0, 0), (1, -2), (-2, 3)]:
        assert trace_map(w, u, m) == w.weight_at(m).coords[0]


def test_trace_map_rejects_excursion_off_window():
    w = sp4_window(radius=2)
    with pytest.raises(ValueError):
        trace_map(w, h_sq_probe(), (2, 2))


def test_trace_table_rejects_nonzero_weight():
    w = sp4_window()
    with pytest.raises(ValueError):
        trace_table(w, UEAWord.from_labels(("e(2,0)",), 1))


def test_trace_table_covers_only_inner_slots():
    w = sp4_window(radius=2)
    table = trace_table(w, h_sq_probe())
    # the excursion needs e(2,0) from the slot and e(-2,0) back: slots whose
    # +2eps_1 neighbour (offset (2,1)) lies outside have no entry
    assert (0, 0) in table.values
    assert (2, 2) not in table.values


def test_trace_polynomial_recovers_central_quadratic():
    w = sp4_window()
    fit = trace_polynomial(w, h_sq_probe())
    n = w.algebra.n
    h1 = Poly.variable(n, 0)
    expected = h1 * h1 + h1.scale(2) + Poly.const(n, Fraction(3, 4))
    assert fit.poly == expected
    assert all(not r for r in fit.residuals.values())
    assert fit.holdout == sorted(set(fit.holdout) | set())[: len(fit.holdout)]
    assert len(fit.holdout) >= len(fit.train) // 4


def test_trace_polynomial_cartan_default_bound():
    w = sp4_window()
    fit = trace_polynomial(w, UEAWord.from_labels(("h2",), 1))
    assert fit.poly == Poly.variable(2, 1)


def test_trace_polynomial_holdout_fraction_stride():
    w = sp4_window()
    half = trace_polynomial(w, h_sq_probe(), holdout_fraction=Fraction(1, 2))
    assert len(half.holdout) >= len(half.train)


def test_trace_polynomial_gelfand_is_fingerprint_times_dim():
    w = sp4_window()
    module = from_sp2n_M0(2)
    fp = central_fingerprint(module, (2, 3))
    z2 = gelfand_invariant(w.algebra, 2)
    z3 = gelfand_invariant(w.algebra, 3)
    for m in [(0, 0), (2, -1), (-1, 1)]:
        assert trace_map(w, z2, m) == fp[2] * module.rank
        assert trace_map(w, z3, m) == fp[3] * module.rank
    fit = trace_polynomial(w, z2)
    assert fit.poly == Poly.const(2, fp[2])


def test_trace_polynomial_nofit_on_tampered_window():
    w = sp4_window()
    matrices = dict(w.matrices)
    matrices[((0, 0), "e(2,0)")] = [[Fraction(99)]]
    bad = WeightWindow(w.algebra, w.base, w.dims, matrices, w.entry_degrees)
    with pytest.raises(NoFit) as err:
        trace_polynomial(bad, h_sq_probe())
    assert err.value.slots


# -- cuspidality -------------------------------------------------------------


def test_cuspidality_m0_long_root_determinants():
    w = sp4_window()
    report = cuspidality_test(w)
    assert report.cuspidal and not report.degenerate
    n = w.algebra.n
    h1 = Poly.variable(n, 0)
    up = h1 * h1 + h1.scale(2) + Poly.const(n, Fraction(3, 4))
    down = h1 * h1 - h1.scale(2) + Poly.const(n, Fraction(3, 4))
    assert report.det_polys["e(2,0)"] == up
    assert report.det_polys["e(-2,0)"] == down
    assert all(not zs for zs in report.zero_slots.values())


def test_cuspidality_detects_zero_slots_on_shifted_base():
    w = sp4_window(base=(Fraction(-1, 2), 0), radius=3)
    report = cuspidality_test(w)
    assert not report.cuspidal
    zeros = report.zero_slots["e(2,0)"]
    assert zeros
    assert all(c[0] in (Fraction(-3, 2), Fraction(-1, 2)) for c in zeros)


def test_cuspidality_degenerate_for_zero_rank():
    alg = build_algebra("C", 2)
    w = WeightWindow(alg, Weight((0, 0)), {(0, 0): 0}, {}, {lab: 0 for lab in alg.labels})
    report = cuspidality_test(w)
    assert report.degenerate and not report.cuspidal


def test_cuspidality_exponential_nonintegral_slice():
    w = sl2_exp_window(base=(Fraction(1, 3),))
    report = cuspidality_test(w)
    assert report.cuspidal
    # integral slices hit the determinant zeros at h1 in {0, -2}
    w0 = sl2_exp_window(base=(0,))
    assert not cuspidality_test(w0).cuspidal


# -- tensoring ---------------------------------------------------------------


def test_window_tensor_matches_module_tensor_exactly():
    alg = build_algebra("C", 2)
    module = from_sp2n_M0(2)
    rep = finite_irrep(alg, (1, 0))
    w = weighting(module, Weight((0, 0)), radius=3)
    wt = window_tensor(w, rep)
    direct = weighting(tensor_finite(module, rep), Weight(rep.hw), radius=3)
    assert wt.base.coords == direct.base.coords
    assert wt.partial
    for m in wt.valid_slots():
        assert wt.dims[m] == direct.dims[m] == rep.dim
        for lab in alg.labels:
            ours = wt.slot_matrix(m, lab)
            if ours is not None:
                assert ours == direct.slot_matrix(m, lab)


def test_window_tensor_trace_tables_agree_on_interior():
    alg = build_algebra("C", 2)
    module = from_sp2n_M0(2)
    rep = finite_irrep(alg, (0, 1))
    w = weighting(module, Weight((Fraction(1, 7), 0)), radius=3)
    wt = window_tensor(w, rep)
    direct = weighting(tensor_finite(module, rep), wt.base, radius=3)
    for name, probe in default_probe_catalog(alg):
        ours = trace_table(wt, probe)
        theirs = trace_table(direct, probe)
        assert ours.values
        for m, v in ours.values.items():
            assert theirs.values[m] == v, name


def test_window_tensor_rejects_foreign_rep():
    w = sl2_exp_window()
    with pytest.raises(ValueError):
        window_tensor(w, irrep_gl(2, (1, 0)))


# -- twisting transport ------------------------------------------------------


def test_tau_twist_transport_of_traces():
    alg = build_algebra("C", 2)
    module = from_sp2n_M0(2)
    tau = make_automorphism(alg, "tau", None)
    w = weighting(module, Weight((0, 0)), radius=3)
    wt = weighting(twist(module, tau), Weight((0, 0)), radius=3)
    word = ("e(-2,0)", "e(2,0)")
    u = UEAWord.from_labels(word, 1)
    imgs = [tau.image_label(lab) for lab in word]
    coeff = Fraction(1)
    for c, _ in imgs:
        coeff *= c
    u_tau = UEAWord.from_labels(tuple(lab for _, lab in imgs), coeff)
    for m in [(0, 0), (1, 0), (-1, 2)]:
        flipped = tuple(-c for c in m)
        assert trace_map(wt, u, m) == trace_map(w, u_tau, flipped)


def test_tau_twist_is_window_involution():
    alg = build_algebra("C", 2)
    module = from_sp2n_M0(2)
    tau = make_automorphism(alg, "tau", None)
    again = twist(twist(module, tau), tau)
    w = weighting(module, Weight((1, -1)), radius=2)
    w2 = weighting(again, Weight((1, -1)), radius=2)
    assert w.matrices == w2.matrices


# -- translation -------------------------------------------------------------


def test_window_translate_regular_to_regular_keeps_rank_one():
    w = sl2_exp_window()
    out = window_translate(w, Weight((0,)), Weight((2,)))
    assert out.base.coords == (2,)
    assert sorted(out.dims) == [(k,) for k in range(-4, 3)]
    assert set(out.dims.values()) == {1}
    z2 = gelfand_invariant(out.algebra, 2)
    want = verma_hc_eigenvalue(out.algebra, z2, Weight((2,)))
    assert trace_map(out, z2, (0,)) == want


def test_window_translate_identity_is_restriction():
    w = sl2_exp_window(radius=4)
    out = window_translate(w, Weight((0,)), Weight((0,)))
    assert set(out.dims.values()) == {1}
    for key, mat in out.matrices.items():
        assert mat == w.matrices[key]


def test_window_translate_preserves_cuspidality():
    w = sl2_exp_window(base=(Fraction(1, 3),))
    assert cuspidality_test(w).cuspidal
    out = window_translate(w, Weight((0,)), Weight((2,)))
    assert cuspidality_test(out).cuspidal
    n = out.algebra.n
    h1 = Poly.variable(n, 0)
    expected = h1 * h1 + h1.scale(2) - Poly.const(n, 8)
    assert cuspidality_test(out).det_polys["E(1,2)"] == expected.scale(Fraction(-1, 4))


def test_window_translate_rejects_incompatible_weights():
    w = sl2_exp_window()
    with pytest.raises(ValueError):
        window_translate(w, Weight((0,)), Weight((-1,)))


def test_window_translate_rejects_wrong_character():
    w = sl2_exp_window()
    with pytest.raises(ValueError) as err:
        window_translate(w, Weight((-1,)), Weight((-1,)))
    assert "central character" in str(err.value)


# -- almost-equivalence ------------------------------------------------------


def test_exponential_window_matches_partner_highest_weight_slice():
    alg = build_algebra("A", 1)
    b = (Fraction(1),)
    lam = Weight((0,))
    we = weighting(exponential_module(b, lam, frozenset()), Weight((0,)), radius=5)
    wp = weighting(exponential_partner_verma(alg, b, lam), Weight((0,)), radius=5)
    verdict = almost_equivalent(we, wp, default_probe_catalog(alg))
    assert verdict.equivalent
    assert verdict.exceptional == []
    assert verdict.label == "evidence"


def test_almost_equivalent_self():
    w = sp4_window(radius=2)
    verdict = almost_equivalent(w, w, default_probe_catalog(w.algebra))
    assert verdict.equivalent and not verdict.exceptional


def test_almost_equivalent_distinguishes_fingerprints():
    alg = build_algebra("A", 1)
    w0 = sl2_exp_window(lam=(0,), radius=4)
    w2 = sl2_exp_window(lam=(2,), radius=4)
    verdict = almost_equivalent(w0, w2, default_probe_catalog(alg))
    assert not verdict.equivalent
    assert len(verdict.exceptional) == 9


def test_almost_equivalent_tolerates_boundary_noise():
    w = sp4_window(radius=2)
    matrices = dict(w.matrices)
    matrices[((-2, -2), "h1")] = [[Fraction(1000)]]
    noisy = WeightWindow(w.algebra, w.base, w.dims, matrices, w.entry_degrees)
    verdict = almost_equivalent(w, noisy, default_probe_catalog(w.algebra))
    assert verdict.exceptional
    assert verdict.equivalent  # single corrupted corner fits on the shell


def test_almost_equivalent_requires_common_coset():
    w1 = sl2_exp_window(base=(0,), radius=2)
    w2 = sl2_exp_window(base=(Fraction(1, 3),), radius=2)
    with pytest.raises(ValueError):
        almost_equivalent(w1, w2, [])


def test_almost_equivalent_requires_overlap():
    w1 = sl2_exp_window(base=(0,), radius=1)
    w2 = sl2_exp_window(base=(40,), radius=1)
    with pytest.raises(ValueError):
        almost_equivalent(w1, w2, [])


# -- support and catalog -----------------------------------------------------


def test_essential_support_flat_window():
    w = sp4_window(radius=2)
    assert len(essential_support(w)) == 25


def test_essential_support_picks_max_dimension():
    alg = build_algebra("A", 1)
    w = WeightWindow(
        alg,
        Weight((0,)),
        {(0,): 1, (1,): 2},
        {},
        {lab: 0 for lab in alg.labels},
    )
    assert essential_support(w) == [w.weight_at((1,)).coords]


def test_default_probe_catalog_names():
    a1 = build_algebra("A", 1)
    assert [name for name, _ in default_probe_catalog(a1)] == [
        "h1",
        "E(1,2)*E(2,1)",
        "E(2,1)*E(1,2)",
        "gelfand2",
    ]
    c2 = build_algebra("C", 2)
    names = [name for name, _ in default_probe_catalog(c2)]
    assert names[:2] == ["h1", "h2"]
    assert names[-2:] == ["gelfand2", "gelfand3"]
    assert len(names) == 8


def test_probe_words_have_weight_zero():
    for alg in (build_algebra("A", 2), build_algebra("C", 2)):
        for _, probe in default_probe_catalog(alg):
            assert probe.is_zero_weight(alg)


# -- randomized coherence of stored transitions ------------------------------


def test_seeded_slot_transitions_match_module_action():
    rng = random.Random(20240817)
    module = exponential_module((Fraction(3), Fraction(-2)), Weight((2, 0)), frozenset({2}))
    w = weighting(module, Weight((Fraction(1, 2), Fraction(-1, 3))), radius=3)
    labels = list(w.algebra.labels)
    for _ in range(40):
        m = tuple(rng.randint(-3, 3) for _ in range(2))
        lab = rng.choice(labels)
        target = w.target_of(m, lab)
        stored = w.slot_matrix(m, lab)
        if max(abs(c) for c in target) > 3:
            assert stored is None
        else:
            point = w.weight_at(target).coords
            assert stored == module.action[lab].evaluate(point)
