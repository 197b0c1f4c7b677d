import itertools
import random
from fractions import Fraction

import pytest

from hfree.algebras import (
    Weight,
    build_algebra,
    finite_irrep,
    gelfand_invariant,
    irrep_gl,
    is_zero_mat,
    madd,
    make_automorphism,
    mcomm,
    mscale,
    msub,
    mzeros,
    parabolic_complement,
    same_central_character,
    translation_compatible,
    verma_hc_eigenvalue,
    weyl_dim,
)


def rand_weight(rng, n, den=(1, 2, 3, 7)):
    return Weight([Fraction(rng.randint(-4, 4), rng.choice(den)) for _ in range(n)])


# ---------------------------------------------------------------------------
# structure of the algebras themselves


def test_dimensions_and_labels():
    a2 = build_algebra("A", 2)
    assert a2.labels == ["h1", "h2", "E(1,2)", "E(1,3)", "E(2,1)", "E(2,3)", "E(3,1)", "E(3,2)"]
    assert len(build_algebra("A", 3).labels) == 15
    assert len(build_algebra("C", 2).labels) == 10
    assert len(build_algebra("C", 3).labels) == 21


def test_type_a_matrices_traceless():
    a = build_algebra("A", 2)
    for lab in a.labels:
        m = a.mat(lab)
        assert sum(m[i][i] for i in range(a.N)) == 0


def test_type_c_matrices_preserve_symplectic_form():
    c = build_algebra("C", 2)
    n, N = c.n, c.N
    J = mzeros(N, N)
    for i in range(n):
        J[i][n + i] = Fraction(1)
        J[n + i][i] = Fraction(-1)
    for lab in c.labels:
        x = c.mat(lab)
        xt = [list(col) for col in zip(*x)]
        lhs = madd(
            [[sum(a * b for a, b in zip(r, col)) for col in zip(*J)] for r in xt],
            [[sum(a * b for a, b in zip(r, col)) for col in zip(*x)] for r in J],
        )
        assert is_zero_mat(lhs)


def test_bracket_closure():
    rng = random.Random(20240814)
    for fam, n in [("A", 2), ("C", 2)]:
        alg = build_algebra(fam, n)
        for _ in range(30):
            x = rng.choice(alg.labels)
            y = rng.choice(alg.labels)
            expansion = alg.bracket_in_basis(x, y)
            recon = mzeros(alg.N, alg.N)
            for lab, c in expansion.items():
                recon = madd(recon, mscale(alg.mat(lab), c))
            assert is_zero_mat(msub(recon, mcomm(alg.mat(x), alg.mat(y))))


def test_cartan_matrices():
    def cartan(alg):
        return [
            [
                alg.coroot_value(alg.simple_root_labels[j], alg.simple_roots[i])
                for j in range(alg.n)
            ]
            for i in range(alg.n)
        ]

    assert cartan(build_algebra("A", 2)) == [[2, -1], [-1, 2]]
    assert cartan(build_algebra("C", 2)) == [[2, -1], [-2, 2]]
    assert cartan(build_algebra("C", 3)) == [[2, -1, 0], [-1, 2, -1], [0, -2, 2]]


def test_root_counts_and_positivity():
    for fam, n, count in [("A", 1, 2), ("A", 2, 6), ("A", 3, 12), ("C", 2, 8), ("C", 3, 18)]:
        alg = build_algebra(fam, n)
        assert len(alg.root_labels) == count
        assert len(alg.positive_root_labels) == count // 2
        # roots come in opposite pairs
        for lab in alg.root_labels:
            assert alg.root_label(-alg.weight_of(lab)) in alg.root_labels


def test_sp4_long_root_normalization():
    c = build_algebra("C", 2)
    e = c.mat("e(2,0)")
    f = c.mat("e(-2,0)")
    h = mcomm(e, f)
    coeffs = c.cartan_coeffs(h)
    assert coeffs == [-4, 0]
    assert c.coroot_value("e(2,0)", Weight([1, 0])) == 1


def test_rho():
    assert build_algebra("A", 2).rho.coords == (1, 1)
    assert build_algebra("C", 3).rho.coords == (3, 2, 1)


def test_fundamental_and_eps_round_trips():
    rng = random.Random(99)
    for fam, n in [("A", 2), ("A", 3), ("C", 2), ("C", 3)]:
        alg = build_algebra(fam, n)
        assert alg.omega(1) == alg.from_fundamental([1] + [0] * (n - 1))
        for _ in range(10):
            lam = rand_weight(rng, n)
            assert alg.from_fundamental(alg.fundamental_coords(lam)) == lam
            assert alg.from_eps(alg.eps_coords(lam)) == lam


def test_omega_values_type_c():
    c = build_algebra("C", 2)
    assert c.omega(1).coords == (1, 0)
    assert c.omega(2).coords == (1, 1)


def test_root_lattice_membership():
    a = build_algebra("A", 2)
    assert a.weight_in_root_lattice(a.simple_roots[0]) == (1, 0)
    assert a.weight_in_root_lattice(Weight([3, 0])) == (2, 1)
    assert a.weight_in_root_lattice(a.omega(1)) is None


# ---------------------------------------------------------------------------
# Weyl group and actions


def test_weyl_group_orders():
    assert len(build_algebra("A", 1).weyl_elements()) == 2
    assert len(build_algebra("A", 2).weyl_elements()) == 6
    assert len(build_algebra("A", 3).weyl_elements()) == 24
    assert len(build_algebra("C", 2).weyl_elements()) == 8
    assert len(build_algebra("C", 3).weyl_elements()) == 48


def test_reduced_words():
    a2 = build_algebra("A", 2)
    assert sorted(w.word for w in a2.weyl_elements()) == [
        (),
        (1,),
        (1, 2),
        (1, 2, 1),
        (2,),
        (2, 1),
    ]
    c2 = build_algebra("C", 2)
    words = sorted(w.word for w in c2.weyl_elements())
    assert (1, 2, 1, 2) in words and len(max(words, key=len)) == 4


def test_simple_reflection_formula():
    rng = random.Random(4242)
    for fam, n in [("A", 2), ("C", 2)]:
        alg = build_algebra(fam, n)
        for _ in range(10):
            lam = rand_weight(rng, n)
            for i in range(1, n + 1):
                twice = alg.simple_reflection(i, alg.simple_reflection(i, lam))
                assert twice == lam


def test_dot_action_values():
    a1 = build_algebra("A", 1)
    assert a1.dot_action((1,), Weight([0])).coords == (-2,)
    a2 = build_algebra("A", 2)
    assert a2.dot_action((1,), Weight([0, 0])).coords == (-2, 1)
    assert sorted(a2.dot_orbit(Weight([0, 0]))) == [
        (-3, 0),
        (-2, -2),
        (-2, 1),
        (0, -3),
        (0, 0),
        (1, -2),
    ]


def test_same_central_character():
    a2 = build_algebra("A", 2)
    rho = a2.rho
    assert same_central_character(a2, rho, a2.dot_action((1, 2), rho))
    assert not same_central_character(a2, rho, rho + a2.omega(1))


def test_dot_stabilizer_sizes():
    a1 = build_algebra("A", 1)
    assert len(a1.dot_stabilizer(Weight([0]))) == 1
    assert len(a1.dot_stabilizer(Weight([-1]))) == 2  # lam + rho = 0 is singular
    a2 = build_algebra("A", 2)
    assert len(a2.dot_stabilizer(Weight([-1, 0]))) == 2


def test_translation_compatible():
    a1 = build_algebra("A", 1)
    assert not translation_compatible(a1, Weight([0]), Weight([-1]))
    assert not translation_compatible(a1, Weight([0]), Weight([-2]))
    assert translation_compatible(a1, Weight([2]), Weight([0]))
    assert translation_compatible(a1, Weight([-1]), Weight([-1]))
    assert not translation_compatible(a1, Weight([0]), Weight([Fraction(1, 2)]))
    a2 = build_algebra("A", 2)
    assert translation_compatible(a2, a2.rho, Weight([0, 0]))


def test_dominant_conjugate():
    a2 = build_algebra("A", 2)
    assert a2.dominant_conjugate(Weight([-1, -1])).coords == (1, 1)
    c2 = build_algebra("C", 2)
    assert c2.dominant_conjugate(Weight([-1, 2])).coords == (2, 1)


def test_integrality_and_cone():
    c2 = build_algebra("C", 2)
    assert c2.is_integral(Weight([1, 0]))
    assert not c2.is_integral(Weight([Fraction(1, 2), 0]))
    # omega^+ has half-integral coordinates but integral values only on the
    # short simple coroot
    wplus = Weight([Fraction(-1, 2), Fraction(-1, 2)])
    assert not c2.is_integral(wplus)
    a1 = build_algebra("A", 1)
    assert a1.in_dominant_cone(Weight([0]))
    assert a1.in_dominant_cone(Weight([Fraction(-3, 2)]))
    assert not a1.in_dominant_cone(Weight([-1]))


# ---------------------------------------------------------------------------
# dimension formula and explicit irreps


def test_weyl_dim_values():
    a2 = build_algebra("A", 2)
    assert weyl_dim(a2, [1, 2], a2.rho) == 8
    assert weyl_dim(a2, [1, 2], a2.omega(1)) == 3
    assert weyl_dim(a2, [1, 2], Weight([2, 0])) == 6
    assert weyl_dim(a2, [1], a2.omega(1)) == 2
    assert weyl_dim(a2, [], a2.omega(1)) == 1
    c2 = build_algebra("C", 2)
    assert weyl_dim(c2, [1, 2], c2.omega(1)) == 4
    assert weyl_dim(c2, [1, 2], c2.omega(2)) == 5
    assert weyl_dim(c2, [1, 2], c2.from_fundamental([1, 1])) == 16
    assert weyl_dim(build_algebra("C", 3), [1, 2, 3], build_algebra("C", 3).omega(1)) == 6


def test_weyl_dim_levi_ignores_off_levi_coordinates():
    a2 = build_algebra("A", 2)
    lam = Weight([2, Fraction(1, 3)])
    assert weyl_dim(a2, [1], lam) == 3


def test_weyl_dim_rejects_non_dominant():
    a2 = build_algebra("A", 2)
    with pytest.raises(ValueError):
        weyl_dim(a2, [1, 2], Weight([-1, 0]))
    with pytest.raises(ValueError):
        weyl_dim(a2, [1], Weight([Fraction(1, 2), 0]))


def test_irrep_gl_dimensions_and_weights():
    nat = irrep_gl(2, (1, 0))
    assert nat.dim == 2
    assert nat.weights == [(1, 0), (0, 1)]
    sym2 = irrep_gl(2, (2, 0))
    assert sym2.dim == 3
    det = irrep_gl(2, (1, 1))
    assert det.dim == 1
    assert det.action["E(1,1)"] == [[1]]
    assert det.action["E(1,2)"] == [[0]]
    shifted = irrep_gl(2, (Fraction(9, 2), Fraction(5, 2)))
    assert shifted.dim == 3
    assert shifted.weights[0] == (Fraction(9, 2), Fraction(5, 2))
    assert irrep_gl(3, (2, 1, 0)).dim == 8


def test_irrep_gl_commutation_relations():
    rng = random.Random(7)
    rep = irrep_gl(3, (Fraction(7, 3), Fraction(4, 3), Fraction(1, 3)))
    labels = [(i, j) for i in range(1, 4) for j in range(1, 4)]
    for _ in range(20):
        (i, j), (k, l) = rng.choice(labels), rng.choice(labels)
        a = rep.action["E(%d,%d)" % (i, j)]
        b = rep.action["E(%d,%d)" % (k, l)]
        expect = mzeros(rep.dim, rep.dim)
        if j == k:
            expect = madd(expect, rep.action["E(%d,%d)" % (i, l)])
        if l == i:
            expect = msub(expect, rep.action["E(%d,%d)" % (k, j)])
        assert is_zero_mat(msub(mcomm(a, b), expect))


def test_irrep_gl_rejects_non_dominant():
    with pytest.raises(ValueError):
        irrep_gl(2, (0, 1))
    with pytest.raises(ValueError):
        irrep_gl(2, (Fraction(1, 2), 0))


def test_finite_irrep_dimensions():
    a1 = build_algebra("A", 1)
    rep = finite_irrep(a1, (3,))
    assert rep.dim == 4
    assert sorted(w[0] for w in rep.weights) == [-3, -1, 1, 3]
    a2 = build_algebra("A", 2)
    assert finite_irrep(a2, (1, 1)).dim == 8
    assert finite_irrep(a2, (0, 0)).dim == 1
    c2 = build_algebra("C", 2)
    for coeffs in [(1, 0), (0, 1), (1, 1)]:
        rep = finite_irrep(c2, coeffs)
        assert rep.dim == weyl_dim(c2, [1, 2], c2.from_fundamental(coeffs))


def test_finite_irrep_bracket_compatibility():
    rng = random.Random(130)
    for fam, n, coeffs in [("A", 2, (1, 0)), ("C", 2, (0, 1))]:
        alg = build_algebra(fam, n)
        rep = finite_irrep(alg, coeffs)
        for _ in range(25):
            x = rng.choice(alg.labels)
            y = rng.choice(alg.labels)
            expect = mzeros(rep.dim, rep.dim)
            for lab, c in alg.bracket_in_basis(x, y).items():
                expect = madd(expect, mscale(rep.action[lab], c))
            assert is_zero_mat(msub(mcomm(rep.action[x], rep.action[y]), expect))


def test_finite_irrep_weights_match_cartan_action():
    c2 = build_algebra("C", 2)
    rep = finite_irrep(c2, (1, 0))
    for i, lab in enumerate(c2.cartan_labels):
        m = rep.action[lab]
        for k in range(rep.dim):
            assert m[k][k] == rep.weights[k][i]
            for l in range(rep.dim):
                if k != l:
                    assert m[k][l] == 0


# ---------------------------------------------------------------------------
# central elements and Harish-Chandra eigenvalues


def test_gelfand_degree_two_sl2():
    a1 = build_algebra("A", 1)
    z = gelfand_invariant(a1, 2)
    assert z.terms == {
        ("h1", "h1"): Fraction(1, 2),
        ("E(1,2)", "E(2,1)"): Fraction(1),
        ("E(2,1)", "E(1,2)"): Fraction(1),
    }
    for lam in [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-3)]:
        assert verma_hc_eigenvalue(a1, z, Weight([lam])) == lam * lam / 2 + lam


def test_gelfand_invariants_have_weight_zero():
    for fam, n, k in [("A", 2, 2), ("A", 2, 3), ("C", 2, 2), ("C", 2, 3)]:
        alg = build_algebra(fam, n)
        assert gelfand_invariant(alg, k).is_zero_weight(alg)


def test_hc_eigenvalues_frozen():
    a2 = build_algebra("A", 2)
    assert verma_hc_eigenvalue(a2, gelfand_invariant(a2, 2), Weight([1, 0])) == Fraction(8, 3)
    assert verma_hc_eigenvalue(a2, gelfand_invariant(a2, 3), Weight([1, 0])) == Fraction(56, 9)
    c2 = build_algebra("C", 2)
    assert verma_hc_eigenvalue(c2, gelfand_invariant(c2, 2), Weight([1, 0])) == Fraction(5, 2)
    assert verma_hc_eigenvalue(c2, gelfand_invariant(c2, 3), Weight([1, 0])) == Fraction(15, 4)
    assert verma_hc_eigenvalue(c2, gelfand_invariant(c2, 2), Weight([0, 0])) == 0


def test_hc_eigenvalues_dot_invariant():
    rng = random.Random(20240811)
    for fam, n in [("A", 2), ("C", 2)]:
        alg = build_algebra(fam, n)
        z2 = gelfand_invariant(alg, 2)
        z3 = gelfand_invariant(alg, 3)
        for _ in range(3):
            lam = rand_weight(rng, n)
            for z in (z2, z3):
                vals = {verma_hc_eigenvalue(alg, z, Weight(c)) for c in alg.dot_orbit(lam)}
                assert len(vals) == 1


def test_hc_rejects_nonzero_weight():
    a1 = build_algebra("A", 1)
    from hfree.algebras import UEAWord

    with pytest.raises(ValueError):
        verma_hc_eigenvalue(a1, UEAWord.from_labels(("E(1,2)",)), Weight([0]))


def test_casimir_on_finite_irrep_is_scalar():
    # the degree-2 element acts on L(m omega_1) by the same scalar as on the
    # Verma module with that highest weight
    a1 = build_algebra("A", 1)
    z = gelfand_invariant(a1, 2)
    for m in (1, 2, 3):
        rep = finite_irrep(a1, (m,))
        total = mzeros(rep.dim, rep.dim)
        for word, c in z.terms.items():
            prod = [[Fraction(i == j) for j in range(rep.dim)] for i in range(rep.dim)]
            for lab in word:
                prod = [
                    [sum(prod[i][k] * rep.action[lab][k][j] for k in range(rep.dim)) for j in range(rep.dim)]
                    for i in range(rep.dim)
                ]
            total = madd(total, mscale(prod, c))
        expect = verma_hc_eigenvalue(a1, z, Weight([m]))
        assert all(
            total[i][j] == (expect if i == j else 0)
            for i in range(rep.dim)
            for j in range(rep.dim)
        )


# ---------------------------------------------------------------------------
# automorphisms


def test_tau_images():
    a2 = build_algebra("A", 2)
    tau = make_automorphism(a2, "tau")
    assert tau.basis_map["h1"] == {"h1": Fraction(-1)}
    assert tau.basis_map["E(1,2)"] == {"E(2,1)": Fraction(-1)}
    assert tau.preserves_h
    assert tau.weight_substitution(Weight([2, 3])).coords == (-2, -3)


def test_tau_is_involution():
    for fam, n in [("A", 2), ("C", 2)]:
        alg = build_algebra(fam, n)
        tau = make_automorphism(alg, "tau")
        for lab in alg.labels:
            back = tau.apply_matrix(tau.apply_matrix(alg.mat(lab)))
            assert is_zero_mat(msub(back, alg.mat(lab)))


def test_theta_images_sl2():
    a1 = build_algebra("A", 1)
    th = make_automorphism(a1, "theta", [3])
    assert th.basis_map["h1"] == {"h1": Fraction(1), "E(2,1)": Fraction(-6)}
    assert th.basis_map["E(1,2)"] == {
        "h1": Fraction(3),
        "E(1,2)": Fraction(1),
        "E(2,1)": Fraction(-9),
    }
    assert th.basis_map["E(2,1)"] == {"E(2,1)": Fraction(1)}
    assert not th.preserves_h


def test_automorphisms_preserve_bracket():
    rng = random.Random(55)
    a2 = build_algebra("A", 2)
    c2 = build_algebra("C", 2)
    maps = [
        make_automorphism(a2, "tau"),
        make_automorphism(a2, "theta", [1, Fraction(-2, 3)]),
        make_automorphism(a2, "diag", [1, 2, Fraction(1, 3)]),
        make_automorphism(c2, "tau"),
        make_automorphism(c2, "diag", [2, 3]),
    ]
    for auto in maps:
        alg = auto.algebra
        for _ in range(20):
            x, y = rng.choice(alg.labels), rng.choice(alg.labels)
            lhs = auto.apply_matrix(mcomm(alg.mat(x), alg.mat(y)))
            rhs = mcomm(auto.apply_matrix(alg.mat(x)), auto.apply_matrix(alg.mat(y)))
            assert is_zero_mat(msub(lhs, rhs))


def test_theta_composition_inverse():
    a1 = build_algebra("A", 1)
    th = make_automorphism(a1, "theta", [3])
    back = make_automorphism(a1, "theta", [-3])
    for lab in a1.labels:
        m = th.apply_matrix(back.apply_matrix(a1.mat(lab)))
        assert is_zero_mat(msub(m, a1.mat(lab)))


def test_diag_scales_root_vectors():
    c2 = build_algebra("C", 2)
    ph = make_automorphism(c2, "diag", [2, 3])
    assert ph.basis_map["e(2,0)"] == {"e(2,0)": Fraction(4)}
    assert ph.basis_map["e(1,-1)"] == {"e(1,-1)": Fraction(2, 3)}
    assert ph.preserves_h
    assert ph.weight_substitution(Weight([5, 7])).coords == (5, 7)


def test_automorphism_errors():
    a2 = build_algebra("A", 2)
    c2 = build_algebra("C", 2)
    with pytest.raises(ValueError):
        make_automorphism(c2, "theta", [1, 1])
    with pytest.raises(ValueError):
        make_automorphism(a2, "theta", [1, 0])
    with pytest.raises(ValueError):
        make_automorphism(a2, "diag", [1, 0, 1])
    with pytest.raises(ValueError):
        make_automorphism(a2, "nope")


# ---------------------------------------------------------------------------
# parabolic complements


def test_parabolic_complement_dimension():
    a2 = build_algebra("A", 2)
    pc = parabolic_complement(a2, [1, 1])
    assert pc.dim_q == 6
    assert len(pc.q_tags) == 6


def test_parabolic_complement_decompose_reconstructs():
    a2 = build_algebra("A", 2)
    pc = parabolic_complement(a2, [2, Fraction(-1, 3)])
    for lab in a2.labels:
        h_coeffs, q_coords = pc.decompose(a2.mat(lab))
        recon = mzeros(a2.N, a2.N)
        for c, hl in zip(h_coeffs, a2.cartan_labels):
            recon = madd(recon, mscale(a2.mat(hl), c))
        for c, qm in zip(q_coords, pc.q_mats):
            recon = madd(recon, mscale(qm, c))
        assert is_zero_mat(msub(recon, a2.mat(lab)))


def test_parabolic_complement_errors():
    with pytest.raises(ValueError):
        parabolic_complement(build_algebra("C", 2), [1, 1])
    with pytest.raises(ValueError):
        parabolic_complement(build_algebra("A", 2), [1, 0])
