import numpy as np
import pytest

from cprojective import gfp, modrep, perfect, randomgen
from cprojective.complexes import ChainComplex, concentrated, direct_sum_complex, homology, is_minimal
from cprojective.corpus import load_ring


def _labels(A, pairs):
    return sorted(p.label(A) for p in pairs)


def test_find_pairs_r2(r2):
    assert _labels(r2, perfect.find_exact_zero_divisors(r2)) == ["(x + y, x + y)", "(x, x)", "(y, y)"]


def test_find_pairs_r1(r1):
    assert _labels(r1, perfect.find_exact_zero_divisors(r1)) == ["(x, x)"]


def test_find_pairs_empty(r3, gf2, omega3):
    assert perfect.find_exact_zero_divisors(r3) == []
    assert perfect.find_exact_zero_divisors(r3, omega3) == []
    assert perfect.find_exact_zero_divisors(gf2) == []


def test_find_pairs_gf3(r2_gf3):
    labels = _labels(r2_gf3, perfect.find_exact_zero_divisors(r2_gf3))
    assert "(x, x)" in labels and "(y, y)" in labels


def _span_eq(U, V, p):
    return modrep.canonical_key(U, p) == modrep.canonical_key(V, p)


@pytest.mark.parametrize("rid", ["r1", "r2", "r2_gf3"])
def test_kernel_identities(rid):
    A = load_ring(rid)
    R = modrep.ring_module(A)
    for C in (R, modrep.dual_of_ring(A)):
        for pair in perfect.find_exact_zero_divisors(A, C):
            p = A.p
            for M, kx, ky in ((R, pair.ker_x_R, pair.ker_y_R), (C, pair.ker_x_C, pair.ker_y_C)):
                assert _span_eq(kx, gfp.image_basis(M.element_matrix(pair.y), p), p)
                assert _span_eq(ky, gfp.image_basis(M.element_matrix(pair.x), p), p)
                # recompute the kernels directly
                assert _span_eq(kx, gfp.kernel_basis(M.element_matrix(pair.x), p), p)
                assert _span_eq(ky, gfp.kernel_basis(M.element_matrix(pair.y), p), p)


def test_make_pair_validates(r2):
    pair = perfect.make_pair(r2, "x", "x")
    assert pair.label(r2) == "(x, x)"
    with pytest.raises(ValueError):
        perfect.make_pair(r2, "x", "y")


def test_search_space_guard(r2):
    class Big:
        p, d = 2, 21

    with pytest.raises(perfect.SearchSpaceExceeded):
        perfect.find_exact_zero_divisors(Big)  # type: ignore[arg-type]


# -- periodic complexes ----------------------------------------------------------------


def test_periodic_n0(r2):
    R = modrep.ring_module(r2)
    P = perfect.build_periodic_complex(R, perfect.make_pair(r2, "x", "x"), 0)
    assert P.complex.length() == 0 and P.ranks == [1]


def test_periodic_n1_r1(r1):
    R = modrep.ring_module(r1)
    T = perfect.build_periodic_complex(R, perfect.make_pair(r1, "x", "x"), 1).complex
    H0 = homology(T, 0)
    Q = modrep.quotient_by_element(R, r1.element("x")).module
    assert modrep.module_iso(H0, Q) is not None
    # nothing maps into the top degree, so H_1 = ker x = xC, a copy of k
    H1 = homology(T, 1)
    assert modrep.module_iso(H1, modrep.residue_field(r1)) is not None
    # one step longer and degree 1 becomes exact
    T2 = perfect.build_periodic_complex(R, perfect.make_pair(r1, "x", "x"), 2).complex
    assert T2.homology_dim(1) == 0


def test_periodic_n3_r2(r2):
    R = modrep.ring_module(r2)
    pair = perfect.make_pair(r2, "x", "x")
    T = perfect.build_periodic_complex(R, pair, 3).complex
    x = r2.mult_matrix(r2.element("x"))
    assert all(np.array_equal(T.d(i), x) for i in (1, 2, 3))
    assert is_minimal(T)
    assert [T.homology_dim(i) for i in (1, 2)] == [0, 0]
    assert T.homology_dim(0) == 2


def test_free_periodic_complex(r2):
    F = perfect.periodic_free_complex(r2, perfect.make_pair(r2, "y", "y"), 5)
    assert F.is_exact(range(-1, 5))


# -- ex3 ---------------------------------------------------------------------------------


def test_ex3_r2(r2):
    rep = perfect.ex3_verify(r2, modrep.ring_module(r2), perfect.make_pair(r2, "x", "x"), 4)
    assert rep.passed, rep.checks
    assert rep.widths == {m: m for m in range(5)}


def test_ex3_r1(r1):
    rep = perfect.ex3_verify(r1, modrep.ring_module(r1), perfect.make_pair(r1, "x", "x"), 2)
    assert rep.passed, rep.checks


def test_ex3_r2_gf3(r2_gf3):
    for pair in perfect.find_exact_zero_divisors(r2_gf3):
        rep = perfect.ex3_verify(r2_gf3, modrep.ring_module(r2_gf3), pair, 3)
        assert rep.passed, (pair.label(r2_gf3), rep.checks)


def test_ex3_degenerate(r2):
    rep = perfect.ex3_verify(r2, modrep.ring_module(r2), perfect.make_pair(r2, "x", "x"), 0)
    assert not rep.passed
    assert rep.checks["T_plus_exact_at_0"] is False
    assert rep.details["truncated"]


# -- width -------------------------------------------------------------------------------


def test_width_of_c(r3, omega3):
    for C in (modrep.ring_module(r3), omega3):
        rep = perfect.width(concentrated(C, 0), C)
        assert rep.width == 0 and rep.certificate.is_quasiiso


def test_width_of_zero_complex(r1):
    Z = ChainComplex(r1, 0, [modrep.zero_module(r1)], [])
    assert perfect.width(Z, modrep.ring_module(r1)).width == 0


def test_width_padded(r2):
    R = modrep.ring_module(r2)
    pair = perfect.make_pair(r2, "x", "x")
    T = perfect.build_periodic_complex(R, pair, 2).complex
    E = ChainComplex(r2, 2, [R, R], [gfp.identity(4, 2)])
    padded = direct_sum_complex(T, E)
    rep = perfect.width(padded, R)
    assert rep.width == 2 and rep.certificate.is_quasiiso
    assert is_minimal(rep.minimal_representative.complex)


def test_width_invariant_under_scramble(r1, r2, r2_gf3):
    rng = np.random.default_rng(11)
    for A in (r1, r2, r2_gf3):
        R = modrep.ring_module(A)
        for _ in range(3):
            X = randomgen.random_minimal_free_complex(A, rng)
            base = perfect.width(X, R)
            Z, _ = randomgen.pad_and_scramble(X, rng)
            rep = perfect.width(Z, R)
            assert rep.width == base.width
            assert rep.minimal_representative.ranks == base.minimal_representative.ranks


def test_width_with_omega(r3, omega3):
    # a complex of omega-projectives with a contractible piece
    E = ChainComplex(r3, 0, [omega3, omega3], [gfp.identity(3, 2)])
    assert perfect.width(E, omega3).width == 0
    with pytest.raises(perfect.UncertifiedModule):
        perfect.width(concentrated(modrep.residue_field(r3), 0), omega3)


@pytest.mark.parametrize("rid", ["r1", "r2", "r2_gf3"])
def test_width_of_periodic_family(rid):
    A = load_ring(rid)
    R = modrep.ring_module(A)
    for pair in perfect.find_exact_zero_divisors(A):
        for n in range(0, 9):
            assert perfect.width(perfect.build_periodic_complex(R, pair, n), R).width == n


@pytest.mark.parametrize("rid", ["r1", "r2", "r2_gf3"])
def test_hom_differentials_are_multiplications(rid):
    A = load_ring(rid)
    R = modrep.ring_module(A)
    for pair in perfect.find_exact_zero_divisors(A):
        assert perfect.hom_differentials_are_multiplications(R, pair, 4)


def test_certified_transport(r3, omega3):
    X = ChainComplex(r3, 0, [modrep.power(omega3, 2)], [])
    P = perfect.certify(X, omega3)
    assert P.ranks == [2]
    S = P.standard()
    assert P.transport(S).is_degreewise_iso()
