import numpy as np
import pytest

from cprojective import modrep, randomgen, semidual
from cprojective.corpus import RING_IDS, load_ring


def test_ext_of_free_module(r2):
    R = modrep.ring_module(r2)
    M = modrep.residue_field(r2)
    assert semidual.ext_dims(R, M, 4) == [M.dim, 0, 0, 0, 0]
    assert modrep.module_iso(semidual.ext(R, M, 0), M) is not None


def test_ext_k_k_over_r1(r1):
    k = modrep.residue_field(r1)
    assert semidual.ext_dims(k, k, 8) == [1] * 9


def test_ext_k_k_over_r3_grows(r3):
    k = modrep.residue_field(r3)
    # Hom(F_i, k) has zero differential for a minimal F, so Ext^i = k^{b_i}
    assert semidual.ext_dims(k, k, 4) == [1, 2, 4, 8, 16]


def test_ext_omega_omega_vanishes(omega3):
    dims = semidual.ext_dims(omega3, omega3, 10)
    assert dims[0] == 3
    assert dims[1:] == [0] * 10


def test_ext0_is_hom():
    rng = np.random.default_rng(0)
    for rid in ("r1", "r2", "r3", "r2_gf3"):
        A = load_ring(rid)
        for _ in range(3):
            M = randomgen.random_module(A, rng, 4)
            N = randomgen.random_module(A, rng, 4)
            E0 = semidual.ext(M, N, 0)
            H = modrep.hom_module(M, N)
            assert E0.dim == H.dim
            if H.dim <= 8:
                assert modrep.module_iso(E0, H) is not None


def test_ext_module_dims_match_rank_formula(r2):
    M = modrep.quotient_by_element(modrep.ring_module(r2), r2.element("x+y")).module
    N = modrep.residue_field(r2)
    calc = semidual.ExtCalculator(M, N, 3)
    for i in range(4):
        assert calc.module(i).dim == calc.dim(i)


def test_ext_dims_via_matlis_duality(r2):
    # over a local Artinian ring with dualizing module omega: Ext^i(M, omega) = 0 for i >= 1
    omega = modrep.dual_of_ring(r2)
    rng = np.random.default_rng(4)
    for _ in range(3):
        M = randomgen.random_module(r2, rng, 4)
        assert semidual.ext_dims(M, omega, 3)[1:] == [0, 0, 0]


@pytest.mark.parametrize("rid", RING_IDS)
def test_ring_is_semidualizing(rid):
    A = load_ring(rid)
    rep = semidual.verify_semidualizing(modrep.ring_module(A), 10)
    assert rep.verified and rep.homothety_is_iso and rep.faithful
    assert rep.ext_vanishing == [True] * 10


def test_omega_is_semidualizing(omega3):
    rep = semidual.verify_semidualizing(omega3, 10)
    assert rep.verdict == "Verified-to-bound"
    assert rep.ext_checked_to == 10


def test_k_over_r1_is_refuted(r1):
    rep = semidual.verify_semidualizing(modrep.residue_field(r1), 3)
    assert rep.verdict == "Refuted"
    assert rep.witness["kind"] == "homothety"
    assert rep.witness["ring_dim"] == 2 and rep.witness["hom_dim"] == 1


def test_ext_witness(r2):
    # k over R2 has Hom(k,k) = k (homothety fails) and Ext^1(k,k) != 0
    rep = semidual.verify_semidualizing(modrep.residue_field(r2), 2)
    assert rep.verdict == "Refuted"
    assert rep.ext_dims[0] == 2


def test_zero_module_rejected(r1):
    with pytest.raises(semidual.ZeroModule):
        semidual.verify_semidualizing(modrep.zero_module(r1))
