from fractions import Fraction as F

import pytest

from lagext.catalog import base_algebra, connection_for
from lagext.cohomology import OneCochain, TwoCochain, coboundary_1, cocycle_bases, two_cochain_from_coefficients
from lagext.connection import FlatConnection, dual_representation
from lagext.extension import (
    CocycleError,
    ExtensionTriple,
    SymplecticLieAlgebra,
    adjusted_symplectic_form,
    build_extension,
    canonical_connection,
    check_bianchi,
    d_omega,
    dual_subspace,
    equivalence_map_psi,
    extension_nilpotency,
    induced_flat_connection,
    is_lagrangian_ideal,
    standard_omega,
    symplectic_orthogonal,
    symplectic_reduction,
)
from lagext.lie import LieAlgebra, check_jacobi, lower_central_series
from lagext.linalg import RatMatrix, Subspace, unit_vector, vec
from lagext.sampling import random_rational, rng_for


def triple(label, alpha=None, **params):
    conn = connection_for(label, **params)
    if alpha is None:
        alpha = TwoCochain.zero(4)
    return ExtensionTriple(conn, alpha)


def random_lagrangian_cocycle(conn, rng):
    _, z2l = cocycle_bases(dual_representation(conn))
    coeffs = tuple(random_rational(rng) for _ in range(z2l.dim))
    return two_cochain_from_coefficients(z2l, coeffs, conn.dim)


def random_cocycle(conn, rng):
    z2, _ = cocycle_bases(dual_representation(conn))
    coeffs = tuple(random_rational(rng) for _ in range(z2.dim))
    return two_cochain_from_coefficients(z2, coeffs, conn.dim)


# ---------------------------------------------------------------------------
# build_extension
# ---------------------------------------------------------------------------


def test_extension_of_l26_has_expected_brackets():
    ext = build_extension(triple("l_26"))
    assert ext.dim == 8
    nonzero = {
        (i + 1, j + 1): ext.algebra.bracket[i][j]
        for i in range(8)
        for j in range(i + 1, 8)
        if any(x != 0 for x in ext.algebra.bracket[i][j])
    }
    assert set(nonzero) == {(1, 2), (1, 7), (2, 7)}
    assert nonzero[(1, 2)] == vec((0, 0, 1, 0, 0, 0, 0, 0))
    assert nonzero[(1, 7)] == vec((0, 0, 0, 0, 0, F(-1, 2), 0, 0))
    assert nonzero[(2, 7)] == vec((0, 0, 0, 0, F(1, 2), 0, 0, 0))
    assert check_jacobi(ext.algebra) == ()


def test_extension_of_zero_connection_is_abelian_with_standard_form():
    for n in (2, 3, 4):
        conn = FlatConnection.zero(LieAlgebra.abelian(n))
        ext = build_extension(ExtensionTriple(conn, TwoCochain.zero(n)))
        assert ext.algebra.bracket == LieAlgebra.abelian(2 * n).bracket
        assert ext.omega.entries == standard_omega(n).entries


def test_extension_of_a10_single_bracket():
    ext = build_extension(triple("a_10"))
    nonzero = [
        (i + 1, j + 1, ext.algebra.bracket[i][j])
        for i in range(8)
        for j in range(i + 1, 8)
        if any(x != 0 for x in ext.algebra.bracket[i][j])
    ]
    assert nonzero == [(4, 5, vec((0, 0, 0, 0, 0, 0, 0, -1)))]
    assert [s.dim for s in lower_central_series(ext.algebra)] == [8, 1, 0]


def test_extension_rejects_non_cocycle():
    conn = connection_for("t_8")
    alpha = TwoCochain.from_pairs(4, {(0, 1): (0, 1, 0, 0)})  # d2 residual at (1,2,4)
    with pytest.raises(CocycleError) as excinfo:
        build_extension(ExtensionTriple(conn, alpha))
    assert excinfo.value.witnesses[0][0] == (1, 2, 4)


def test_extension_rejects_non_flat_connection():
    conn = FlatConnection.zero(base_algebra("l"))  # torsion nonzero
    with pytest.raises(ValueError):
        build_extension(ExtensionTriple(conn, TwoCochain.zero(4)))


# ---------------------------------------------------------------------------
# d_omega / Bianchi
# ---------------------------------------------------------------------------


def test_d_omega_zero_for_l26_cotangent_extension():
    result = d_omega(build_extension(triple("l_26")))
    assert result.is_zero()
    assert dict(result.residuals)[(1, 2, 7)] == 0


def test_d_omega_abelian_standard_form():
    sympl = SymplecticLieAlgebra(LieAlgebra.abelian(6), standard_omega(3))
    assert d_omega(sympl).is_zero()


def test_d_omega_detects_bianchi_violation():
    conn = FlatConnection.zero(LieAlgebra.abelian(4))
    alpha = TwoCochain.from_pairs(4, {(0, 1): (0, 0, 1, 0)})
    assert not check_bianchi(alpha)
    ext = build_extension(ExtensionTriple(conn, alpha))
    witnesses = d_omega(ext).witnesses()
    assert witnesses == (((1, 2, 3), F(-1)),)


def test_bianchi_examples():
    assert check_bianchi(TwoCochain.zero(4))
    assert not check_bianchi(TwoCochain.from_pairs(4, {(0, 1): (0, 0, 1, 0)}))
    rng = rng_for(10, "bianchi-coboundary")
    rep = dual_representation(connection_for("l_26"))
    for _ in range(5):
        rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
        for i in range(4):
            for k in range(i):
                rows[i][k] = rows[k][i]
        sigma = OneCochain.from_rows(rows)
        assert check_bianchi(coboundary_1(rep, sigma))


def test_bianchi_iff_closed_on_sampled_cocycles():
    rng = rng_for(11, "bianchi-iff-closed")
    for label in ("l_26", "a_3", "t_8"):
        conn = connection_for(label)
        for _ in range(10):
            alpha = random_cocycle(conn, rng)
            ext = build_extension(ExtensionTriple(conn, alpha))
            assert d_omega(ext).is_zero() == check_bianchi(alpha)


# ---------------------------------------------------------------------------
# ideals, orthogonals, reduction
# ---------------------------------------------------------------------------


def test_dual_space_is_lagrangian_normal_ideal():
    ext = build_extension(triple("l_26"))
    verdict = is_lagrangian_ideal(ext, ext.lagrangian_ideal)
    assert verdict.status == "lagrangian" and verdict.normal


def test_base_factor_is_isotropic_but_not_ideal():
    ext = build_extension(triple("l_26"))
    j = Subspace.from_vectors(8, [unit_vector(8, i) for i in range(4)])
    verdict = is_lagrangian_ideal(ext, j)
    assert verdict.status == "not_ideal"


def test_mixed_plane_is_not_isotropic():
    ext = build_extension(triple("l_26"))
    j = Subspace.from_vectors(8, [unit_vector(8, 0), unit_vector(8, 4)])
    assert is_lagrangian_ideal(ext, j).status == "not_isotropic"


def test_symplectic_orthogonal_basics():
    ext = build_extension(triple("l_26"))
    dual = ext.lagrangian_ideal
    assert symplectic_orthogonal(ext, dual).basis == dual.basis
    assert symplectic_orthogonal(ext, Subspace.zero(8)).dim == 8
    line = Subspace.from_vectors(8, [unit_vector(8, 0)])
    perp = symplectic_orthogonal(ext, line)
    assert perp.dim == 7
    assert not perp.contains(unit_vector(8, 4))  # e^1 pairs with e1


def test_reduction_by_lagrangian_ideal_is_zero_algebra():
    ext = build_extension(triple("l_26"))
    reduced = symplectic_reduction(ext, ext.lagrangian_ideal)
    assert reduced.dim == 0


def test_reduction_by_zero_ideal_returns_same_structure():
    ext = build_extension(triple("a_10"))
    reduced = symplectic_reduction(ext, Subspace.zero(8))
    assert reduced.algebra.bracket == ext.algebra.bracket
    assert reduced.omega.entries == ext.omega.entries


def test_reduction_by_central_isotropic_line():
    ext = build_extension(triple("l_26"))
    line = Subspace.from_vectors(8, [unit_vector(8, 4)])  # e^1, central
    verdict = is_lagrangian_ideal(ext, line)
    assert verdict.status == "isotropic" and verdict.normal
    reduced = symplectic_reduction(ext, line)
    assert reduced.dim == 6
    assert d_omega(reduced).is_zero()
    assert reduced.omega.is_invertible()


def test_reduction_rejects_non_isotropic():
    ext = build_extension(triple("l_26"))
    j = Subspace.from_vectors(8, [unit_vector(8, 0), unit_vector(8, 4)])
    with pytest.raises(ValueError):
        symplectic_reduction(ext, j)


# ---------------------------------------------------------------------------
# induced and canonical connections
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("label", ["l_26", "a_10", "t_8", "a_3"])
def test_round_trip_recovers_gamma(label):
    conn = connection_for(label)
    ext = build_extension(ExtensionTriple(conn, TwoCochain.zero(4)))
    recovered = induced_flat_connection(ext, ext.lagrangian_ideal)
    assert recovered.gamma == conn.gamma


def test_round_trip_with_random_lagrangian_cocycles():
    rng = rng_for(12, "roundtrip")
    for label in ("l_26", "t_8"):
        conn = connection_for(label)
        for _ in range(3):
            alpha = random_lagrangian_cocycle(conn, rng)
            ext = build_extension(ExtensionTriple(conn, alpha))
            recovered = induced_flat_connection(ext, ext.lagrangian_ideal)
            assert recovered.gamma == conn.gamma


def test_induced_connection_on_abelian_split_is_zero():
    sympl = SymplecticLieAlgebra(
        LieAlgebra.abelian(8), standard_omega(4), dual_subspace(4)
    )
    conn = induced_flat_connection(sympl, dual_subspace(4))
    assert all(
        all(x == 0 for x in conn.gamma[i][j]) for i in range(4) for j in range(4)
    )
    # the primal half is also a Lagrangian ideal of the abelian algebra
    primal = Subspace.from_vectors(8, [unit_vector(8, i) for i in range(4)])
    verdict = is_lagrangian_ideal(sympl, primal)
    assert verdict.is_lagrangian and verdict.normal
    conn2 = induced_flat_connection(sympl, primal)
    assert all(
        all(x == 0 for x in conn2.gamma[i][j]) for i in range(4) for j in range(4)
    )


def test_induced_connection_requires_lagrangian():
    ext = build_extension(triple("l_26"))
    line = Subspace.from_vectors(8, [unit_vector(8, 4)])
    with pytest.raises(ValueError):
        induced_flat_connection(ext, line)


def test_canonical_connection_on_abelian_is_zero():
    sympl = SymplecticLieAlgebra(LieAlgebra.abelian(4), standard_omega(2))
    conn = canonical_connection(sympl)
    assert all(
        all(x == 0 for x in conn.gamma[i][j]) for i in range(4) for j in range(4)
    )


@pytest.mark.parametrize("label", ["l_26", "a_10"])
def test_canonical_connection_on_extensions_is_flat_torsion_free(label):
    # check_flat_torsion_free is run inside canonical_connection; failure raises
    ext = build_extension(triple(label))
    conn = canonical_connection(ext)
    assert conn.dim == 8


def test_canonical_connection_requires_symplectic():
    conn = FlatConnection.zero(LieAlgebra.abelian(4))
    alpha = TwoCochain.from_pairs(4, {(0, 1): (0, 0, 1, 0)})
    ext = build_extension(ExtensionTriple(conn, alpha))  # omega not closed here
    with pytest.raises(ValueError):
        canonical_connection(ext)


# ---------------------------------------------------------------------------
# non-coordinate-aligned ideals (general basis)
# ---------------------------------------------------------------------------


def _random_invertible(rng, n):
    while True:
        p = RatMatrix.from_rows(
            [[random_rational(rng) for _ in range(n)] for _ in range(n)]
        )
        if p.is_invertible():
            return p


def _transformed_extension(label, seed):
    """The extension of `label` rewritten in a random basis, plus the change."""
    from lagext.lie import transform

    ext = build_extension(triple(label))
    rng = rng_for(seed, "skew-basis", label)
    p = _random_invertible(rng, 8)
    algebra = transform(ext.algebra, p)
    omega = p.transpose() @ ext.omega @ p
    p_inv = p.inverse()
    ideal = Subspace.from_vectors(8, [p_inv.col(4 + k) for k in range(4)])
    return SymplecticLieAlgebra(algebra, omega), ideal, p


def test_skewed_lagrangian_ideal_detected_and_quotient_matches_base():
    from lagext.lie import fingerprint, quotient_algebra

    for label in ("l_26", "t_8"):
        sympl, ideal, _ = _transformed_extension(label, 21)
        sympl.validate()
        verdict = is_lagrangian_ideal(sympl, ideal)
        assert verdict.is_lagrangian and verdict.normal
        # induced connection exists, is flat torsion-free and complete
        # (verified inside); its base is the quotient in a new basis, so
        # compare through the fingerprint
        conn = induced_flat_connection(sympl, ideal)
        base = connection_for(label).base
        assert fingerprint(conn.base) == fingerprint(base)
        assert fingerprint(quotient_algebra(sympl.algebra, ideal)) == fingerprint(base)


def test_skewed_reduction_by_isotropic_line():
    sympl, ideal, p = _transformed_extension("l_26", 22)
    p_inv = p.inverse()
    line = Subspace.from_vectors(8, [p_inv.col(4)])  # image of e^1, central
    verdict = is_lagrangian_ideal(sympl, line)
    assert verdict.status == "isotropic" and verdict.normal
    reduced = symplectic_reduction(sympl, line)
    assert reduced.dim == 6
    assert d_omega(reduced).is_zero() and reduced.omega.is_invertible()


def test_graph_lagrangian_in_abelian_extension():
    # the graph of a symmetric matrix over the primal half is Lagrangian
    sympl = SymplecticLieAlgebra(LieAlgebra.abelian(8), standard_omega(4))
    rng = rng_for(23, "graph")
    s = _symmetric_matrix(rng)
    vectors = []
    for i in range(4):
        v = [F(0)] * 8
        v[i] = F(1)
        for k in range(4):
            v[4 + k] = s[i][k]
        vectors.append(tuple(v))
    graph = Subspace.from_vectors(8, vectors)
    verdict = is_lagrangian_ideal(sympl, graph)
    assert verdict.is_lagrangian and verdict.normal
    conn = induced_flat_connection(sympl, graph)
    assert all(
        all(x == 0 for x in conn.gamma[i][j]) for i in range(4) for j in range(4)
    )


def _symmetric_matrix(rng):
    rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for k in range(i):
            rows[i][k] = rows[k][i]
    return rows


# ---------------------------------------------------------------------------
# nilpotency certificates
# ---------------------------------------------------------------------------


def test_nilpotency_of_l26_extension():
    cert = extension_nilpotency(triple("l_26"))
    assert cert.nilpotent and cert.extension_class == 2
    assert cert.lcs_dims == (8, 3, 0)
    assert cert.base_nilpotent and cert.complete and cert.condition_sum_ok


def test_nilpotency_of_a3_extension():
    cert = extension_nilpotency(triple("a_3"))
    assert cert.nilpotent
    assert cert.lcs_dims == (8, 3, 2, 1, 0)
    assert cert.extension_class == 4


def test_nilpotency_with_any_cocycle_over_zero_connection():
    conn = FlatConnection.zero(LieAlgebra.abelian(4))
    rng = rng_for(13, "zero-conn-nilpotency")
    for _ in range(5):
        alpha = random_cocycle(conn, rng)
        cert = extension_nilpotency(ExtensionTriple(conn, alpha))
        assert cert.nilpotent
        assert cert.extension_class is not None and cert.extension_class <= 2


def test_nilpotency_paths_agree_across_catalog_samples():
    for label in ("l_26", "a_10", "t_8", "t_18", "l_38"):
        cert = extension_nilpotency(triple(label))
        assert cert.nilpotent == cert.conditions_verdict == True  # noqa: E712


# ---------------------------------------------------------------------------
# equivalence maps and adjusted forms
# ---------------------------------------------------------------------------


def test_psi_identity_for_zero_sigma():
    t1 = triple("l_26")
    psi = equivalence_map_psi(t1, t1, OneCochain.zero(4))
    assert psi.entries == RatMatrix.identity(8).entries


def test_psi_random_sigma_is_bracket_isomorphism():
    rng = rng_for(14, "psi")
    t1 = triple("l_26")
    rep = dual_representation(t1.connection)
    for _ in range(5):
        rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
        sigma = OneCochain.from_rows(rows)
        t2 = ExtensionTriple(t1.connection, t1.cocycle - coboundary_1(rep, sigma))
        psi = equivalence_map_psi(t1, t2, sigma)  # verification happens inside
        assert psi.rows == psi.cols == 8
        assert psi.is_invertible()


def test_psi_symmetric_sigma_preserves_omega():
    rng = rng_for(15, "psi-symmetric")
    t1 = triple("t_8")
    rep = dual_representation(t1.connection)
    rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for k in range(i):
            rows[i][k] = rows[k][i]
    sigma = OneCochain.from_rows(rows)
    t2 = ExtensionTriple(t1.connection, t1.cocycle - coboundary_1(rep, sigma))
    psi = equivalence_map_psi(t1, t2, sigma)
    omega = standard_omega(4)
    assert (psi.transpose() @ omega @ psi).entries == omega.entries


def test_psi_rejects_unrelated_cocycles():
    t1 = triple("l_26")
    rep = dual_representation(t1.connection)
    _, z2l = cocycle_bases(rep)
    # a cocycle that is NOT a coboundary of the supplied sigma
    alpha = TwoCochain.unflatten(4, z2l.basis[0])
    t2 = ExtensionTriple(t1.connection, alpha)
    from lagext.cohomology import coboundary_1 as d1

    if (t1.cocycle - d1(rep, OneCochain.zero(4))).tensor == alpha.tensor:
        pytest.skip("degenerate choice")
    with pytest.raises(ValueError):
        equivalence_map_psi(t1, t2, OneCochain.zero(4))


def test_adjusted_form_equals_standard_when_sigmas_match():
    t = triple("l_26")
    rng = rng_for(16, "adjusted-equal")
    rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
    for i in range(4):
        for k in range(i):
            rows[i][k] = rows[k][i]
    sigma = OneCochain.from_rows(rows)  # symmetric, also usable as sigma_l
    omega = adjusted_symplectic_form(t, sigma, sigma)
    assert omega.entries == standard_omega(4).entries


def test_adjusted_form_unit_block_on_zero_connection():
    conn = FlatConnection.zero(LieAlgebra.abelian(4))
    t = ExtensionTriple(conn, TwoCochain.zero(4))
    sigma = OneCochain.unit(4, 0, 1)  # sigma(e1) = e^2
    omega = adjusted_symplectic_form(t, sigma, OneCochain.zero(4))
    # h x h block is the alternating part of (sigma_l - sigma): antisymmetric,
    # with the (e1, e2) entry equal to -1 under the pullback convention.
    assert omega[0, 1] == F(-1) and omega[1, 0] == F(1)
    assert omega[0, 4] == F(-1)  # dual pairing block unchanged
    assert omega.is_invertible()


def test_adjusted_form_closed_on_shifted_extension():
    rng = rng_for(17, "adjusted-closed")
    for label in ("l_26", "t_8"):
        t = triple(label)
        rep = dual_representation(t.connection)
        for _ in range(3):
            sigma = OneCochain.from_rows(
                [[random_rational(rng) for _ in range(4)] for _ in range(4)]
            )
            rows = [[random_rational(rng) for _ in range(4)] for _ in range(4)]
            for i in range(4):
                for k in range(i):
                    rows[i][k] = rows[k][i]
            sigma_l = OneCochain.from_rows(rows)
            omega = adjusted_symplectic_form(t, sigma, sigma_l)
            # closedness on the shifted extension is verified inside; re-verify
            alpha_bar = t.cocycle - coboundary_1(rep, sigma)
            shifted = build_extension(ExtensionTriple(t.connection, alpha_bar))
            assert d_omega(shifted, omega).is_zero()
            assert omega.is_invertible()
            for i in range(8):
                for j in range(8):
                    assert omega[i, j] == -omega[j, i]


def test_adjusted_form_requires_symmetric_sigma_l():
    t = triple("l_26")
    with pytest.raises(ValueError):
        adjusted_symplectic_form(t, OneCochain.zero(4), OneCochain.unit(4, 0, 1))
