"""Symplectic Lie algebras built as Lagrangian extensions, and their reductions.

An extension triple (connection on h, 2-cocycle alpha) yields the algebra
h + h* with brackets

    [x, y]  = [x, y]_h + alpha(x, y)
    [x, xi] = rho(x) xi          (rho the dual representation)
    [xi, eta] = 0

in the ordered basis (e_1..e_n, e^1..e^n), and the pairing form
omega(e_i, e^j) = -delta_ij, i.e. the block matrix [[0, -I], [I, 0]].
The dual copy h* is always an abelian ideal; it is Lagrangian and normal,
and quotienting by it recovers the connection exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .cohomology import (
    OneCochain,
    TwoCochain,
    coboundary_1,
    coboundary_2,
)
from .connection import (
    DualRep,
    FlatConnection,
    check_flat_torsion_free,
    dual_representation,
    is_geodesically_complete,
)
from .lie import (
    LieAlgebra,
    _freeze_tensor,
    lower_central_series,
    nilpotency_class,
    quotient_algebra,
    require_jacobi,
)
from .linalg import (
    RatMatrix,
    Subspace,
    Vector,
    ZERO,
    is_zero_vector,
    kernel_basis,
    solve_linear,
    unit_vector,
    zero_vector,
)
from .sampling import random_vectors

NILPOTENCY_DIRECTION_COUNT = 8
NILPOTENCY_DIRECTION_SEED = "extension-nilpotency-directions"


class CocycleError(ValueError):
    """The supplied 2-cochain is not a cocycle; carries the residual witnesses."""

    def __init__(self, witnesses):
        self.witnesses = witnesses
        first = witnesses[0] if witnesses else None
        super().__init__(f"2-cochain is not a cocycle; first residual at {first}")


class IntegrityError(RuntimeError):
    """Two independent verification paths disagreed (bug or counterexample)."""


@dataclass(frozen=True)
class SymplecticLieAlgebra:
    """A Lie algebra with a candidate symplectic form.

    Construction does not assert closedness; use ``d_omega`` /
    ``validate`` to check dw = 0 and non-degeneracy.
    """

    algebra: LieAlgebra
    omega: RatMatrix
    lagrangian_ideal: Subspace | None = None

    def __post_init__(self):
        n = self.algebra.dim
        if self.omega.rows != n or self.omega.cols != n:
            raise ValueError("omega shape does not match algebra dimension")
        for i in range(n):
            for j in range(i, n):
                if self.omega[i, j] != -self.omega[j, i]:
                    raise ValueError("omega is not antisymmetric")

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def omega_value(self, x: Vector, y: Vector) -> Fraction:
        return sum(
            (
                x[p] * self.omega[p, q] * y[q]
                for p in range(self.dim)
                if x[p] != 0
                for q in range(self.dim)
                if y[q] != 0
            ),
            ZERO,
        )

    def validate(self) -> None:
        """Raise ValueError unless omega is invertible and closed."""
        if not self.omega.is_invertible():
            raise ValueError("omega is degenerate")
        witnesses = d_omega(self).witnesses()
        if witnesses:
            raise ValueError(f"omega is not closed; first residual at {witnesses[0]}")


def standard_omega(n: int) -> RatMatrix:
    """[[0, -I], [I, 0]] on (e_1..e_n, e^1..e^n)."""
    one = Fraction(1)
    rows = []
    for i in range(n):
        row = [ZERO] * (2 * n)
        row[n + i] = -one
        rows.append(tuple(row))
    for i in range(n):
        row = [ZERO] * (2 * n)
        row[i] = one
        rows.append(tuple(row))
    return RatMatrix(tuple(rows))


def dual_subspace(n: int) -> Subspace:
    """span(e^1..e^n) inside the 2n-dimensional extension."""
    return Subspace.from_vectors(2 * n, [unit_vector(2 * n, n + i) for i in range(n)])


@dataclass(frozen=True)
class ExtensionTriple:
    """Connection on the base plus a 2-cocycle for its dual representation."""

    connection: FlatConnection
    cocycle: TwoCochain

    def __post_init__(self):
        if self.cocycle.dim != self.connection.dim:
            raise ValueError("cocycle dimension does not match connection")

    @staticmethod
    def with_zero_cocycle(connection: FlatConnection) -> "ExtensionTriple":
        return ExtensionTriple(connection, TwoCochain.zero(connection.dim))

    def dual_rep(self) -> DualRep:
        return dual_representation(self.connection)


def build_extension(triple: ExtensionTriple, name: str = "") -> SymplecticLieAlgebra:
    """The 2n-dimensional algebra of the triple, with the standard pairing form.

    Raises CocycleError when the cochain fails the cocycle condition (the
    Jacobi identity of the result is equivalent to it), and ValueError when
    the connection is not flat torsion-free.
    """
    conn = triple.connection
    report = check_flat_torsion_free(conn)
    if not report.ok:
        raise ValueError("extension requires a flat torsion-free connection")
    rep = dual_representation(conn)
    residual = coboundary_2(rep, triple.cocycle)
    if not residual.is_zero():
        raise CocycleError(residual.witnesses())

    n = conn.dim
    total = 2 * n
    c = [[list(zero_vector(total)) for _ in range(total)] for _ in range(total)]
    base = conn.base.bracket
    alpha = triple.cocycle
    for i, j in combinations(range(n), 2):
        for k in range(n):
            c[i][j][k] = base[i][j][k]
            c[i][j][n + k] = alpha.tensor[i][j][k]
            c[j][i][k] = -base[i][j][k]
            c[j][i][n + k] = -alpha.tensor[i][j][k]
    for i in range(n):
        rho_i = rep.matrices[i]
        for m in range(n):
            col = rho_i.col(m)
            for t in range(n):
                c[i][n + m][n + t] = col[t]
                c[n + m][i][n + t] = -col[t]
    algebra = require_jacobi(
        LieAlgebra(total, _freeze_tensor(c), name or f"ext({conn.label or 'conn'})")
    )
    return SymplecticLieAlgebra(algebra, standard_omega(n), dual_subspace(n))


@dataclass(frozen=True)
class DOmegaResult:
    """dw evaluated on every basis triple i<j<k (1-based indices in output)."""

    residuals: tuple[tuple[tuple[int, int, int], Fraction], ...]

    def is_zero(self) -> bool:
        return all(v == 0 for _, v in self.residuals)

    def witnesses(self) -> tuple[tuple[tuple[int, int, int], Fraction], ...]:
        return tuple((t, v) for t, v in self.residuals if v != 0)


def d_omega(s: SymplecticLieAlgebra, omega: RatMatrix | None = None) -> DOmegaResult:
    """Chevalley-Eilenberg differential of omega on all basis triples."""
    om = omega if omega is not None else s.omega
    n = s.dim
    algebra = s.algebra
    e = [unit_vector(n, i) for i in range(n)]

    def w(x: Vector, y: Vector) -> Fraction:
        return sum(
            (x[p] * om[p, q] * y[q] for p in range(n) if x[p] != 0 for q in range(n) if y[q] != 0),
            ZERO,
        )

    out = []
    for i, j, k in combinations(range(n), 3):
        value = (
            w(e[i], algebra.bracket_vectors(e[j], e[k]))
            + w(e[j], algebra.bracket_vectors(e[k], e[i]))
            + w(e[k], algebra.bracket_vectors(e[i], e[j]))
        )
        out.append(((i + 1, j + 1, k + 1), value))
    return DOmegaResult(tuple(out))


def check_bianchi(alpha: TwoCochain) -> bool:
    """Cyclic-sum-zero condition; equivalent to closedness of the pairing form."""
    return alpha.is_lagrangian


@dataclass(frozen=True)
class IdealVerdict:
    status: str  # not_ideal | not_isotropic | isotropic | lagrangian
    normal: bool

    @property
    def is_lagrangian(self) -> bool:
        return self.status == "lagrangian"


def symplectic_orthogonal(s: SymplecticLieAlgebra, j: Subspace) -> Subspace:
    """{v : omega(v, u) = 0 for all u in J}."""
    if j.dim == 0:
        return Subspace.full(s.dim)
    rows = [s.omega.apply(u) for u in j.basis]
    return kernel_basis(RatMatrix(tuple(rows)))


def is_lagrangian_ideal(s: SymplecticLieAlgebra, j: Subspace) -> IdealVerdict:
    """Classify J and report whether its symplectic orthogonal is an ideal.

    Isotropy is decided first; an isotropic subspace that is not an ideal
    reports not_ideal.
    """
    normal = s.algebra.is_ideal(symplectic_orthogonal(s, j))
    isotropic = all(
        s.omega_value(u, v) == 0 for u in j.basis for v in j.basis
    )
    if not isotropic:
        return IdealVerdict("not_isotropic", normal)
    if not s.algebra.is_ideal(j):
        return IdealVerdict("not_ideal", normal)
    if 2 * j.dim == s.dim:
        return IdealVerdict("lagrangian", normal)
    return IdealVerdict("isotropic", normal)


def symplectic_reduction(s: SymplecticLieAlgebra, j: Subspace) -> SymplecticLieAlgebra:
    """Quotient orth(J)/J with the induced form, for a normal isotropic ideal J.

    For Lagrangian J the result is the zero algebra; for J = 0 it is s itself.
    """
    verdict = is_lagrangian_ideal(s, j)
    if verdict.status in ("not_ideal", "not_isotropic"):
        raise ValueError(f"reduction requires an isotropic ideal, got {verdict.status}")
    if not verdict.normal:
        raise ValueError("reduction requires a normal ideal (orthogonal must be an ideal)")

    perp = symplectic_orthogonal(s, j)
    r = perp.dim
    # Structure constants of the orthogonal as a subalgebra, in its echelon basis.
    sub = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(r):
            w = s.algebra.bracket_vectors(perp.basis[a], perp.basis[b])
            sub[a][b] = perp.coordinates(w)
    perp_algebra = LieAlgebra(r, _freeze_tensor(sub), name=f"{s.algebra.name}|perp")
    j_inside = Subspace.from_vectors(r, [perp.coordinates(u) for u in j.basis])
    reduced = quotient_algebra(perp_algebra, j_inside, name=f"{s.algebra.name}/red")

    keep = j_inside.complement_coordinates()
    lifts = [perp.basis[t] for t in keep]
    omega_rows = [
        tuple(s.omega_value(x, y) for y in lifts) for x in lifts
    ]
    reduced_omega = RatMatrix(tuple(omega_rows))
    result = SymplecticLieAlgebra(reduced, reduced_omega)
    if reduced.dim:
        result.validate()
    return result


def induced_flat_connection(s: SymplecticLieAlgebra, j: Subspace) -> FlatConnection:
    """The connection on g/J defined by omega_h(nabla_x y, u) = -omega(y, [x, u]).

    J must be a Lagrangian ideal.  The result is verified flat torsion-free,
    and geodesically complete whenever the ambient algebra is nilpotent.
    """
    verdict = is_lagrangian_ideal(s, j)
    if not verdict.is_lagrangian:
        raise ValueError(f"induced connection requires a Lagrangian ideal, got {verdict.status}")
    quotient = quotient_algebra(s.algebra, j, name=f"{s.algebra.name}/ideal")
    keep = j.complement_coordinates()
    n = quotient.dim
    lifts = [unit_vector(s.dim, t) for t in keep]
    pairing = RatMatrix(
        tuple(tuple(s.omega_value(lifts[a], u) for u in j.basis) for a in range(n))
    )
    if not pairing.is_invertible():
        raise ValueError("pairing between quotient and ideal is degenerate")
    pairing_t = pairing.transpose()
    gamma = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            rhs = tuple(
                -s.omega_value(lifts[b], s.algebra.bracket_vectors(lifts[a], u))
                for u in j.basis
            )
            coeffs = solve_linear(pairing_t, rhs)
            assert coeffs is not None
            gamma[a][b] = coeffs
    conn = FlatConnection(quotient, _freeze_tensor(gamma), label=f"induced({s.algebra.name})")
    report = check_flat_torsion_free(conn)
    if not report.ok:
        raise IntegrityError("induced connection failed the flat torsion-free check")
    if lower_central_series(s.algebra)[-1].dim == 0:
        if not is_geodesically_complete(conn).complete:
            raise IntegrityError(
                "induced connection of a nilpotent symplectic algebra must be complete"
            )
    return conn


def canonical_connection(s: SymplecticLieAlgebra) -> FlatConnection:
    """The connection solving omega(nabla_x y, z) = -omega(y, [x, z]) for all z.

    Requires a genuine symplectic structure (closed, non-degenerate); the
    result is verified flat and torsion-free.
    """
    s.validate()
    n = s.dim
    omega_t = s.omega.transpose()
    e = [unit_vector(n, i) for i in range(n)]
    gamma = [[None] * n for _ in range(n)]
    for i in range(n):
        for jj in range(n):
            rhs = tuple(
                -s.omega_value(e[jj], s.algebra.bracket_vectors(e[i], e[m]))
                for m in range(n)
            )
            w = solve_linear(omega_t, rhs)
            assert w is not None
            gamma[i][jj] = w
    conn = FlatConnection(s.algebra, _freeze_tensor(gamma), label=f"canonical({s.algebra.name})")
    report = check_flat_torsion_free(conn)
    if not report.ok:
        raise IntegrityError("canonical connection failed the flat torsion-free check")
    return conn


@dataclass(frozen=True)
class NilpotencyCertificate:
    nilpotent: bool
    lcs_dims: tuple[int, ...]
    extension_class: int | None
    base_nilpotent: bool
    complete: bool
    condition_sum_ok: bool | None
    power_bound: int | None

    @property
    def conditions_verdict(self) -> bool:
        return bool(self.base_nilpotent and self.complete and self.condition_sum_ok)


def _uniform_rho_nilindex(rep: DualRep) -> int | None:
    """Smallest r with every r-fold product of rho generators zero (None if none)."""
    n = rep.dim
    space = Subspace.full(n)
    for r in range(n + 1):
        if space.dim == 0:
            return r
        images = [m.apply(v) for m in rep.matrices for v in space.basis]
        nxt = Subspace.from_vectors(n, images)
        if nxt.dim >= space.dim:
            return None
        space = nxt
    return None


def extension_nilpotency(triple: ExtensionTriple) -> NilpotencyCertificate:
    """Nilpotency of the extension, certified two independent ways.

    Path (a): the lower central series of the built algebra (authoritative).
    Path (b): base nilpotent + connection complete + the vanishing of
    sum_j rho(x)^j alpha(x, ad_x^{p-1-j} y), checked on basis directions and
    seeded random x with p = class(h) + uniform nilindex of rho.  A
    disagreement raises IntegrityError.
    """
    extension = build_extension(triple)
    series = lower_central_series(extension.algebra)
    lcs_dims = tuple(sp.dim for sp in series)
    verdict_a = lcs_dims[-1] == 0

    conn = triple.connection
    n = conn.dim
    base_class = nilpotency_class(conn.base)
    base_nilpotent = base_class is not None
    complete = is_geodesically_complete(conn).complete
    rep = dual_representation(conn)

    condition_ok: bool | None = None
    p: int | None = None
    if base_nilpotent:
        rho_index = _uniform_rho_nilindex(rep)
        p = max(1, base_class + (rho_index if rho_index is not None else n))
        alpha = triple.cocycle
        directions = list(
            random_vectors(
                NILPOTENCY_DIRECTION_SEED,
                conn.label or "conn",
                n,
                NILPOTENCY_DIRECTION_COUNT,
            )
        )
        directions = [unit_vector(n, i) for i in range(n)] + directions
        condition_ok = True
        for x in directions:
            ad_x = conn.base.ad_matrix(x)
            rho_x = rep.rho_of(x)
            # ad_x^{p-1-j} e_b precomputed for all powers 0..p-1
            powers = [[unit_vector(n, b) for b in range(n)]]
            for _ in range(p - 1):
                powers.append([ad_x.apply(v) for v in powers[-1]])
            for b in range(n):
                total = [ZERO] * n
                for jj in range(p):
                    term = alpha.value_at(x, powers[p - 1 - jj][b])
                    for _ in range(jj):
                        term = rho_x.apply(term)
                    for t in range(n):
                        total[t] += term[t]
                if not is_zero_vector(tuple(total)):
                    condition_ok = False
                    break
            if not condition_ok:
                break

    certificate = NilpotencyCertificate(
        nilpotent=verdict_a,
        lcs_dims=lcs_dims,
        extension_class=len(lcs_dims) - 1 if verdict_a else None,
        base_nilpotent=base_nilpotent,
        complete=complete,
        condition_sum_ok=condition_ok,
        power_bound=p,
    )
    if verdict_a != certificate.conditions_verdict:
        raise IntegrityError(
            "lower-central-series verdict and the three-condition verdict disagree: "
            f"{verdict_a} vs {certificate.conditions_verdict}"
        )
    return certificate


def equivalence_map_psi(
    t1: ExtensionTriple, t2: ExtensionTriple, sigma: OneCochain
) -> RatMatrix:
    """The isomorphism (x, xi) -> (x, xi + sigma(x)) between two extensions.

    Requires both triples to share the connection and the cocycles to be
    related by alpha_2 = alpha_1 - d(sigma).  The returned 2n x 2n matrix is
    verified to preserve brackets on all basis pairs; for symmetric sigma
    the pullback identity Psi^T omega Psi = omega is verified as well.
    """
    if t1.connection.gamma != t2.connection.gamma or t1.connection.base != t2.connection.base:
        raise ValueError("triples must share the same connection")
    rep = dual_representation(t1.connection)
    expected = t1.cocycle - coboundary_1(rep, sigma)
    if expected.tensor != t2.cocycle.tensor:
        raise ValueError("cocycles are not related by the coboundary of sigma")

    n = t1.connection.dim
    total = 2 * n
    rows = []
    for r in range(n):
        rows.append(unit_vector(total, r))
    for k in range(n):
        row = [ZERO] * total
        for i in range(n):
            row[i] = sigma.entries[i][k]
        row[n + k] = Fraction(1)
        rows.append(tuple(row))
    psi = RatMatrix(tuple(rows))

    g1 = build_extension(t1)
    g2 = build_extension(t2)
    for a in range(total):
        for b in range(a + 1, total):
            lhs = psi.apply(g1.algebra.bracket_vectors(unit_vector(total, a), unit_vector(total, b)))
            rhs = g2.algebra.bracket_vectors(psi.col(a), psi.col(b))
            if lhs != rhs:
                raise IntegrityError(f"bracket preservation fails at basis pair ({a+1},{b+1})")
    if sigma.is_symmetric:
        pulled = psi.transpose() @ g2.omega @ psi
        if pulled != g1.omega:
            raise IntegrityError("pullback of omega under a Lagrangian shift must be omega")
    return psi


def adjusted_symplectic_form(
    triple: ExtensionTriple, sigma: OneCochain, sigma_l: OneCochain
) -> RatMatrix:
    """Symplectic form carried by the shifted extension with cocycle alpha - d(sigma).

    Computed as the exact pullback of the standard pairing form under the
    verified isomorphism (x, xi) -> (x, xi + (sigma_l - sigma)(x)) onto the
    extension by alpha - d(sigma_l); its h x h block is the alternating part
    of (sigma_l - sigma).  The result is antisymmetric and invertible by
    construction and is re-verified to be closed on the shifted extension.
    """
    if not sigma_l.is_symmetric:
        raise ValueError("sigma_l must be a symmetric (Lagrangian) 1-cochain")
    if not check_bianchi(triple.cocycle):
        raise ValueError("base cocycle must satisfy the cyclic-sum condition")
    rep = triple.dual_rep()
    alpha_bar = triple.cocycle - coboundary_1(rep, sigma)
    alpha_hat = triple.cocycle - coboundary_1(rep, sigma_l)
    t_bar = ExtensionTriple(triple.connection, alpha_bar)
    t_hat = ExtensionTriple(triple.connection, alpha_hat)
    tau = sigma_l - sigma
    psi = equivalence_map_psi(t_bar, t_hat, tau)
    base = standard_omega(triple.connection.dim)
    adjusted = psi.transpose() @ base @ psi
    if not adjusted.is_invertible():
        raise ValueError("adjusted form is degenerate")
    shifted = build_extension(t_bar)
    witnesses = d_omega(shifted, adjusted).witnesses()
    if witnesses:
        raise IntegrityError(
            f"adjusted form is not closed on the shifted extension: {witnesses[0]}"
        )
    return adjusted
