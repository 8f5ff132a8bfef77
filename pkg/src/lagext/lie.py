"""Lie algebras given by structure constants over Q.

The bracket tensor c[i][j][k] encodes [e_i, e_j] = sum_k c[i][j][k] e_k with
0-based indices.  Antisymmetry is enforced at construction; the Jacobi
identity is checked either explicitly via ``check_jacobi`` or by the
constructors of derived algebras (quotients, extensions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .linalg import (
    RatMatrix,
    Subspace,
    Vector,
    ZERO,
    is_zero_vector,
    kernel_basis,
    unit_vector,
    zero_vector,
)

BracketTensor = tuple[tuple[Vector, ...], ...]


def _freeze_tensor(c) -> BracketTensor:
    return tuple(tuple(tuple(Fraction(x) for x in row) for row in plane) for plane in c)


@dataclass(frozen=True)
class LieAlgebra:
    """Structure-constant Lie algebra with a fixed ordered basis."""

    dim: int
    bracket: BracketTensor
    name: str = ""

    def __post_init__(self):
        n = self.dim
        c = self.bracket
        if len(c) != n or any(len(plane) != n for plane in c) or any(
            len(row) != n for plane in c for row in plane
        ):
            raise ValueError("bracket tensor shape does not match dim")
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if c[i][j][k] != -c[j][i][k]:
                        raise ValueError(f"bracket not antisymmetric at ({i+1},{j+1},{k+1})")

    @staticmethod
    def from_brackets(dim: int, entries: dict[tuple[int, int], Vector], name: str = "") -> "LieAlgebra":
        """Build from 0-based {(i, j): [e_i, e_j]} with i < j; the rest by antisymmetry."""
        c = [[list(zero_vector(dim)) for _ in range(dim)] for _ in range(dim)]
        for (i, j), v in entries.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"bad bracket index pair ({i}, {j})")
            for k in range(dim):
                c[i][j][k] = Fraction(v[k])
                c[j][i][k] = -Fraction(v[k])
        return LieAlgebra(dim, _freeze_tensor(c), name)

    @staticmethod
    def abelian(dim: int, name: str = "") -> "LieAlgebra":
        return LieAlgebra.from_brackets(dim, {}, name)

    def bracket_vectors(self, x: Vector, y: Vector) -> Vector:
        n = self.dim
        out = [ZERO] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                coeff = x[i] * y[j]
                row = self.bracket[i][j]
                for k in range(n):
                    if row[k] != 0:
                        out[k] += coeff * row[k]
        return tuple(out)

    def ad_matrix(self, x: Vector) -> RatMatrix:
        """Matrix of ad_x = [x, .] in the fixed basis."""
        n = self.dim
        cols = [self.bracket_vectors(x, unit_vector(n, j)) for j in range(n)]
        return RatMatrix(tuple(cols)).transpose()

    def is_ideal(self, sub: Subspace) -> bool:
        n = self.dim
        return all(
            sub.contains(self.bracket_vectors(unit_vector(n, i), v))
            for i in range(n)
            for v in sub.basis
        )

    def rename(self, name: str) -> "LieAlgebra":
        return LieAlgebra(self.dim, self.bracket, name)


@dataclass(frozen=True)
class JacobiViolation:
    triple: tuple[int, int, int]  # 1-based basis indices
    residual: Vector


def check_jacobi(algebra: LieAlgebra) -> tuple[JacobiViolation, ...]:
    """All basis triples i<j<k where the cyclic Jacobi sum is nonzero."""
    n = algebra.dim
    c = algebra.bracket
    violations = []
    for i, j, k in combinations(range(n), 3):
        r = [ZERO] * n
        for a, inner_row in ((i, c[j][k]), (j, c[k][i]), (k, c[i][j])):
            # contribution of [e_a, inner] with inner = the listed bracket row
            for t in range(n):
                coeff = inner_row[t]
                if coeff:
                    outer = c[a][t]
                    for m in range(n):
                        if outer[m]:
                            r[m] += coeff * outer[m]
        if not is_zero_vector(tuple(r)):
            violations.append(JacobiViolation((i + 1, j + 1, k + 1), tuple(r)))
    return tuple(violations)


def require_jacobi(algebra: LieAlgebra) -> LieAlgebra:
    violations = check_jacobi(algebra)
    if violations:
        first = violations[0]
        raise ValueError(
            f"Jacobi identity fails at {first.triple}: residual {first.residual}"
        )
    return algebra


def bracket_of_subspaces(algebra: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    """span{[x, y] : x in A, y in B}."""
    vectors = [
        algebra.bracket_vectors(x, y) for x in a.basis for y in b.basis
    ]
    return Subspace.from_vectors(algebra.dim, vectors)


def lower_central_series(algebra: LieAlgebra) -> tuple[Subspace, ...]:
    """C^0 = g, C^{p+1} = [g, C^p], listed down to the first stable term."""
    full = Subspace.full(algebra.dim)
    series = [full]
    while True:
        nxt = bracket_of_subspaces(algebra, full, series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
        if nxt.dim == 0:
            break
    return tuple(series)


def derived_series(algebra: LieAlgebra) -> tuple[Subspace, ...]:
    series = [Subspace.full(algebra.dim)]
    while True:
        nxt = bracket_of_subspaces(algebra, series[-1], series[-1])
        if nxt.dim == series[-1].dim:
            break
        series.append(nxt)
        if nxt.dim == 0:
            break
    return tuple(series)


def is_nilpotent(algebra: LieAlgebra) -> bool:
    return lower_central_series(algebra)[-1].dim == 0


def nilpotency_class(algebra: LieAlgebra) -> int | None:
    """Steps until the lower central series hits 0; None if it never does."""
    series = lower_central_series(algebra)
    if series[-1].dim != 0:
        return None
    return len(series) - 1


def center(algebra: LieAlgebra) -> Subspace:
    """{x : [x, e_i] = 0 for all i} as the kernel of the stacked ad action."""
    n = algebra.dim
    if n == 0:
        return Subspace.zero(0)
    rows = []
    for j in range(n):
        # row block: x -> [x, e_j], i.e. entry (k, i) = c[i][j][k]
        for k in range(n):
            rows.append(tuple(algebra.bracket[i][j][k] for i in range(n)))
    return kernel_basis(RatMatrix(tuple(rows)))


def derivation_space(algebra: LieAlgebra) -> Subspace:
    """Kernel of D[x,y] = [Dx,y] + [x,Dy], D flattened row-major (n^2 unknowns)."""
    n = algebra.dim
    if n == 0:
        return Subspace.zero(0)
    if n == 1:
        # no bracket constraints: every endomorphism is a derivation
        return Subspace.full(1)
    c = algebra.bracket
    rows = []
    for i, j in combinations(range(n), 2):
        for k in range(n):
            # coefficient of D[a][b] in (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j])_k
            row = [ZERO] * (n * n)
            for b in range(n):
                row[k * n + b] += c[i][j][b]          # (D [e_i,e_j])_k picks D[k][b]
            for a in range(n):
                row[a * n + i] -= c[a][j][k]          # [De_i, e_j]_k picks D[a][i]
                row[a * n + j] -= c[i][a][k]          # [e_i, De_j]_k picks D[a][j]
            rows.append(tuple(row))
    return kernel_basis(RatMatrix(tuple(rows)))


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism-invariant summary; distinct fingerprints certify non-isomorphism."""

    dim: int
    lcs_dims: tuple[int, ...]
    ds_dims: tuple[int, ...]
    center_dim: int
    derivation_dim: int
    nilpotency_class: int | None
    is_filiform: bool


def fingerprint(algebra: LieAlgebra) -> Fingerprint:
    lcs = tuple(s.dim for s in lower_central_series(algebra))
    ds = tuple(s.dim for s in derived_series(algebra))
    cls = nilpotency_class(algebra)
    # Filiform means maximal class n-1; the notion starts at dim 3.
    filiform = algebra.dim >= 3 and cls is not None and cls == algebra.dim - 1
    return Fingerprint(
        dim=algebra.dim,
        lcs_dims=lcs,
        ds_dims=ds,
        center_dim=center(algebra).dim,
        derivation_dim=derivation_space(algebra).dim,
        nilpotency_class=cls,
        is_filiform=filiform,
    )


def quotient_algebra(algebra: LieAlgebra, ideal: Subspace, name: str = "") -> LieAlgebra:
    """Quotient by an ideal, in the complement basis of the ideal's non-pivot coordinates.

    Raises ValueError if the subspace is not an ideal.
    """
    if ideal.ambient_dim != algebra.dim:
        raise ValueError("ambient dimension mismatch")
    if not algebra.is_ideal(ideal):
        raise ValueError("subspace is not an ideal")
    keep = ideal.complement_coordinates()
    m = len(keep)
    n = algebra.dim
    c = [[list(zero_vector(m)) for _ in range(m)] for _ in range(m)]
    for a in range(m):
        for b in range(m):
            w = ideal.reduce(
                algebra.bracket_vectors(unit_vector(n, keep[a]), unit_vector(n, keep[b]))
            )
            # Reduction against the ideal's echelon basis leaves support on
            # non-pivot coordinates only.
            for t in range(m):
                c[a][b][t] = w[keep[t]]
    quotient = LieAlgebra(m, _freeze_tensor(c), name)
    return require_jacobi(quotient)


def transform(algebra: LieAlgebra, p: RatMatrix, name: str = "") -> LieAlgebra:
    """Structure constants in the new basis f_j = sum_i P[i][j] e_i (P invertible)."""
    n = algebra.dim
    if p.rows != n or p.cols != n:
        raise ValueError("change of basis must be square of matching size")
    p_inv = p.inverse()
    cols = [p.col(j) for j in range(n)]
    c = [
        [list(p_inv.apply(algebra.bracket_vectors(cols[a], cols[b]))) for b in range(n)]
        for a in range(n)
    ]
    return LieAlgebra(n, _freeze_tensor(c), name)


def direct_sum_embedding(v: Vector, total: int, offset: int) -> Vector:
    """v placed at coordinates [offset, offset + len(v)) of a zero vector."""
    out = [ZERO] * total
    for i, x in enumerate(v):
        out[offset + i] = x
    return tuple(out)
