"""Cochain complexes C^1 -> C^2 -> C^3 for a flat Lie algebra acting on its dual.

Cochains take values in the dual space; a 1-cochain is an n x n matrix
s[i][k] = sigma(e_i)(e_k), a 2-cochain the tensor a[i][j][k] =
alpha(e_i, e_j)(e_k), antisymmetric in (i, j).  The Lagrangian subcomplex
consists of symmetric 1-cochains and cyclic-sum-zero 2-cochains.

All kernel and image computations flatten cochains to coordinate vectors in
a single canonical order: pairs (i, j) with i < j lexicographically, then
the dual coordinate k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .connection import DualRep
from .linalg import (
    RatMatrix,
    Subspace,
    Vector,
    ZERO,
    is_zero_vector,
    kernel_basis,
    quotient_basis,
    solve_linear,
    stack,
    vec,
    zero_vector,
)


def pair_list(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def triple_list(n: int) -> list[tuple[int, int, int]]:
    return list(combinations(range(n), 3))


@dataclass(frozen=True)
class OneCochain:
    """Linear map into the dual, as the matrix s[i][k] = sigma(e_i)(e_k)."""

    entries: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.entries)

    @staticmethod
    def zero(n: int) -> "OneCochain":
        return OneCochain(tuple(zero_vector(n) for _ in range(n)))

    @staticmethod
    def from_rows(rows) -> "OneCochain":
        return OneCochain(tuple(vec(r) for r in rows))

    @staticmethod
    def unit(n: int, i: int, k: int, value: Fraction = Fraction(1)) -> "OneCochain":
        rows = [[ZERO] * n for _ in range(n)]
        rows[i][k] = value
        return OneCochain.from_rows(rows)

    def value(self, i: int) -> Vector:
        """sigma(e_i) as a dual-coordinate vector."""
        return self.entries[i]

    def value_at(self, x: Vector) -> Vector:
        n = self.dim
        out = [ZERO] * n
        for i in range(n):
            if x[i] != 0:
                for k in range(n):
                    out[k] += x[i] * self.entries[i][k]
        return tuple(out)

    @property
    def is_symmetric(self) -> bool:
        n = self.dim
        return all(
            self.entries[i][k] == self.entries[k][i] for i in range(n) for k in range(i + 1, n)
        )

    def flatten(self) -> Vector:
        return tuple(x for row in self.entries for x in row)

    @staticmethod
    def unflatten(n: int, v: Vector) -> "OneCochain":
        return OneCochain(tuple(tuple(v[i * n + k] for k in range(n)) for i in range(n)))

    def __sub__(self, other: "OneCochain") -> "OneCochain":
        return OneCochain.from_rows(
            [
                [a - b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.entries, other.entries, strict=True)
            ]
        )


@dataclass(frozen=True)
class TwoCochain:
    """Alternating bilinear map into the dual: a[i][j][k] = alpha(e_i,e_j)(e_k)."""

    tensor: tuple[tuple[Vector, ...], ...]

    def __post_init__(self):
        n = self.dim
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    if self.tensor[i][j][k] != -self.tensor[j][i][k]:
                        raise ValueError("2-cochain tensor is not antisymmetric in (i, j)")

    @property
    def dim(self) -> int:
        return len(self.tensor)

    @staticmethod
    def zero(n: int) -> "TwoCochain":
        return TwoCochain(tuple(tuple(zero_vector(n) for _ in range(n)) for _ in range(n)))

    @staticmethod
    def from_pairs(n: int, values: dict[tuple[int, int], Vector]) -> "TwoCochain":
        """Build from {(i, j): alpha(e_i, e_j)} with i < j, 0-based."""
        t = [[list(zero_vector(n)) for _ in range(n)] for _ in range(n)]
        for (i, j), v in values.items():
            if not 0 <= i < j < n:
                raise ValueError(f"bad pair ({i}, {j})")
            for k in range(n):
                t[i][j][k] = Fraction(v[k])
                t[j][i][k] = -Fraction(v[k])
        return TwoCochain(tuple(tuple(tuple(row) for row in plane) for plane in t))

    def value(self, i: int, j: int) -> Vector:
        return self.tensor[i][j]

    def value_at(self, x: Vector, y: Vector) -> Vector:
        n = self.dim
        out = [ZERO] * n
        for i in range(n):
            if x[i] == 0:
                continue
            for j in range(n):
                if y[j] == 0:
                    continue
                coeff = x[i] * y[j]
                row = self.tensor[i][j]
                for k in range(n):
                    if row[k] != 0:
                        out[k] += coeff * row[k]
        return tuple(out)

    def is_zero(self) -> bool:
        return all(
            is_zero_vector(row) for plane in self.tensor for row in plane
        )

    def cyclic_sum(self, i: int, j: int, k: int) -> Fraction:
        return self.tensor[i][j][k] + self.tensor[j][k][i] + self.tensor[k][i][j]

    @property
    def is_lagrangian(self) -> bool:
        """Cyclic-sum-zero on all triples (the Bianchi condition)."""
        n = self.dim
        return all(self.cyclic_sum(i, j, k) == 0 for i, j, k in combinations(range(n), 3))

    def flatten(self) -> Vector:
        n = self.dim
        return tuple(
            self.tensor[i][j][k] for (i, j) in pair_list(n) for k in range(n)
        )

    @staticmethod
    def unflatten(n: int, v: Vector) -> "TwoCochain":
        values = {}
        for p, (i, j) in enumerate(pair_list(n)):
            values[(i, j)] = tuple(v[p * n + k] for k in range(n))
        return TwoCochain.from_pairs(n, values)

    def __sub__(self, other: "TwoCochain") -> "TwoCochain":
        n = self.dim
        return TwoCochain(
            tuple(
                tuple(
                    tuple(
                        self.tensor[i][j][k] - other.tensor[i][j][k] for k in range(n)
                    )
                    for j in range(n)
                )
                for i in range(n)
            )
        )


@dataclass(frozen=True)
class ThreeCochain:
    """Residual of the degree-2 coboundary, indexed by lex triples i<j<k."""

    dim: int
    values: tuple[Vector, ...]  # one dual-coordinate vector per triple

    def is_zero(self) -> bool:
        return all(is_zero_vector(v) for v in self.values)

    def witnesses(self) -> tuple[tuple[tuple[int, int, int], Vector], ...]:
        out = []
        for (i, j, k), v in zip(triple_list(self.dim), self.values):
            if not is_zero_vector(v):
                out.append(((i + 1, j + 1, k + 1), v))
        return tuple(out)


def coboundary_1(rep: DualRep, sigma: OneCochain) -> TwoCochain:
    """(d sigma)(x,y) = rho(x) sigma(y) - rho(y) sigma(x) - sigma([x,y])."""
    n = rep.dim
    if sigma.dim != n:
        raise ValueError("cochain dimension does not match the representation")
    c = rep.connection.base.bracket
    values = {}
    for i, j in pair_list(n):
        term = list(rep.matrices[i].apply(sigma.value(j)))
        term2 = rep.matrices[j].apply(sigma.value(i))
        term3 = sigma.value_at(c[i][j])
        values[(i, j)] = tuple(a - b - d for a, b, d in zip(term, term2, term3))
    return TwoCochain.from_pairs(n, values)


def coboundary_2(rep: DualRep, alpha: TwoCochain) -> ThreeCochain:
    """Residual of the degree-2 coboundary on all lex triples.

    alpha is a 2-cocycle iff the residual vanishes identically.
    """
    n = rep.dim
    if alpha.dim != n:
        raise ValueError("cochain dimension does not match the representation")
    c = rep.connection.base.bracket
    out = []
    for i, j, k in triple_list(n):
        v = list(rep.matrices[i].apply(alpha.value(j, k)))
        for t, x in enumerate(rep.matrices[j].apply(alpha.value(k, i))):
            v[t] += x
        for t, x in enumerate(rep.matrices[k].apply(alpha.value(i, j))):
            v[t] += x
        ei, ej, ek = (tuple(1 if s == m else 0 for s in range(n)) for m in (i, j, k))
        for t, x in enumerate(alpha.value_at(ei, c[j][k])):
            v[t] += x
        for t, x in enumerate(alpha.value_at(ek, c[i][j])):
            v[t] += x
        for t, x in enumerate(alpha.value_at(ej, c[k][i])):
            v[t] += x
        out.append(tuple(v))
    return ThreeCochain(n, tuple(out))


def one_cochain_basis(n: int) -> list[OneCochain]:
    """Matrix units in row-major order (the canonical C^1 coordinates)."""
    return [OneCochain.unit(n, i, k) for i in range(n) for k in range(n)]


def symmetric_one_cochain_basis(n: int) -> list[OneCochain]:
    """Basis of C^1_L: E_ii, then E_ik + E_ki for i < k, lex order."""
    basis = []
    for i in range(n):
        for k in range(i, n):
            rows = [[ZERO] * n for _ in range(n)]
            rows[i][k] = Fraction(1)
            rows[k][i] = Fraction(1)
            basis.append(OneCochain.from_rows(rows))
    return basis


def matrix_of_coboundary_1(rep: DualRep, basis: list[OneCochain] | None = None) -> RatMatrix:
    """Columns = flattened images of the given C^1 basis (default: matrix units)."""
    if basis is None:
        basis = one_cochain_basis(rep.dim)
    cols = [coboundary_1(rep, s).flatten() for s in basis]
    return RatMatrix(tuple(cols)).transpose()


def matrix_of_coboundary_2(rep: DualRep) -> RatMatrix:
    """Linearized degree-2 coboundary; columns follow the pair-then-k flattening."""
    n = rep.dim
    width = len(pair_list(n)) * n
    if not triple_list(n):
        # No triples to constrain (n < 3): a single zero row keeps the shape.
        return RatMatrix.zero(1, width)
    rows_out: list[list[Fraction]] = [[] for _ in range(len(triple_list(n)) * n)]
    for i, j in pair_list(n):
        for k in range(n):
            basis_cochain = TwoCochain.from_pairs(
                n, {(i, j): tuple(Fraction(1) if t == k else ZERO for t in range(n))}
            )
            image = coboundary_2(rep, basis_cochain)
            col = [x for v in image.values for x in v]
            for r, x in enumerate(col):
                rows_out[r].append(x)
    return RatMatrix(tuple(tuple(r) for r in rows_out))


def cyclic_sum_matrix(n: int) -> RatMatrix:
    """Rows: cyclic sums over lex triples, in flattened C^2 coordinates."""
    pairs = pair_list(n)
    pair_index = {p: idx for idx, p in enumerate(pairs)}
    width = len(pairs) * n

    def coord(i: int, j: int, k: int) -> tuple[int, Fraction]:
        # a[i][j][k] as +/- a flattened coordinate
        if i < j:
            return pair_index[(i, j)] * n + k, Fraction(1)
        return pair_index[(j, i)] * n + k, Fraction(-1)

    if not triple_list(n):
        return RatMatrix.zero(1, width)
    rows = []
    for i, j, k in triple_list(n):
        row = [ZERO] * width
        for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
            idx, sign = coord(a, b, c)
            row[idx] += sign
        rows.append(tuple(row))
    return RatMatrix(tuple(rows))


def cocycle_bases(rep: DualRep) -> tuple[Subspace, Subspace]:
    """(Z^2, Z^2_L) as echelon subspaces of flattened C^2 coordinates."""
    d2 = matrix_of_coboundary_2(rep)
    z2 = kernel_basis(d2)
    z2l = kernel_basis(stack(d2, cyclic_sum_matrix(rep.dim)))
    return z2, z2l


def coboundary_image(rep: DualRep, lagrangian: bool) -> Subspace:
    basis = symmetric_one_cochain_basis(rep.dim) if lagrangian else one_cochain_basis(rep.dim)
    images = [coboundary_1(rep, s).flatten() for s in basis]
    width = len(pair_list(rep.dim)) * rep.dim
    return Subspace.from_vectors(width, images)


@dataclass(frozen=True)
class CohomologySummary:
    """Dimensions and quotient representatives of the extension cohomologies."""

    dim_c1: int
    dim_c1_lagrangian: int
    dim_z2: int
    dim_b2: int                  # image of C^1
    dim_b2_lagrangian: int       # image of C^1_L
    dim_z2_lagrangian: int
    dim_h2: int
    dim_h2_lagrangian: int
    natural_map_rank: int        # rank of H^2_L -> H^2
    h2_representatives: tuple[TwoCochain, ...]
    h2_lagrangian_representatives: tuple[TwoCochain, ...]


def cohomology(rep: DualRep) -> CohomologySummary:
    n = rep.dim
    z2, z2l = cocycle_bases(rep)
    b2 = coboundary_image(rep, lagrangian=False)
    b2l = coboundary_image(rep, lagrangian=True)
    h2_reps = quotient_basis(z2, b2)
    h2l_reps = quotient_basis(z2l, b2l)
    natural_rank = z2l.sum(b2).dim - b2.dim
    summary = CohomologySummary(
        dim_c1=n * n,
        dim_c1_lagrangian=n * (n + 1) // 2,
        dim_z2=z2.dim,
        dim_b2=b2.dim,
        dim_b2_lagrangian=b2l.dim,
        dim_z2_lagrangian=z2l.dim,
        dim_h2=z2.dim - b2.dim,
        dim_h2_lagrangian=z2l.dim - b2l.dim,
        natural_map_rank=natural_rank,
        h2_representatives=tuple(TwoCochain.unflatten(n, v) for v in h2_reps),
        h2_lagrangian_representatives=tuple(TwoCochain.unflatten(n, v) for v in h2l_reps),
    )
    assert summary.dim_h2 == len(summary.h2_representatives)
    assert summary.dim_h2_lagrangian == len(summary.h2_lagrangian_representatives)
    return summary


def solve_coboundary(
    rep: DualRep,
    alpha: TwoCochain,
    beta: TwoCochain,
    lagrangian_only: bool = False,
) -> OneCochain | None:
    """A sigma with beta = alpha - d(sigma), restricted to C^1_L when asked.

    Returns None when the cocycles are not cohomologous (in the requested
    complex).  The solution is echelon-minimal in the chosen basis
    coordinates.
    """
    n = rep.dim
    basis = symmetric_one_cochain_basis(n) if lagrangian_only else one_cochain_basis(n)
    m = matrix_of_coboundary_1(rep, basis)
    target = (alpha - beta).flatten()
    coeffs = solve_linear(m, target)
    if coeffs is None:
        return None
    rows = [[ZERO] * n for _ in range(n)]
    for coeff, cochain in zip(coeffs, basis):
        if coeff != 0:
            for i in range(n):
                for k in range(n):
                    rows[i][k] += coeff * cochain.entries[i][k]
    return OneCochain.from_rows(rows)


def two_cochain_from_coefficients(
    space: Subspace, coefficients: Vector, n: int
) -> TwoCochain:
    """Linear combination of a flattened-cochain subspace basis."""
    if len(coefficients) != space.dim:
        raise ValueError("coefficient count does not match basis size")
    total = [ZERO] * space.ambient_dim
    for coeff, basis_vec in zip(coefficients, space.basis):
        if coeff != 0:
            for t, x in enumerate(basis_vec):
                total[t] += coeff * x
    return TwoCochain.unflatten(n, tuple(total))
