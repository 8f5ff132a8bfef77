"""Flat torsion-free connections on a Lie algebra and their dual representation.

A connection is the coefficient tensor gamma[i][j][k] of nabla_{e_i} e_j =
sum_k gamma[i][j][k] e_k.  Torsion-freeness is the pre-Lie axiom
x.y - y.x = [x, y]; flatness says x -> nabla_x is a representation.  The
left-symmetric associator identity (x,y,z) = (y,x,z) is computed as an
independent cross-validation of the curvature check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .lie import LieAlgebra, _freeze_tensor
from .linalg import (
    RatMatrix,
    Vector,
    ZERO,
    is_zero_vector,
    zero_vector,
)
from .sampling import random_vectors

GammaTensor = tuple[tuple[Vector, ...], ...]

# Number of seeded non-basis directions on which "for all x" statements are
# spot-checked (the trace criterion stays the authoritative verdict).
RANDOM_DIRECTION_COUNT = 8
RANDOM_DIRECTION_SEED = "flat-conn-directions"


@dataclass(frozen=True)
class FlatConnection:
    """Connection tensor over a base Lie algebra, with any instantiated parameters."""

    base: LieAlgebra
    gamma: GammaTensor
    params: tuple[tuple[str, Fraction], ...] = ()
    label: str = ""

    def __post_init__(self):
        n = self.base.dim
        g = self.gamma
        if len(g) != n or any(len(p) != n for p in g) or any(
            len(row) != n for p in g for row in p
        ):
            raise ValueError("gamma tensor shape does not match base dimension")

    @staticmethod
    def from_entries(
        base: LieAlgebra,
        entries: dict[tuple[int, int], Vector],
        params: tuple[tuple[str, Fraction], ...] = (),
        label: str = "",
    ) -> "FlatConnection":
        """Build from 0-based {(i, j): nabla_{e_i} e_j}; unlisted pairs are zero."""
        n = base.dim
        g = [[list(zero_vector(n)) for _ in range(n)] for _ in range(n)]
        for (i, j), v in entries.items():
            for k in range(n):
                g[i][j][k] = Fraction(v[k])
        return FlatConnection(base, _freeze_tensor(g), params, label)

    @staticmethod
    def zero(base: LieAlgebra, label: str = "") -> "FlatConnection":
        return FlatConnection.from_entries(base, {}, label=label)

    @property
    def dim(self) -> int:
        return self.base.dim

    def nabla_matrix(self, i: int) -> RatMatrix:
        """Matrix of nabla_{e_i} (column j = image of e_j)."""
        n = self.dim
        return RatMatrix(
            tuple(tuple(self.gamma[i][j][k] for j in range(n)) for k in range(n))
        )

    def nabla_of(self, x: Vector) -> RatMatrix:
        """Matrix of nabla_x for x = sum x_i e_i (the assignment is linear in x)."""
        n = self.dim
        rows = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            plane = self.gamma[i]
            for j in range(n):
                row = plane[j]
                for k in range(n):
                    if row[k]:
                        rows[k][j] += xi * row[k]
        return RatMatrix(tuple(tuple(r) for r in rows))

    def right_mult_matrix(self, j: int) -> RatMatrix:
        """Matrix of y -> y . e_j (column i = nabla_{e_i} e_j)."""
        n = self.dim
        return RatMatrix(
            tuple(tuple(self.gamma[i][j][k] for i in range(n)) for k in range(n))
        )

    def product(self, x: Vector, y: Vector) -> Vector:
        return self.nabla_of(x).apply(y)


@dataclass(frozen=True)
class ConnectionReport:
    """Residual witnesses from the torsion / curvature / associator sweeps."""

    torsion: tuple[tuple[tuple[int, int], Vector], ...]
    curvature: tuple[tuple[tuple[int, int, int], Vector], ...]
    associator: tuple[tuple[tuple[int, int, int], Vector], ...]

    @property
    def torsion_free(self) -> bool:
        return not self.torsion

    @property
    def flat(self) -> bool:
        return not self.curvature

    @property
    def ok(self) -> bool:
        return not (self.torsion or self.curvature)

    @property
    def kv_consistent(self) -> bool:
        """Torsion-free and flat together must agree with KV1 + KV2."""
        kv_holds = not self.torsion and not self.associator
        return self.ok == kv_holds


def check_flat_torsion_free(conn: FlatConnection) -> ConnectionReport:
    """Exact sweep of T = 0, R = 0 and the left-symmetric associator identity."""
    n = conn.dim
    c = conn.base.bracket
    torsion = []
    for i, j in combinations(range(n), 2):
        residual = tuple(
            conn.gamma[i][j][k] - conn.gamma[j][i][k] - c[i][j][k] for k in range(n)
        )
        if not is_zero_vector(residual):
            torsion.append(((i + 1, j + 1), residual))

    nabla = [conn.nabla_matrix(i) for i in range(n)]
    curvature = []
    for i, j in combinations(range(n), 2):
        bracket_dir = c[i][j]
        m = nabla[i] @ nabla[j] - nabla[j] @ nabla[i]
        m = m - conn.nabla_of(bracket_dir)
        for s in range(n):
            col = m.col(s)
            if not is_zero_vector(col):
                curvature.append(((i + 1, j + 1, s + 1), col))

    # KV2 in matrix form: the operator z -> (x,y,z) - (y,x,z) for x = e_i,
    # y = e_j equals N(e_i.e_j) - N(e_j.e_i) - [N_i, N_j].
    associator = []
    for i, j in combinations(range(n), 2):
        m = conn.nabla_of(conn.gamma[i][j]) - conn.nabla_of(conn.gamma[j][i])
        m = m - (nabla[i] @ nabla[j] - nabla[j] @ nabla[i])
        for s in range(n):
            col = m.col(s)
            if not is_zero_vector(col):
                associator.append(((i + 1, j + 1, s + 1), col))

    report = ConnectionReport(tuple(torsion), tuple(curvature), tuple(associator))
    if not report.kv_consistent:
        raise RuntimeError(
            "curvature/torsion checks disagree with the KV axiom checks; "
            "this indicates an internal bug"
        )
    return report


def induced_bracket(conn: FlatConnection, name: str = "") -> LieAlgebra:
    """The algebra with bracket x.y - y.x (equals the base bracket iff torsion-free)."""
    n = conn.dim
    c = [
        [
            [conn.gamma[i][j][k] - conn.gamma[j][i][k] for k in range(n)]
            for j in range(n)
        ]
        for i in range(n)
    ]
    return LieAlgebra(n, _freeze_tensor(c), name)


@dataclass(frozen=True)
class CompletenessEvidence:
    """Trace criterion verdict plus nilpotency spot checks."""

    complete: bool
    traces: tuple[Fraction, ...]                 # tr of right multiplication by e_j
    nabla_nilpotent: tuple[bool, ...]            # per basis direction
    right_mult_nilpotent: tuple[bool, ...]       # per basis direction
    random_directions_nilpotent: tuple[bool, ...]  # nabla_x for seeded random x

    @property
    def all_nilpotent(self) -> bool:
        return (
            all(self.nabla_nilpotent)
            and all(self.right_mult_nilpotent)
            and all(self.random_directions_nilpotent)
        )


def is_geodesically_complete(conn: FlatConnection) -> CompletenessEvidence:
    """Completeness via tr(rho_x) = 0 on the basis (sufficient by linearity).

    Raises ValueError when the connection is not flat torsion-free, since the
    criterion is only meaningful for flat Lie algebras.
    """
    report = check_flat_torsion_free(conn)
    if not report.ok:
        raise ValueError("connection is not flat and torsion-free")
    n = conn.dim
    right = [conn.right_mult_matrix(j) for j in range(n)]
    traces = tuple(m.trace() for m in right)
    nabla = [conn.nabla_matrix(i) for i in range(n)]
    randoms = random_vectors(RANDOM_DIRECTION_SEED, conn.label or "conn", n, RANDOM_DIRECTION_COUNT)
    return CompletenessEvidence(
        complete=all(t == 0 for t in traces),
        traces=traces,
        nabla_nilpotent=tuple(m.is_nilpotent() for m in nabla),
        right_mult_nilpotent=tuple(m.is_nilpotent() for m in right),
        random_directions_nilpotent=tuple(
            conn.nabla_of(x).is_nilpotent() for x in randoms
        ),
    )


@dataclass(frozen=True)
class DualRep:
    """Action of the base algebra on its dual: rho(x) xi = -xi o nabla_x."""

    connection: FlatConnection
    matrices: tuple[RatMatrix, ...] = field(compare=False)

    @property
    def dim(self) -> int:
        return self.connection.dim

    def rho_of(self, x: Vector) -> RatMatrix:
        n = self.dim
        out = RatMatrix.zero(n, n)
        for i in range(n):
            if x[i] != 0:
                out = out + self.matrices[i].scale(x[i])
        return out


def dual_representation(conn: FlatConnection) -> DualRep:
    """rho(e_i) = -transpose(nabla_{e_i}); requires flatness.

    The representation law rho([x,y]) = [rho(x), rho(y)] is re-verified on
    all basis pairs; failure would mean the flatness check and the dual
    construction disagree, which is an internal error.
    """
    report = check_flat_torsion_free(conn)
    if not report.flat:
        raise ValueError("connection is not flat; the dual action is not a representation")
    n = conn.dim
    mats = tuple(-conn.nabla_matrix(i).transpose() for i in range(n))
    rep = DualRep(conn, mats)
    c = conn.base.bracket
    for i, j in combinations(range(n), 2):
        lhs = rep.rho_of(c[i][j])
        rhs = mats[i] @ mats[j] - mats[j] @ mats[i]
        if not (lhs - rhs).is_zero():
            raise RuntimeError("dual representation law failed despite flatness")
    return rep
