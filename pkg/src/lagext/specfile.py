"""Line-oriented text format for algebras, connections, forms and cocycles.

Every data line carries its own keyword, '#' starts a comment, and blocks
are just groups of same-keyword lines:

    algebra l dim 4
    bracket e1 e2 -> 1 e3
    param t positive
    connection e1 e2 -> 1/2 e3
    omega e1 e^1 -> -1
    cocycle e1 e2 -> 1 e^3

Basis tokens are e1..en; for even n the dual tokens e^1..e^n/2 address the
second half of the basis (the extension convention), except on the
right-hand side of a cocycle line, where e^k is the k-th dual coordinate.
Coefficients are rational literals "p" or "p/q" or expressions in declared
parameters, written without internal whitespace.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exprs import Expr, ExprError


class SpecParseError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


_TOKEN_RE = re.compile(r"^e(\^?)(\d+)$")


@dataclass(frozen=True)
class BasisToken:
    text: str

    @property
    def dual(self) -> bool:
        return "^" in self.text

    @property
    def number(self) -> int:
        m = _TOKEN_RE.match(self.text)
        assert m is not None
        return int(m.group(2))

    @staticmethod
    def parse(text: str, line_no: int) -> "BasisToken":
        if not _TOKEN_RE.match(text):
            raise SpecParseError(line_no, f"bad basis token {text!r}")
        return BasisToken(text)

    def resolve(self, dim: int, line_no: int) -> int:
        """0-based ambient index under the extension convention."""
        k = self.number
        if self.dual:
            if dim % 2 != 0:
                raise SpecParseError(line_no, f"dual token {self.text!r} needs even dimension")
            if not 1 <= k <= dim // 2:
                raise SpecParseError(line_no, f"dual index out of range in {self.text!r}")
            return dim // 2 + k - 1
        if not 1 <= k <= dim:
            raise SpecParseError(line_no, f"basis index out of range in {self.text!r}")
        return k - 1

    @staticmethod
    def primal(k: int) -> "BasisToken":
        return BasisToken(f"e{k + 1}")

    @staticmethod
    def dual_token(k: int) -> "BasisToken":
        return BasisToken(f"e^{k + 1}")


@dataclass(frozen=True)
class Term:
    coeff: Expr
    token: BasisToken


def parse_rhs(text: str, line_no: int = 0) -> tuple[Term, ...]:
    """Parse "EXPR eK + EXPR e^K + ..." (a missing EXPR means 1)."""
    terms = []
    for chunk in text.split(" + "):
        fields = chunk.split()
        if not fields:
            raise SpecParseError(line_no, "empty term")
        token = BasisToken.parse(fields[-1], line_no)
        if len(fields) == 1:
            coeff = Expr.const(1)
        elif len(fields) == 2:
            try:
                coeff = Expr.parse(fields[0])
            except ExprError as exc:
                raise SpecParseError(line_no, str(exc)) from None
        else:
            raise SpecParseError(line_no, f"too many fields in term {chunk!r}")
        terms.append(Term(coeff, token))
    return tuple(terms)


def format_rhs(terms) -> str:
    parts = []
    for term in terms:
        if term.coeff == Expr.const(1):
            parts.append(term.token.text)
        else:
            parts.append(f"{term.coeff} {term.token.text}")
    return " + ".join(parts)


@dataclass(frozen=True)
class ParamSpec:
    """Constraint on one named rational parameter."""

    name: str
    kind: str = "free"  # free | positive | nonzero | positive_nonzero
    greater_than: Fraction | None = None
    less_than: Fraction | None = None
    excluded: tuple[Expr, ...] = ()

    def admits(self, value: Fraction, env: dict[str, Fraction]) -> bool:
        if self.kind in ("positive", "positive_nonzero") and value <= 0:
            return False
        if self.kind in ("nonzero", "positive_nonzero") and value == 0:
            return False
        if self.greater_than is not None and value <= self.greater_than:
            return False
        if self.less_than is not None and value >= self.less_than:
            return False
        for expr in self.excluded:
            if value == expr.evaluate(env):
                return False
        return True

    def describe(self) -> str:
        parts = [self.name]
        if self.kind != "free":
            parts.append(self.kind)
        if self.greater_than is not None:
            parts.append(f"gt {self.greater_than}")
        if self.less_than is not None:
            parts.append(f"lt {self.less_than}")
        if self.excluded:
            parts.append("exclude " + ",".join(str(e) for e in self.excluded))
        if len(parts) == 1:
            parts.append("free")
        return " ".join(parts)

    @staticmethod
    def parse(fields: list[str], line_no: int) -> "ParamSpec":
        if not fields:
            raise SpecParseError(line_no, "param line needs a name")
        name = fields[0]
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
            raise SpecParseError(line_no, f"bad parameter name {name!r}")
        kind = "free"
        gt = lt = None
        excluded: list[Expr] = []
        idx = 1
        while idx < len(fields):
            word = fields[idx]
            if word in ("free", "positive", "nonzero", "positive_nonzero"):
                kind = word
                idx += 1
            elif word in ("gt", "lt"):
                if idx + 1 >= len(fields):
                    raise SpecParseError(line_no, f"{word} needs a value")
                try:
                    bound = Fraction(fields[idx + 1])
                except ValueError:
                    raise SpecParseError(line_no, f"bad bound {fields[idx + 1]!r}") from None
                if word == "gt":
                    gt = bound
                else:
                    lt = bound
                idx += 2
            elif word == "exclude":
                if idx + 1 >= len(fields):
                    raise SpecParseError(line_no, "exclude needs at least one value")
                try:
                    excluded.extend(Expr.parse(p) for p in fields[idx + 1].split(","))
                except ExprError as exc:
                    raise SpecParseError(line_no, str(exc)) from None
                idx += 2
            else:
                raise SpecParseError(line_no, f"unknown constraint word {word!r}")
        return ParamSpec(name, kind, gt, lt, tuple(excluded))


@dataclass(frozen=True)
class CellLine:
    """One "keyword TOK TOK -> RHS" data line (bracket/connection/cocycle)."""

    left: BasisToken
    right: BasisToken
    terms: tuple[Term, ...]


@dataclass(frozen=True)
class OmegaLine:
    left: BasisToken
    right: BasisToken
    value: Expr


@dataclass(frozen=True)
class SpecFile:
    name: str
    dim: int
    brackets: tuple[CellLine, ...] = ()
    connection: tuple[CellLine, ...] = ()
    omega: tuple[OmegaLine, ...] = ()
    cocycle: tuple[CellLine, ...] = ()
    params: tuple[ParamSpec, ...] = ()

    @property
    def param_names(self) -> frozenset[str]:
        return frozenset(p.name for p in self.params)


def _split_arrow(rest: str, line_no: int) -> tuple[list[str], str]:
    if "->" not in rest:
        raise SpecParseError(line_no, "expected '->'")
    lhs, rhs = rest.split("->", 1)
    return lhs.split(), rhs.strip()


def parse_spec(text: str) -> SpecFile:
    name = None
    dim = None
    brackets: list[CellLine] = []
    connection: list[CellLine] = []
    omega: list[OmegaLine] = []
    cocycle: list[CellLine] = []
    params: list[ParamSpec] = []

    pending: list[tuple[int, str, str]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        rest = rest.strip()
        if keyword == "algebra":
            if name is not None:
                raise SpecParseError(line_no, "duplicate algebra line")
            m = re.fullmatch(r"(\S+)\s+dim\s+(\d+)", rest)
            if not m:
                raise SpecParseError(line_no, "expected 'algebra NAME dim N'")
            name = m.group(1)
            dim = int(m.group(2))
        elif keyword in ("bracket", "connection", "cocycle", "omega", "param"):
            pending.append((line_no, keyword, rest))
        else:
            raise SpecParseError(line_no, f"unknown keyword {keyword!r}")

    if name is None or dim is None:
        raise SpecParseError(1, "missing 'algebra NAME dim N' line")

    for line_no, keyword, rest in pending:
        if keyword == "param":
            params.append(ParamSpec.parse(rest.split(), line_no))
            continue
        lhs, rhs = _split_arrow(rest, line_no)
        if len(lhs) != 2:
            raise SpecParseError(line_no, "expected two basis tokens before '->'")
        left = BasisToken.parse(lhs[0], line_no)
        right = BasisToken.parse(lhs[1], line_no)
        left.resolve(dim, line_no)
        right.resolve(dim, line_no)
        if keyword == "omega":
            try:
                value = Expr.parse(rhs)
            except ExprError as exc:
                raise SpecParseError(line_no, str(exc)) from None
            omega.append(OmegaLine(left, right, value))
            continue
        terms = parse_rhs(rhs, line_no)
        for term in terms:
            if keyword == "cocycle":
                if not term.token.dual:
                    raise SpecParseError(line_no, "cocycle values must use dual tokens e^k")
                if not 1 <= term.token.number <= dim:
                    raise SpecParseError(line_no, f"dual index out of range in {term.token.text!r}")
            else:
                term.token.resolve(dim, line_no)
        cell = CellLine(left, right, terms)
        if keyword == "bracket":
            brackets.append(cell)
        elif keyword == "connection":
            connection.append(cell)
        else:
            cocycle.append(cell)

    spec = SpecFile(
        name,
        dim,
        tuple(brackets),
        tuple(connection),
        tuple(omega),
        tuple(cocycle),
        tuple(params),
    )
    _check_declared_params(spec)
    return spec


def _check_declared_params(spec: SpecFile):
    declared = spec.param_names
    used: set[str] = set()
    for cell in spec.brackets + spec.connection + spec.cocycle:
        for term in cell.terms:
            used |= term.coeff.names
    for line in spec.omega:
        used |= line.value.names
    for p in spec.params:
        for expr in p.excluded:
            used |= expr.names - {p.name}
    undeclared = sorted(used - declared)
    if undeclared:
        raise SpecParseError(0, f"undeclared parameters: {', '.join(undeclared)}")


def serialize_spec(spec: SpecFile) -> str:
    lines = [f"algebra {spec.name} dim {spec.dim}"]
    for cell in spec.brackets:
        lines.append(
            f"bracket {cell.left.text} {cell.right.text} -> {format_rhs(cell.terms)}"
        )
    for p in spec.params:
        lines.append(f"param {p.describe()}")
    for cell in spec.connection:
        lines.append(
            f"connection {cell.left.text} {cell.right.text} -> {format_rhs(cell.terms)}"
        )
    for line in spec.omega:
        lines.append(f"omega {line.left.text} {line.right.text} -> {line.value}")
    for cell in spec.cocycle:
        lines.append(
            f"cocycle {cell.left.text} {cell.right.text} -> {format_rhs(cell.terms)}"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# building runtime objects from a parsed file
# ---------------------------------------------------------------------------


class DuplicateCellError(ValueError):
    """The same (i, j) slot is assigned twice; never resolved silently."""

    def __init__(self, kind: str, duplicates):
        self.kind = kind
        self.duplicates = duplicates
        slots = ", ".join(f"({i},{j})" for i, j in duplicates)
        super().__init__(f"conflicting duplicate {kind} assignments at {slots}")


def _evaluate_terms(terms, dim: int, env: dict[str, Fraction], dual_as_value: bool):
    from .linalg import ZERO

    out = [ZERO] * dim
    for term in terms:
        if dual_as_value:
            idx = term.token.number - 1
        else:
            idx = term.token.resolve(dim, 0)
        out[idx] += term.coeff.evaluate(env)
    return tuple(out)


def _collect_cells(cells, dim: int, env: dict[str, Fraction], kind: str, dual_as_value=False):
    """Map (i, j) -> value vector, raising DuplicateCellError on repeated slots."""
    seen: dict[tuple[int, int], tuple] = {}
    duplicates = []
    for cell in cells:
        i = cell.left.resolve(dim, 0)
        j = cell.right.resolve(dim, 0)
        if (i, j) in seen:
            duplicates.append((i + 1, j + 1))
            continue
        seen[(i, j)] = _evaluate_terms(cell.terms, dim, env, dual_as_value)
    if duplicates:
        raise DuplicateCellError(kind, tuple(duplicates))
    return seen


def build_algebra(spec: SpecFile, env: dict[str, Fraction] | None = None):
    """LieAlgebra from the bracket block; antisymmetric completion of given cells."""
    from .lie import LieAlgebra, require_jacobi
    from .linalg import vec_scale

    env = env or {}
    cells = _collect_cells(spec.brackets, spec.dim, env, "bracket")
    entries: dict[tuple[int, int], tuple] = {}
    for (i, j), v in cells.items():
        if i == j:
            if any(x != 0 for x in v):
                raise ValueError(f"bracket of e{i+1} with itself must vanish")
            continue
        key = (i, j) if i < j else (j, i)
        value = v if i < j else vec_scale(Fraction(-1), v)
        if key in entries and entries[key] != value:
            raise DuplicateCellError("bracket", ((key[0] + 1, key[1] + 1),))
        entries[key] = value
    return require_jacobi(LieAlgebra.from_brackets(spec.dim, entries, spec.name))


def build_connection(spec: SpecFile, algebra, env: dict[str, Fraction] | None = None):
    """FlatConnection tensor from the connection block (may still fail axioms)."""
    from .connection import FlatConnection

    env = env or {}
    if not spec.connection:
        raise ValueError("spec file has no connection block")
    cells = _collect_cells(spec.connection, spec.dim, env, "connection")
    return FlatConnection.from_entries(
        algebra,
        cells,
        params=tuple(sorted(env.items())),
        label=spec.name,
    )


def build_omega(spec: SpecFile, env: dict[str, Fraction] | None = None):
    """Antisymmetric matrix from the omega block (entries mirrored with sign)."""
    from .linalg import RatMatrix, ZERO

    env = env or {}
    if not spec.omega:
        raise ValueError("spec file has no omega block")
    n = spec.dim
    m = [[ZERO] * n for _ in range(n)]
    assigned: set[tuple[int, int]] = set()
    for line in spec.omega:
        i = line.left.resolve(n, 0)
        j = line.right.resolve(n, 0)
        if i == j:
            raise ValueError("omega entries on the diagonal must be omitted (they are zero)")
        value = line.value.evaluate(env)
        if (i, j) in assigned:
            raise DuplicateCellError("omega", ((i + 1, j + 1),))
        if (j, i) in assigned and m[i][j] != value:
            raise DuplicateCellError("omega", ((i + 1, j + 1),))
        m[i][j] = value
        m[j][i] = -value
        assigned.add((i, j))
    return RatMatrix(tuple(tuple(row) for row in m))


def build_cocycle(spec: SpecFile, env: dict[str, Fraction] | None = None):
    """TwoCochain from the cocycle block (values in dual coordinates)."""
    from .cohomology import TwoCochain
    from .linalg import vec_scale

    env = env or {}
    if not spec.cocycle:
        raise ValueError("spec file has no cocycle block")
    n = spec.dim
    cells = _collect_cells(spec.cocycle, n, env, "cocycle", dual_as_value=True)
    values: dict[tuple[int, int], tuple] = {}
    for (i, j), v in cells.items():
        if i == j:
            if any(x != 0 for x in v):
                raise ValueError("cocycle entries on the diagonal must vanish")
            continue
        key = (i, j) if i < j else (j, i)
        value = v if i < j else vec_scale(Fraction(-1), v)
        if key in values and values[key] != value:
            raise DuplicateCellError("cocycle", ((key[0] + 1, key[1] + 1),))
        values[key] = value
    return TwoCochain.from_pairs(n, values)


def spec_from_symplectic(name: str, algebra, omega) -> SpecFile:
    """Serializable spec of a 2n-dimensional algebra with an omega block."""
    n2 = algebra.dim
    half = n2 // 2 if n2 % 2 == 0 else None

    def token(k: int) -> BasisToken:
        if half is not None and k >= half:
            return BasisToken.dual_token(k - half)
        return BasisToken.primal(k)

    brackets = []
    for i in range(n2):
        for j in range(i + 1, n2):
            v = algebra.bracket[i][j]
            terms = tuple(
                Term(Expr.const(v[k]), token(k)) for k in range(n2) if v[k] != 0
            )
            if terms:
                brackets.append(CellLine(token(i), token(j), terms))
    omega_lines = []
    for i in range(n2):
        for j in range(i + 1, n2):
            if omega[i, j] != 0:
                omega_lines.append(OmegaLine(token(i), token(j), Expr.const(omega[i, j])))
    return SpecFile(name, n2, tuple(brackets), (), tuple(omega_lines), (), ())
