"""Recursive-descent parser for manifold descriptions with a Pratt expression core."""

import re
from fractions import Fraction

from biconf.core.errors import (
    CyclicDefinition,
    DimensionMismatch,
    DslSyntaxError,
    DuplicateDefinition,
    InvalidDomain,
    MissingComponent,
    UnknownIdentifier,
)
from biconf.dsl.ast import (
    FUNCTIONS,
    MAX_EXPONENT_DENOMINATOR,
    ZERO,
    BinOp,
    BlockSplit,
    Call,
    Const,
    Coord,
    Explicit,
    ExprNode,
    ManifoldSpec,
    Name,
    Neg,
    Normals,
    Number,
    Pow,
    ProjectorSpec,
    Ref,
    VectorSpec,
    references,
)
from biconf.dsl.lexer import Token, tokenize

# Left binding powers; unary minus binds tighter than every infix operator.
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_PREFIX_MINUS = 40
_NORMAL_LABEL = re.compile(r"n\d+")
_EXPRESSION_START = ("number", "identifier", "'('", "'-'")


class Parser:
    """Parse one ``manifold`` block into an unresolved spec, then resolve names."""

    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # token plumbing

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.pos = min(self.pos + 1, len(self.tokens) - 1)
        return token

    def error(self, expected, token: Token | None = None) -> DslSyntaxError:
        token = token or self.peek()
        return DslSyntaxError(
            f"unexpected {token.describe()}", token.line, token.column, expected
        )

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            raise self.error([_describe_kind(kind)])
        return self.advance()

    def at_keyword(self, word: str) -> bool:
        token = self.peek()
        return token.kind == "IDENT" and token.text == word

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            raise self.error([repr(word)])
        return self.advance()

    def signed_number(self) -> float:
        negative = False
        if self.peek().kind == "-":
            self.advance()
            negative = True
        token = self.peek()
        if token.kind not in ("INT", "NUMBER"):
            raise self.error(["number"])
        self.advance()
        value = float(token.text)
        return -value if negative else value

    # expressions

    def expression(self, rbp: int = 0) -> ExprNode:
        left = self.prefix()
        while _INFIX.get(self.peek().kind, 0) > rbp:
            token = self.advance()
            if token.kind == "^":
                # right-associative
                exponent = self.expression(_INFIX["^"] - 1)
                left = Pow(left, _fold_exponent(exponent, token))
            else:
                right = self.expression(_INFIX[token.kind])
                left = BinOp(token.kind, left, right)
        return left

    def prefix(self) -> ExprNode:
        token = self.peek()
        if token.kind in ("INT", "NUMBER"):
            self.advance()
            return Number(float(token.text))
        if token.kind == "-":
            self.advance()
            return Neg(self.expression(_PREFIX_MINUS))
        if token.kind == "(":
            self.advance()
            inner = self.expression()
            self.expect(")")
            return inner
        if token.kind == "IDENT":
            self.advance()
            if self.peek().kind == "(":
                if token.text not in FUNCTIONS:
                    raise UnknownIdentifier(
                        f"{token.line}:{token.column}: unknown function '{token.text}'"
                    )
                self.advance()
                arg = self.expression()
                self.expect(")")
                return Call(token.text, arg)
            return Name(token.text, token.line, token.column)
        raise self.error(_EXPRESSION_START)

    # sections

    def manifold(self) -> ManifoldSpec:
        self.expect_keyword("manifold")
        name = self.expect("IDENT").text
        self.expect("{")

        self.expect_keyword("dim")
        dim_token = self.expect("INT")
        dim = int(dim_token.text)
        if dim < 1:
            raise DimensionMismatch(f"{dim_token.line}:{dim_token.column}: dim must be positive")
        self.expect(";")

        coords = self.coords(dim)
        constants = self.constants(coords)
        subexprs = self.subexprs(coords, constants)
        metric = self.metric(coords)
        projector = self.projector(coords)
        domain = self.domain(coords)
        vectors = self.vectors(coords)

        self.expect("}")
        if self.peek().kind != "EOF":
            raise self.error(["end of input"])

        spec = ManifoldSpec(
            name=name,
            dim=dim,
            coords=coords,
            constants=constants,
            subexprs=subexprs,
            metric=metric,
            projector=projector,
            domain=domain,
            vectors=vectors,
        )
        return resolve(spec)

    def coords(self, dim: int) -> tuple[str, ...]:
        start = self.expect_keyword("coords")
        names = [self.expect("IDENT").text]
        while self.peek().kind == ",":
            self.advance()
            names.append(self.expect("IDENT").text)
        self.expect(";")
        _reject_duplicates(names, "coordinate")
        if len(names) != dim:
            raise DimensionMismatch(
                f"{start.line}:{start.column}: {len(names)} coordinates declared for dim {dim}"
            )
        return tuple(names)

    def constants(self, coords) -> dict[str, float]:
        constants: dict[str, float] = {}
        while self.at_keyword("const"):
            self.advance()
            token = self.expect("IDENT")
            self.expect("=")
            value = self.signed_number()
            self.expect(";")
            _define(token, constants, coords)
            constants[token.text] = value
        return constants

    def subexprs(self, coords, constants) -> dict[str, ExprNode]:
        subexprs: dict[str, ExprNode] = {}
        while self.at_keyword("func"):
            self.advance()
            token = self.expect("IDENT")
            self.expect("=")
            body = self.expression()
            self.expect(";")
            _define(token, subexprs, coords, constants)
            subexprs[token.text] = body
        return subexprs

    def index_pair(self, coords) -> tuple[int, int]:
        self.expect("[")
        first = self.coordinate(coords)
        self.expect(",")
        second = self.coordinate(coords)
        self.expect("]")
        return first, second

    def coordinate(self, coords) -> int:
        token = self.expect("IDENT")
        if token.text not in coords:
            raise DimensionMismatch(
                f"{token.line}:{token.column}: '{token.text}' is not one of the "
                f"{len(coords)} coordinates"
            )
        return coords.index(token.text)

    def symmetric_block(self, coords, symbol: str) -> tuple[dict[tuple[int, int], ExprNode], Token]:
        start = self.expect("{")
        entries: dict[tuple[int, int], ExprNode] = {}
        while True:
            token = self.expect_keyword(symbol)
            a, b = self.index_pair(coords)
            self.expect("=")
            body = self.expression()
            self.expect(";")
            key = (min(a, b), max(a, b))
            if key in entries:
                raise DuplicateDefinition(
                    f"{token.line}:{token.column}: {symbol}[{coords[key[0]]},{coords[key[1]]}] "
                    "set twice"
                )
            entries[key] = body
            if self.peek().kind == "}":
                self.advance()
                return entries, start

    def metric(self, coords) -> tuple[tuple[ExprNode, ...], ...]:
        self.expect_keyword("metric")
        entries, start = self.symmetric_block(coords, "g")
        for i, name in enumerate(coords):
            if (i, i) not in entries:
                raise MissingComponent(
                    f"{start.line}:{start.column}: diagonal component g[{name},{name}] not set"
                )
        return _symmetric_array(entries, len(coords))

    def projector(self, coords) -> ProjectorSpec:
        start = self.expect_keyword("projector")
        if self.at_keyword("block"):
            self.advance()
            self.expect("{")
            self.expect_keyword("leaf")
            self.expect("=")
            leaf = [coords[self.coordinate(coords)]]
            while self.peek().kind == ",":
                self.advance()
                leaf.append(coords[self.coordinate(coords)])
            self.expect(";")
            self.expect("}")
            _reject_duplicates(leaf, "leaf coordinate")
            if len(leaf) >= len(coords):
                raise DimensionMismatch(
                    f"{start.line}:{start.column}: leaf must be a proper subset of the coordinates"
                )
            return BlockSplit(tuple(c for c in coords if c in leaf))
        if self.at_keyword("normals"):
            self.advance()
            return self.normals(coords)
        if self.at_keyword("explicit"):
            self.advance()
            entries, _ = self.symmetric_block(coords, "P")
            return Explicit(_symmetric_array(entries, len(coords)))
        raise self.error(["'block'", "'normals'", "'explicit'"])

    def normals(self, coords) -> Normals:
        start = self.expect("{")
        rows: dict[int, dict[int, ExprNode]] = {}
        while True:
            token = self.peek()
            if token.kind == "IDENT" and _NORMAL_LABEL.fullmatch(token.text):
                # "n1" lexes as one identifier
                self.advance()
                number = int(token.text[1:])
            else:
                self.expect_keyword("n")
                number = int(self.expect("INT").text)
            self.expect("[")
            a = self.coordinate(coords)
            self.expect("]")
            self.expect("=")
            body = self.expression()
            self.expect(";")
            row = rows.setdefault(number, {})
            if a in row:
                raise DuplicateDefinition(
                    f"{token.line}:{token.column}: n{number}[{coords[a]}] set twice"
                )
            row[a] = body
            if self.peek().kind == "}":
                self.advance()
                break
        if sorted(rows) != list(range(1, len(rows) + 1)):
            raise MissingComponent(
                f"{start.line}:{start.column}: normals must be numbered 1..{len(rows)}"
            )
        if len(rows) >= len(coords):
            raise DimensionMismatch(
                f"{start.line}:{start.column}: {len(rows)} normals leave no leaf directions"
            )
        covectors = tuple(
            tuple(rows[k].get(a, ZERO) for a in range(len(coords)))
            for k in range(1, len(rows) + 1)
        )
        return Normals(covectors)

    def domain(self, coords) -> tuple[tuple[float, float], ...]:
        start = self.expect_keyword("domain")
        self.expect("{")
        bounds: dict[int, tuple[float, float]] = {}
        while True:
            token = self.peek()
            a = self.coordinate(coords)
            self.expect_keyword("in")
            self.expect("[")
            lo = self.signed_number()
            self.expect(",")
            hi = self.signed_number()
            self.expect("]")
            self.expect(";")
            if a in bounds:
                raise DuplicateDefinition(
                    f"{token.line}:{token.column}: domain of '{coords[a]}' set twice"
                )
            if not lo < hi:
                raise InvalidDomain(
                    f"{token.line}:{token.column}: empty interval [{lo}, {hi}] for '{coords[a]}'"
                )
            bounds[a] = (lo, hi)
            if self.peek().kind == "}":
                self.advance()
                break
        missing = [coords[a] for a in range(len(coords)) if a not in bounds]
        if missing:
            raise MissingComponent(
                f"{start.line}:{start.column}: no domain for {', '.join(missing)}"
            )
        return tuple(bounds[a] for a in range(len(coords)))

    def vectors(self, coords) -> dict[str, VectorSpec]:
        vectors: dict[str, VectorSpec] = {}
        while self.at_keyword("vector"):
            self.advance()
            token = self.expect("IDENT")
            if token.text in vectors:
                raise DuplicateDefinition(
                    f"{token.line}:{token.column}: vector '{token.text}' defined twice"
                )
            self.expect("{")
            components: dict[int, ExprNode] = {}
            while True:
                entry = self.expect_keyword("xi")
                self.expect("[")
                a = self.coordinate(coords)
                self.expect("]")
                self.expect("=")
                body = self.expression()
                self.expect(";")
                if a in components:
                    raise DuplicateDefinition(
                        f"{entry.line}:{entry.column}: xi[{coords[a]}] set twice"
                    )
                components[a] = body
                if not self.at_keyword("xi"):
                    break
            phi = self.gauge("phi")
            chi = self.gauge("chi")
            self.expect("}")
            vectors[token.text] = VectorSpec(
                tuple(components.get(a, ZERO) for a in range(len(coords))), phi, chi
            )
        return vectors

    def gauge(self, word: str) -> ExprNode | None:
        if not self.at_keyword(word) or self.peek(1).kind != "=":
            return None
        self.advance()
        self.advance()
        body = self.expression()
        self.expect(";")
        return body


def _describe_kind(kind: str) -> str:
    return {"IDENT": "identifier", "INT": "integer", "NUMBER": "number"}.get(kind, repr(kind))


def _reject_duplicates(names: list[str], what: str) -> None:
    seen: set[str] = set()
    for name in names:
        if name in seen:
            raise DuplicateDefinition(f"{what} '{name}' listed twice")
        seen.add(name)


def _define(token: Token, target: dict, *taken) -> None:
    if token.text in target or any(token.text in names for names in taken):
        raise DuplicateDefinition(f"{token.line}:{token.column}: '{token.text}' already defined")
    if token.text in FUNCTIONS:
        raise DuplicateDefinition(
            f"{token.line}:{token.column}: '{token.text}' shadows a built-in function"
        )


def _symmetric_array(entries, n: int) -> tuple[tuple[ExprNode, ...], ...]:
    return tuple(
        tuple(entries.get((min(a, b), max(a, b)), ZERO) for b in range(n)) for a in range(n)
    )


def _fold_exponent(node: ExprNode, token: Token) -> Fraction:
    value = _fold(node)
    if value is None or value.denominator > MAX_EXPONENT_DENOMINATOR:
        raise DslSyntaxError(
            "exponent must be an integer or a rational with denominator <= "
            f"{MAX_EXPONENT_DENOMINATOR}",
            token.line,
            token.column,
        )
    return value


def _fold(node: ExprNode) -> Fraction | None:
    if isinstance(node, Number):
        return Fraction(node.value)
    if isinstance(node, Neg):
        inner = _fold(node.operand)
        return None if inner is None else -inner
    if isinstance(node, Pow):
        base = _fold(node.base)
        if base is None or node.exponent.denominator != 1 or (base == 0 and node.exponent < 0):
            return None
        return base ** int(node.exponent)
    if isinstance(node, BinOp):
        left, right = _fold(node.left), _fold(node.right)
        if left is None or right is None:
            return None
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return None if right == 0 else left / right
    return None


# name resolution


class _Resolver:
    def __init__(self, spec: ManifoldSpec):
        self.coords = {name: i for i, name in enumerate(spec.coords)}
        self.constants = spec.constants
        self.subexprs = spec.subexprs

    def __call__(self, node: ExprNode) -> ExprNode:
        if isinstance(node, Name):
            if node.name in self.coords:
                return Coord(node.name, self.coords[node.name])
            if node.name in self.constants:
                return Const(node.name)
            if node.name in self.subexprs:
                return Ref(node.name)
            raise UnknownIdentifier(f"{node.line}:{node.column}: unknown identifier '{node.name}'")
        if isinstance(node, Neg):
            return Neg(self(node.operand))
        if isinstance(node, BinOp):
            return BinOp(node.op, self(node.left), self(node.right))
        if isinstance(node, Pow):
            return Pow(self(node.base), node.exponent)
        if isinstance(node, Call):
            return Call(node.func, self(node.arg))
        return node

    def array(self, rows):
        return tuple(tuple(self(e) for e in row) for row in rows)


def resolve(spec: ManifoldSpec) -> ManifoldSpec:
    """Bind identifiers to coordinates, constants or sub-expressions and reject cycles."""
    r = _Resolver(spec)
    subexprs = {name: r(body) for name, body in spec.subexprs.items()}
    _check_acyclic(subexprs)

    projector = spec.projector
    if isinstance(projector, Normals):
        projector = Normals(r.array(projector.covectors))
    elif isinstance(projector, Explicit):
        projector = Explicit(r.array(projector.components))

    vectors = {
        name: VectorSpec(
            tuple(r(c) for c in vector.components),
            None if vector.phi is None else r(vector.phi),
            None if vector.chi is None else r(vector.chi),
        )
        for name, vector in spec.vectors.items()
    }
    return ManifoldSpec(
        name=spec.name,
        dim=spec.dim,
        coords=spec.coords,
        constants=dict(spec.constants),
        subexprs=subexprs,
        metric=r.array(spec.metric),
        projector=projector,
        domain=spec.domain,
        vectors=vectors,
    )


def _check_acyclic(subexprs: dict[str, ExprNode]) -> None:
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(name: str, path: list[str]) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            cycle = path[path.index(name):] + [name]
            raise CyclicDefinition(f"cyclic definition: {' -> '.join(cycle)}")
        state[name] = 1
        for ref in sorted(references(subexprs[name])):
            visit(ref, path + [name])
        state[name] = 2

    for name in subexprs:
        visit(name, [])


def parse_manifold(text: str) -> ManifoldSpec:
    """Parse manifold description source text into a resolved ManifoldSpec."""
    return Parser(text).manifold()


def parse_expression(text: str, spec: ManifoldSpec) -> ExprNode:
    """Parse a standalone expression against an existing spec's names."""
    parser = Parser(text)
    node = parser.expression()
    if parser.peek().kind != "EOF":
        raise parser.error(["end of input"])
    return _Resolver(spec)(node)
