"""Pretty-printer producing source that re-parses to an identical spec."""

from fractions import Fraction

from biconf.dsl.ast import (
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
    Ref,
)

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_number(value: float) -> str:
    text = repr(float(value))
    if text in ("inf", "-inf", "nan"):
        raise ValueError(f"cannot print non-finite number {text}")
    return text


def format_expr(node: ExprNode) -> str:
    """Render an expression with the minimal parentheses needed to re-parse it."""
    return _render(node)[0]


def _render(node: ExprNode) -> tuple[str, int]:
    # precedence levels: 1 add/sub, 2 mul/div, 3 pow, 4 unary, 5 atom
    if isinstance(node, Number):
        if node.value < 0:
            return f"-{format_number(-node.value)}", 4
        return format_number(node.value), 5
    if isinstance(node, (Coord, Const, Ref, Name)):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.func}({format_expr(node.arg)})", 5
    if isinstance(node, Neg):
        inner, level = _render(node.operand)
        # the operand of unary minus parses at unary strength
        return f"-{inner if level >= 4 else f'({inner})'}", 4
    if isinstance(node, Pow):
        base, level = _render(node.base)
        # unary minus binds tighter than ^, so a negated base needs no parentheses
        if level < 4:
            base = f"({base})"
        return f"{base}^{_format_exponent(node.exponent)}", 3
    if isinstance(node, BinOp):
        prec = _PRECEDENCE[node.op]
        left, left_level = _render(node.left)
        right, right_level = _render(node.right)
        if left_level < prec:
            left = f"({left})"
        # left-associative: equal precedence on the right needs parentheses
        if right_level <= prec:
            right = f"({right})"
        return f"{left} {node.op} {right}", prec
    raise TypeError(f"unknown expression node {node!r}")


def _format_exponent(exponent: Fraction) -> str:
    if exponent.denominator == 1:
        text = str(exponent.numerator)
        return f"({text})" if exponent < 0 else text
    return f"({exponent.numerator}/{exponent.denominator})"


def format_manifold(spec: ManifoldSpec) -> str:
    """Render a full manifold description."""
    coords = spec.coords
    lines = [f"manifold {spec.name} {{", f"  dim {spec.dim};", f"  coords {', '.join(coords)};"]
    for name, value in spec.constants.items():
        lines.append(f"  const {name} = {format_number(value)};")
    for name, body in spec.subexprs.items():
        lines.append(f"  func {name} = {format_expr(body)};")

    lines.append("  metric {")
    for a in range(spec.dim):
        for b in range(a, spec.dim):
            entry = spec.metric[a][b]
            if a == b or entry != ZERO:
                lines.append(f"    g[{coords[a]},{coords[b]}] = {format_expr(entry)};")
    lines.append("  }")

    projector = spec.projector
    if isinstance(projector, BlockSplit):
        lines.append(f"  projector block {{ leaf = {', '.join(projector.leaf)}; }}")
    elif isinstance(projector, Normals):
        lines.append("  projector normals {")
        for k, covector in enumerate(projector.covectors, start=1):
            written = [a for a, c in enumerate(covector) if c != ZERO] or [0]
            for a in written:
                lines.append(f"    n{k}[{coords[a]}] = {format_expr(covector[a])};")
        lines.append("  }")
    elif isinstance(projector, Explicit):
        lines.append("  projector explicit {")
        written = [
            (a, b)
            for a in range(spec.dim)
            for b in range(a, spec.dim)
            if projector.components[a][b] != ZERO
        ] or [(0, 0)]
        for a, b in written:
            lines.append(
                f"    P[{coords[a]},{coords[b]}] = {format_expr(projector.components[a][b])};"
            )
        lines.append("  }")
    else:
        raise ValueError("a manifold description needs a projector")

    lines.append("  domain {")
    for name, (lo, hi) in zip(coords, spec.domain, strict=True):
        lines.append(f"    {name} in [{format_number(lo)}, {format_number(hi)}];")
    lines.append("  }")

    for name, vector in spec.vectors.items():
        lines.append(f"  vector {name} {{")
        written = [a for a, c in enumerate(vector.components) if c != ZERO] or [0]
        for a in written:
            lines.append(f"    xi[{coords[a]}] = {format_expr(vector.components[a])};")
        if vector.phi is not None:
            lines.append(f"    phi = {format_expr(vector.phi)};")
        if vector.chi is not None:
            lines.append(f"    chi = {format_expr(vector.chi)};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
