"""
Text formats for graphs and OV instances.

Graph files are DIMACS-like and 1-indexed:

    # optional comment lines
    p dg <n> <m> [w]
    e <u> <v> [<weight>]
    c <v> <R|B>

OV files hold a `# planted=<bool> d=<dim>` comment and one `v <A|B> <bits>`
line per vector.
"""

import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Tuple, Union

try:
    from .errors import GraphSyntaxError, InconsistentHeader, UnknownColor
    from .generators import OvInstance
    from .graph_core import Color, ColorAssignment, DiGraph, build_graph
except ImportError:
    from errors import GraphSyntaxError, InconsistentHeader, UnknownColor
    from generators import OvInstance
    from graph_core import Color, ColorAssignment, DiGraph, build_graph

logger = logging.getLogger(__name__)

Source = Union[str, Path, TextIO]


@dataclass(frozen=True)
class GraphFile:
    graph: DiGraph
    colors: Optional[ColorAssignment] = None
    comments: Tuple[str, ...] = ()


def _int_token(tokens: List[str], index: int, line_no: int, what: str) -> int:
    if index >= len(tokens):
        raise GraphSyntaxError(f"missing {what}", line_no, len(tokens) + 1)
    try:
        return int(tokens[index])
    except ValueError:
        raise GraphSyntaxError(f"{what} must be an integer, got {tokens[index]!r}",
                               line_no, index + 1) from None


def _vertex(tokens: List[str], index: int, line_no: int, n: int) -> int:
    v = _int_token(tokens, index, line_no, "vertex")
    if not 1 <= v <= n:
        raise GraphSyntaxError(f"vertex {v} outside 1..{n}", line_no, index + 1)
    return v - 1


def parse_graph(text: str) -> GraphFile:
    """Parse graph file text; vertices become 0-indexed."""
    header = None
    weighted = False
    edges: List[Tuple[int, int, int]] = []
    seen_edges = set()
    colors: dict = {}
    comments: List[str] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue

        tokens = line.split()
        tag = tokens[0]
        if tag == "p":
            if header is not None:
                raise GraphSyntaxError("duplicate problem line", line_no, 1)
            if len(tokens) < 4 or tokens[1] != "dg":
                raise GraphSyntaxError("expected 'p dg <n> <m> [w]'", line_no, 1)
            n = _int_token(tokens, 2, line_no, "vertex count")
            m = _int_token(tokens, 3, line_no, "edge count")
            if n < 0 or m < 0:
                raise GraphSyntaxError("counts must be non-negative", line_no, 3)
            if len(tokens) > 5 or (len(tokens) == 5 and tokens[4] != "w"):
                raise GraphSyntaxError(f"unexpected token {tokens[-1]!r}", line_no, len(tokens))
            weighted = len(tokens) == 5
            header = (n, m)
            continue

        if header is None:
            raise GraphSyntaxError(f"'{tag}' line before the problem line", line_no, 1)
        n = header[0]

        if tag == "e":
            u = _vertex(tokens, 1, line_no, n)
            v = _vertex(tokens, 2, line_no, n)
            if weighted:
                if len(tokens) != 4:
                    raise InconsistentHeader("weighted header needs a weight on every edge", line_no)
                w = _int_token(tokens, 3, line_no, "weight")
                if w < 0:
                    raise GraphSyntaxError(f"negative weight {w}", line_no, 4)
            else:
                if len(tokens) != 3:
                    raise InconsistentHeader("edge weight given but header is unweighted", line_no)
                w = 1
            if u == v:
                raise GraphSyntaxError(f"self-loop at vertex {u + 1}", line_no, 2)
            if (u, v) in seen_edges:
                raise GraphSyntaxError(f"duplicate edge {u + 1} -> {v + 1}", line_no, 1)
            seen_edges.add((u, v))
            edges.append((u, v, w))
        elif tag == "c":
            v = _vertex(tokens, 1, line_no, n)
            if len(tokens) != 3:
                raise GraphSyntaxError("expected 'c <v> <R|B>'", line_no, 1)
            try:
                color = Color(tokens[2])
            except ValueError:
                raise UnknownColor(f"color must be R or B, got {tokens[2]!r}", line_no, 3) from None
            if v in colors:
                raise GraphSyntaxError(f"vertex {v + 1} colored twice", line_no, 2)
            colors[v] = color
        else:
            raise GraphSyntaxError(f"unknown line type {tag!r}", line_no, 1)

    if header is None:
        raise GraphSyntaxError("missing problem line 'p dg <n> <m>'")
    n, m = header
    if len(edges) != m:
        raise InconsistentHeader(f"header declares {m} edges, found {len(edges)}")
    if colors and len(colors) != n:
        raise InconsistentHeader(f"colors given for {len(colors)} of {n} vertices")

    graph = build_graph(n, edges, weighted=weighted)
    assignment = ColorAssignment(tuple(colors[v] for v in range(n))) if colors else None
    logger.debug(f"Parsed graph: n={n}, m={m}, weighted={weighted}, colored={assignment is not None}")
    return GraphFile(graph, assignment, tuple(comments))


def serialize_graph(graph: DiGraph, colors: Optional[ColorAssignment] = None,
                    comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p dg {graph.n} {graph.m}" + (" w" if graph.weighted else ""))
    for u, v, w in graph.edges():
        lines.append(f"e {u + 1} {v + 1} {w}" if graph.weighted else f"e {u + 1} {v + 1}")
    if colors is not None:
        lines.extend(f"c {v + 1} {colors[v].value}" for v in range(len(colors)))
    return "\n".join(lines) + "\n"


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        return source.read()
    if str(source) == "-":
        return sys.stdin.read()
    return Path(source).read_text()


def read_graph(source: Source) -> GraphFile:
    """Read a graph file from a path, an open stream, or '-' for stdin."""
    text = _read_text(source)
    graph_file = parse_graph(text)
    logger.info(f"Loaded graph with {graph_file.graph.n} vertices and {graph_file.graph.m} edges")
    return graph_file


def write_text(text: str, target: Optional[Union[str, Path]] = None, stream: Optional[TextIO] = None):
    """Write to a path, or to the given stream (stdout by default) for None or '-'."""
    if target is None or str(target) == "-":
        (stream or sys.stdout).write(text)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    logger.info(f"Wrote {path}")


def serialize_ov(ov: OvInstance) -> str:
    lines = [f"# planted={str(ov.planted).lower()} d={ov.d}"]
    for side, vectors in (("A", ov.A), ("B", ov.B)):
        lines.extend(f"v {side} {''.join(map(str, vec))}" for vec in vectors)
    return "\n".join(lines) + "\n"


def parse_ov(text: str) -> OvInstance:
    planted, d = False, None
    sides = {"A": [], "B": []}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for item in line[1:].split():
                key, _, value = item.partition("=")
                if key == "planted":
                    planted = value.lower() == "true"
                elif key == "d":
                    d = int(value)
            continue
        tokens = line.split()
        if len(tokens) != 3 or tokens[0] != "v" or tokens[1] not in sides:
            raise GraphSyntaxError("expected 'v <A|B> <bits>'", line_no, 1)
        bits = tokens[2]
        if set(bits) - {"0", "1"}:
            raise GraphSyntaxError(f"bits must be 0/1, got {bits!r}", line_no, 3)
        if d is not None and len(bits) != d:
            raise InconsistentHeader(f"vector of length {len(bits)} in a d={d} file", line_no, 3)
        d = len(bits) if d is None else d
        sides[tokens[1]].append(tuple(int(b) for b in bits))
    if not sides["A"] and not sides["B"]:
        raise GraphSyntaxError("no vectors found")
    return OvInstance(A=tuple(sides["A"]), B=tuple(sides["B"]), planted=planted, d=d)


def read_ov(source: Source) -> OvInstance:
    return parse_ov(_read_text(source))


def certificate_comment(yes_bound: int, no_bound: int, t: Optional[int]) -> str:
    return f"certificate yes={yes_bound} no={no_bound} t={t if t is not None else '-'}"

