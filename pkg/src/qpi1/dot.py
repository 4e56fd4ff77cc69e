"""Graphviz DOT export."""

from __future__ import annotations

from typing import Mapping, Sequence

from .relations import BoundQuiver, format_combo


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(B: BoundQuiver, fibers: Mapping[str, Sequence[str]] | None = None) -> str:
    """A deterministic DOT digraph.

    Each ideal generator becomes one dashed, unconstrained edge from its
    start to its end vertex, labelled by the relation. ``fibers`` (base
    vertex -> cover vertices) draws each fiber as a same-rank group.
    """
    Q = B.quiver
    lines = [f"digraph {_quote(B.name)} {{", "  rankdir=LR;"]
    for v in Q.vertices:
        lines.append(f"  {_quote(v)};")
    for a in Q.arrows:
        lines.append(f"  {_quote(a.source)} -> {_quote(a.target)} [label={_quote(a.label)}];")
    for i, rho in enumerate(B.generators, start=1):
        lines.append(f"  {_quote(rho.start)} -> {_quote(rho.end)} [style=dashed, "
                     f"constraint=false, arrowhead=none, color=gray, "
                     f"label={_quote(f'r{i}: ' + format_combo(rho))}];")
    if fibers:
        for x in sorted(fibers):
            members = " ".join(_quote(v) for v in fibers[x])
            lines.append(f"  subgraph {_quote('fiber_' + x)} {{ rank=same; {members} }}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cover_fibers(morphism) -> dict[str, list[str]]:
    """Fibers of a covering morphism, in cover vertex order."""
    out: dict[str, list[str]] = {}
    for v in morphism.source.quiver.vertices:
        out.setdefault(morphism.vertices[v], []).append(v)
    return out
