"""NET / CLU graph file formats and delimited edge lists.

NET layout: ``*Vertices n`` followed by one ``id "label"`` line per node
(1-based ids), then ``*Arcs`` (directed) or ``*Edges`` (undirected) with one
``src dst weight`` line per link. CLU layout: ``*Vertices n`` followed by one
integer per node line, in vertex order. Weights are written as
round-trippable decimal representations.
"""

from __future__ import annotations

import re
from typing import IO, Iterable, Mapping

from .acknet import AckGraph
from .coupling import CouplingNetwork

_VERTEX_RE = re.compile(r'^(\d+)\s+"(.*)"\s*$')


def _fmt_weight(w) -> str:
    return repr(float(w))


def write_net(g: AckGraph, stream: IO[str]) -> None:
    """Directed graph as NET with an ``*Arcs`` section."""
    stream.write(f"*Vertices {g.n}\n")
    for i, label in enumerate(g.nodes, start=1):
        stream.write(f'{i} "{label}"\n')
    stream.write("*Arcs\n")
    idx = {v: i for i, v in enumerate(g.nodes, start=1)}
    for (u, v) in sorted(g.arcs, key=lambda a: (idx[a[0]], idx[a[1]])):
        stream.write(f"{idx[u]} {idx[v]} {_fmt_weight(g.arcs[(u, v)].weight)}\n")


def write_net_edges(net: CouplingNetwork, stream: IO[str]) -> None:
    """Undirected coupling network as NET with an ``*Edges`` section."""
    stream.write(f"*Vertices {net.n}\n")
    for i, label in enumerate(net.ids, start=1):
        stream.write(f'{i} "{label}"\n')
    stream.write("*Edges\n")
    idx = {v: i for i, v in enumerate(net.ids, start=1)}
    for u, v, w in sorted(net.edges, key=lambda e: (idx[e[0]], idx[e[1]])):
        stream.write(f"{idx[u]} {idx[v]} {_fmt_weight(w)}\n")


def read_net(stream: IO[str]) -> tuple[list[str], list[tuple[str, str, float]], str]:
    """Parse a NET file back into (labels, links, section), where section is
    "arcs" or "edges" and links carry labels, not ids."""
    labels: dict[int, str] = {}
    links: list[tuple[str, str, float]] = []
    section = ""
    mode = None
    for raw in stream:
        line = raw.strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("*vertices"):
            mode = "vertices"
            continue
        if low.startswith("*arcs") or low.startswith("*edges"):
            mode = "links"
            section = "arcs" if low.startswith("*arcs") else "edges"
            continue
        if mode == "vertices":
            m = _VERTEX_RE.match(line)
            if not m:
                raise ValueError(f"bad vertex line: {line!r}")
            labels[int(m.group(1))] = m.group(2)
        elif mode == "links":
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"bad link line: {line!r}")
            weight = float(parts[2]) if len(parts) > 2 else 1.0
            links.append((labels[int(parts[0])], labels[int(parts[1])], weight))
        else:
            raise ValueError(f"content before *Vertices: {line!r}")
    return [labels[i] for i in sorted(labels)], links, section


def write_clu(membership: Mapping[str, int], node_order: Iterable[str],
              stream: IO[str]) -> None:
    nodes = list(node_order)
    stream.write(f"*Vertices {len(nodes)}\n")
    for v in nodes:
        stream.write(f"{membership[v]}\n")


def read_clu(stream: IO[str]) -> list[int]:
    values: list[int] = []
    for raw in stream:
        line = raw.strip()
        if not line or line.lower().startswith("*vertices"):
            continue
        values.append(int(line))
    return values


def write_edge_list(g: AckGraph, stream: IO[str]) -> None:
    """Delimited directed edge list with a header row."""
    stream.write("source\ttarget\tweight\tpapers\n")
    for (u, v) in sorted(g.arcs):
        arc = g.arcs[(u, v)]
        stream.write(f"{u}\t{v}\t{_fmt_weight(arc.weight)}\t{arc.count}\n")
