"""Cayley digraphs over finite abelian groups.

Adjacency is stored as one out-neighbor bitset per vertex: (g, h) is an arc
iff g - h lies in the connection set (the multiplicative gh^-1 condition in
additive notation), so the out-neighborhood of g is g - S and right
translation by any group element is an automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ._search import CanonicalSearch
from .errors import CapExceeded, SetOutOfRange
from .groups import AbelianGroup, Subgroup, bits_of, generated_subgroup, popcount

CANON_CAP = 1 << 8


@dataclass(frozen=True)
class ConnectionSet:
    """Subset of the group as a bitset, with its inverse-closure flag cached."""

    group: AbelianGroup
    bits: int
    inverse_closed: bool
    avoids: Subgroup | None = None

    @property
    def size(self) -> int:
        return popcount(self.bits)

    def elements(self):
        return bits_of(self.bits)

    def element_tuples(self) -> list[tuple[int, ...]]:
        return [self.group.decode(a) for a in self.elements()]


def connection_set(group: AbelianGroup,
                   elements: int | Iterable[int | Sequence[int]],
                   avoids: Subgroup | None = None) -> ConnectionSet:
    """Build a connection set from a bitset, element indices, or coord tuples."""
    if isinstance(elements, int):
        bits = elements
    else:
        bits = 0
        for e in elements:
            idx = e if isinstance(e, int) else group.encode(e)
            bits |= 1 << idx
    if bits < 0 or bits >> group.size:
        raise SetOutOfRange("connection set refers to elements outside the group")
    return ConnectionSet(group, bits, group.negate_set(bits) == bits, avoids)


class CayleyDigraph:
    """Cay(A, S) with per-vertex out/in neighbor bitsets."""

    __slots__ = ("group", "conn", "out_neighbors", "in_neighbors")

    def __init__(self, group: AbelianGroup, conn: ConnectionSet):
        self.group = group
        self.conn = conn
        n = group.size
        out = [0] * n
        for s in conn.elements():
            for g in range(n):
                out[g] |= 1 << group.sub(g, s)
        self.out_neighbors = out
        if conn.inverse_closed:
            self.in_neighbors = out
        else:
            inn = [0] * n
            for g in range(n):
                for h in bits_of(out[g]):
                    inn[h] |= 1 << g
            self.in_neighbors = inn

    @property
    def n(self) -> int:
        return self.group.size

    @property
    def is_graph(self) -> bool:
        return self.conn.inverse_closed

    def has_arc(self, g: int, h: int) -> bool:
        return bool((self.out_neighbors[g] >> h) & 1)

    def arcs(self):
        for g in range(self.n):
            for h in bits_of(self.out_neighbors[g]):
                yield (g, h)

    def __repr__(self) -> str:
        return (f"CayleyDigraph(n={self.n}, |S|={self.conn.size}, "
                f"graph={self.is_graph})")


def build_cayley(group: AbelianGroup,
                 conn: ConnectionSet | int | Iterable) -> CayleyDigraph:
    if not isinstance(conn, ConnectionSet):
        conn = connection_set(group, conn)
    if conn.group != group:
        raise SetOutOfRange("connection set belongs to a different group")
    return CayleyDigraph(group, conn)


def is_connected(digraph: CayleyDigraph) -> bool:
    """Weak connectivity, i.e. <S> = A (S and -S generate the same subgroup)."""
    sub = generated_subgroup(digraph.group, list(digraph.conn.elements()))
    return sub.order == digraph.group.size


def bipartition_respected(digraph: CayleyDigraph, sub: Subgroup) -> bool:
    """True iff every arc crosses the parts {B, A \\ B}, i.e. S avoids B."""
    return digraph.conn.bits & sub.bits == 0


def canonical_form(digraph: CayleyDigraph, cap: int = CANON_CAP,
                   timeout: float | None = None) -> bytes:
    """Canonical byte-string: equal for two digraphs iff they are isomorphic.

    The string is the row-major adjacency bit matrix of the canonically
    relabeled digraph (packed MSB-first, prefixed with the vertex count),
    minimized over the leaves of the individualization-refinement tree.
    """
    if digraph.n > cap:
        raise CapExceeded(f"canonical form cap {cap} exceeded by n={digraph.n}")
    body = CanonicalSearch(digraph.out_neighbors, digraph.in_neighbors,
                           timeout=timeout).run()
    return digraph.n.to_bytes(4, "big") + body


def edge_list_text(digraph: CayleyDigraph) -> str:
    """DIMACS-like arc list: one ``a <u> <v>`` line per arc."""
    lines = [f"p digraph {digraph.n} {sum(popcount(m) for m in digraph.out_neighbors)}"]
    for g, h in digraph.arcs():
        lines.append(f"a {g} {h}")
    return "\n".join(lines) + "\n"


def adjacency_text(digraph: CayleyDigraph) -> str:
    """0/1 adjacency matrix, one row per line."""
    rows = []
    for g in range(digraph.n):
        row = digraph.out_neighbors[g]
        rows.append("".join("1" if (row >> h) & 1 else "0"
                            for h in range(digraph.n)))
    return "\n".join(rows) + "\n"
