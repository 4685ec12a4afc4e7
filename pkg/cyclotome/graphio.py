"""Graph export and import for Cayley graphs on finite fields."""

import logging
from enum import Enum
from typing import Any, Dict, Iterator, Optional

import networkx as nx
import numpy as np

from cyclotome.constructions import ConnectionSet
from cyclotome.cyclotomy import PeriodTable
from cyclotome.errors import CyclotomeError, NotSymmetric, TooLargeForFormat
from cyclotome.gf import FieldTable
from cyclotome.utils import dump_json

logger = logging.getLogger(__name__)

MAX_GRAPH6_ORDER = 2**16
GRAPH6_HEADER = b">>graph6<<"


class GraphFormat(Enum):
    """Output formats of the export command."""

    GRAPH6 = "graph6"  # standard bit-packed format
    EDGES = "edges"  # "u v" per line, u < v
    JSON = "json"  # run report plus the class index set
    PERIODS = "periods"  # the period table


def iter_edge_blocks(
    field_table: FieldTable, D: ConnectionSet, chunk: int = 256
) -> Iterator[np.ndarray]:
    """
    Edges {x, x + d} of Cay(F_q, D) with x < x + d, in blocks of (u, v) rows.

    Rows come out sorted by u, then by v.

    Raises:
        NotSymmetric: If D != -D, since the graph would be directed
    """
    if not D.is_symmetric():
        raise NotSymmetric(f"connection set {D.label or list(D.indices)} is not symmetric")
    elements = D.elements
    for start in range(0, field_table.q, chunk):
        rows = np.arange(start, min(start + chunk, field_table.q), dtype=np.int64)
        heads = field_table.add(rows[:, None], elements[None, :])
        tails = np.broadcast_to(rows[:, None], heads.shape)
        keep = heads > tails
        block = np.stack([tails[keep], heads[keep]], axis=1)
        yield block[np.lexsort((block[:, 1], block[:, 0]))]


def cayley_graph(field_table: FieldTable, D: ConnectionSet) -> nx.Graph:
    """Undirected Cayley graph with vertices 0..q-1 as packed field elements."""
    graph = nx.Graph()
    graph.add_nodes_from(range(field_table.q))
    for block in iter_edge_blocks(field_table, D):
        graph.add_edges_from(map(tuple, block.tolist()))
    logger.info(
        "Cayley graph on %d vertices with %d edges",
        graph.number_of_nodes(),
        graph.number_of_edges(),
    )
    return graph


class GraphCodec:
    """Encoder and decoder for the export formats."""

    def __init__(self, header: bool = False):
        """
        Initialize the codec.

        Args:
            header: Whether graph6 output starts with ">>graph6<<"
        """
        self.header = header

    def encode(
        self,
        fmt: GraphFormat,
        field_table: FieldTable,
        D: ConnectionSet,
        report: Optional[Dict[str, Any]] = None,
        table: Optional[PeriodTable] = None,
    ) -> bytes:
        """
        Serialize an instance in the requested format.

        Args:
            fmt: Output format
            field_table: Field of the graph
            D: Connection set
            report: Run report, required for JSON
            table: Period table, required for PERIODS

        Returns:
            Encoded bytes

        Raises:
            TooLargeForFormat: If graph6 is requested for more than 2^16 vertices
            NotSymmetric: If a graph format is requested for a connection set with D != -D
            CyclotomeError: If the format needs a report or table that was not given
        """
        if fmt is GraphFormat.GRAPH6:
            return self._encode_graph6(field_table, D)
        if fmt is GraphFormat.EDGES:
            return self._encode_edges(field_table, D)
        if fmt is GraphFormat.JSON:
            if report is None:
                raise CyclotomeError("json export needs a run report")
            payload = dict(report)
            payload["indices"] = list(D.indices)
            return dump_json(payload).encode()
        if table is None:
            raise CyclotomeError("periods export needs a period table")
        return dump_json(table.to_dict()).encode()

    def _encode_graph6(self, field_table: FieldTable, D: ConnectionSet) -> bytes:
        if field_table.q > MAX_GRAPH6_ORDER:
            raise TooLargeForFormat(
                f"graph6 export is limited to {MAX_GRAPH6_ORDER} vertices, got {field_table.q}"
            )
        graph = cayley_graph(field_table, D)
        return nx.to_graph6_bytes(graph, nodes=range(field_table.q), header=self.header)

    def _encode_edges(self, field_table: FieldTable, D: ConnectionSet) -> bytes:
        lines = []
        for block in iter_edge_blocks(field_table, D):
            lines.extend(f"{u} {v}" for u, v in block.tolist())
        return ("\n".join(lines) + "\n").encode() if lines else b""

    def decode(self, fmt: GraphFormat, data: bytes) -> nx.Graph:
        """
        Rebuild a graph from graph6 or edge-list bytes.

        Raises:
            CyclotomeError: If the format carries no graph or the data is malformed
        """
        if fmt is GraphFormat.GRAPH6:
            body = data.strip()
            if not body:
                raise CyclotomeError("empty graph6 data")
            return nx.from_graph6_bytes(body)
        if fmt is GraphFormat.EDGES:
            graph = nx.Graph()
            for number, line in enumerate(data.decode().splitlines(), 1):
                if not line.strip():
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise CyclotomeError(f"line {number}: expected 'u v', got {line!r}")
                graph.add_edge(int(parts[0]), int(parts[1]))
            return graph
        raise CyclotomeError(f"{fmt.value} does not encode a graph")
