"""Drawing strategies and adversarial verification for strong Ramsey games.

The graph game runs on two disjoint n-cliques with the four-page book
(K6 minus K4) as the target; the hypergraph game runs on the complete
4-uniform board with the target's two-centre lift.  P2's strategies are
deterministic automata; the verifier plays adversarial P1 against them and
re-checks every claimed invariant move by move.
"""

from .board import (BoardTooSmall, ConfigurationError, GameState, IllegalMove,
                    TurnError, apply_move, canonicalize, declare_stop,
                    degree, edge_from_text, edge_to_text, graph_edge,
                    hyper_edge, is_free_vertex, is_p1_free_vertex, new_board)

__all__ = [
    "BoardTooSmall", "ConfigurationError", "GameState", "IllegalMove",
    "TurnError", "apply_move", "canonicalize", "declare_stop", "degree",
    "edge_from_text", "edge_to_text", "graph_edge", "hyper_edge",
    "is_free_vertex", "is_p1_free_vertex", "new_board",
]

__version__ = "0.1.0"
