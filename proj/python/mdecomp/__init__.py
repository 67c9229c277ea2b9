"""Linear-time modular decomposition of undirected graphs."""

from ._core import (
    CapacityError,
    Graph,
    InputError,
    InternalError,
    StructuralError,
    Tree,
    decompose,
    example_graph,
    gen_gnp,
    gen_random_cograph,
    is_factorizing_permutation,
    is_module,
    md_tree_bruteforce,
    md_tree_recursive,
    parse_graph,
    render_graph,
    strong_modules_bruteforce,
    trace,
)

__all__ = [
    "CapacityError",
    "Graph",
    "InputError",
    "InternalError",
    "StructuralError",
    "Tree",
    "decompose",
    "example_graph",
    "gen_gnp",
    "gen_random_cograph",
    "is_factorizing_permutation",
    "is_module",
    "md_tree_bruteforce",
    "md_tree_recursive",
    "parse_graph",
    "render_graph",
    "strong_modules_bruteforce",
    "trace",
]
