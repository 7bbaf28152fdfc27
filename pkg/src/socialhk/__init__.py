"""Social bounded-confidence opinion dynamics: simulation, spectra, bounds.

Agents sit on a fixed undirected self-looped connectivity graph and average
their opinions with graph neighbors whose opinions lie within a confidence
bound.  The package simulates these dynamics exactly (float or rational
arithmetic), analyzes the spectra of the normalized adjacency matrices that
drive them, certifies energy descent along trajectories, evaluates
closed-form convergence-time bounds, and decides sign conditions for
arbitrarily slow merging of opinion clusters.
"""

from .graphs import (
    Graph,
    PartiteSpec,
    complete_graph,
    complete_r_partite,
    conductance,
    cycle_graph,
    degree_matrix,
    diameter,
    dumbbell_graph,
    effective_diameter,
    graph_from_json,
    graph_to_json,
    induced_subgraph,
    normalized_adjacency,
    path_graph,
    standard_graph,
    star_graph,
)
from .spectral import (
    RPartiteEigenbasis,
    SpectralDecomposition,
    decompose,
    incomplete_spectrum_report,
    nontermination_certificate,
    rpartite_eigenbasis,
    verify_rpartite_eigenbasis,
)
from .dynamics import (
    Event,
    InfluenceGraph,
    OpinionState,
    SteadyState,
    Trajectory,
    eps_convergence_time,
    influence_graph,
    simulate,
    simulate_exact,
    steady_state,
    step,
    tail_decay_ratio,
    verify_energy_certificates,
)
from . import bounds, errors, linprog, sampling, slowmerge

__version__ = "0.1.0"
