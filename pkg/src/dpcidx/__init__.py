"""Indexed density-peak clustering.

Four interchangeable index backends (neighbor lists, cumulative
histograms, quadtree, STR-packed R-tree) compute local density and
dependent distance under a chosen cutoff, exactly matching the
brute-force reference; a truncated approximate mode trades accuracy for
memory.  See the CLI (``python -m dpcidx``) and the HTTP API for the
interactive decision-graph workflow.
"""

from .backends import (
    ApproxListBackend,
    CHBackend,
    ListBackend,
    OracleBackend,
    QuadtreeBackend,
    RTreeBackend,
    build_backend,
)
from .chindex import CumulativeHistogram, build_ch_index, ch_rho, ch_rho_all
from .clustering import (
    CenterSelection,
    Clustering,
    assign,
    flag_outliers,
    select_centers,
)
from .dataset import Dataset, GeneratorSpec, generate, load_csv
from .errors import CsvParseError, UsageError
from .evaluation import BenchReport, bench_backend, bench_suite, pair_confusion, pair_metrics
from .geometry import Rect, dist, max_dist_to_rect, min_dist_to_rect
from .listindex import NeighborList, build_list_index, list_delta, list_delta_all, list_rho, list_rho_all
from .oracle import oracle_delta, oracle_profile, oracle_rho
from .profile import DensityProfile, density_rank, rank_positions
from .quadtree import QuadConfig, build_quadtree
from .rnlist import ReducedNeighborList, approx_profile, build_rn_list
from .rtree import RTreeConfig, build_rtree
from .storage import load_index, save_index
from .treenodes import SpatialTree, annotate_maxrho
from .treequery import tree_delta, tree_delta_all, tree_profile, tree_rho, tree_rho_all

__version__ = "0.1.0"
