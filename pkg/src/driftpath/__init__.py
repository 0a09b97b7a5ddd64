"""Transition-matrix estimation, most likely pathways and travel times from drifter data."""

from .errors import ComputationError, ConfigError, DataError, DisconnectedError, DriftPathError, UnknownStateError
from .geo import GeoPoint, Rotation, rotate_point, sample_uniform_rotation
from .grid import HexGrid, LonLatGrid, SpatialIndex, make_index
from .ingest import Trajectory, TrajectoryStore, load_trajectories, resample_with_replacement, rotate_store
from .pathing import (
    Path,
    TravelTimeEstimate,
    build_graph,
    expected_travel_time,
    holding_time_pmf,
    most_likely_path,
    one_to_all_times,
    shortest_time_path,
)
from .transition import (
    DEFAULT_BARRIERS,
    TransitionMatrix,
    discretize,
    estimate_matrix,
    inject_transition,
    remove_states,
)

__version__ = "0.1.0"
