"""Anti-holomorphic dynamics of Schwarz reflection maps: the deltoid droplet,
the circle-and-cardioid family, the ideal-triangle-group symbolic dynamics
that model their escaping sets, and raster tooling."""

from .core import INFINITY, Circle, ComplexPoint, RootSet, chordal, is_infinity, \
    reflect_in_circle, solve_cubic_monic, solve_quadratic
from .cardioid import CardioidInversion, Location, invert_riemann_map, \
    riemann_map, schwarz_sigma, sigma_dbar_magnitude, sigma_preimages
from .deltoid import DeltoidLocation, DeltoidVerdict, Region, \
    classify_deltoid_orbit, deltoid_map, locate_deltoid, schwarz_deltoid
from .cnc import CncMap, ConnTag, ConnVerdict, CycleInfo, CycleKind, \
    OrbitVerdict, VerdictTag, apply_F, build_cnc, classify_orbit, depth, \
    in_connectedness_locus, multiplier_of_cycle, preimages_F, scan_parameters
from .symbolic import AngleItinerary, ItineraryWord, conjugacy_E, \
    conjugacy_E_inverse, count_admissible_words, itinerary_of_angle, \
    question_mark, rational_angle, rho, tile
from .rays import RayApprox, g_ray, trace_ray
from .raster import GridSpec, JobKind, RenderJob, RenderResult, render

__all__ = [name for name in dir() if not name.startswith("_")]

__version__ = "0.1.0"
