"""Exact genus bounds for curves on polarized threefolds via tilt-stability walls."""

from .bounds import (EpsilonTable, asymptotic_main_bound, bmt_bound, castelnuovo_conjecture_bound,
                     epsilon, optimal_bound, planar_bound, surface_bound)
from .certifier import Certificate, CaseNode, certify, certify_table, explain
from .constants import (ConstantReport, gv_vanish, gv_vanish_inequality, solve_N0, solve_N1,
                        solve_theorem_chain, verify_report)
from .errors import CastelboundError, ConfigError, DomainError
from .gvseries import GVTable, LaurentQ, PTTable, g_block, gv_from_pt, partition_check, pt_from_gv
from .numerics import Surd, floor_of_surd, format_rat, parse_rat
from .targets import load_script, load_target
from .tiltwalls import (ChernH, Polarization, Semicircle, Vertical, ideal_class, line_bundle,
                        numerical_wall)

__version__ = "0.1.0"
