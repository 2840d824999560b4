"""Cat-state quantum bit commitment: states, cheating bounds and a protocol simulator."""

from .fock import CatSpec, Parity, cat_state, coherent_state, dim_for_cat, entangled_cat
from .cheat import c_max, optimal_displacement
from .distinguish import g_max_analytic
from .protocol import RunConfig, run

__version__ = "0.1.0"
