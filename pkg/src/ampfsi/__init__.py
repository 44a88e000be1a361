"""ampfsi: added-mass partitioned FSI coupling schemes on the Fourier-mode
model problem, their normal-mode stability analysis, and the exact-solution
oracle family (radial piston, rotating disk, radial traveling wave)."""

from .coupling import (
    InterfaceHistory,
    Scheme,
    advance,
    amp_step,
    atp_step,
    effective_height,
    exact_interface_1d,
    tp_iterate,
    tp_step,
)
from .impedance import fluid_impedance_full, fluid_impedance_variational
from .solid import ModeParams, SolidLattice
from .stability import (
    NormalModeRoot,
    RegionMap,
    amp_cfl_check,
    branch_select_1d,
    cauchy_cfl_map,
    continue_lambda_x,
    det_g,
    eigvec,
    find_unstable_roots,
    find_unstable_roots_1d,
    g_matrix,
    iterations_needed,
    phi_roots,
    stability_map,
    tp_iteration_optimum,
)

__version__ = "0.1.0"
