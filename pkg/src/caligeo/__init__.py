"""Exact exterior algebra, exceptional calibrations, flat orbifolds, and
calibrated graph equations."""

from caligeo.forms import (
    ExteriorForm,
    LinearEndo,
    dx,
    zero_form,
    wedge,
    hodge_star,
    pullback,
    interior_product,
    norm_squared,
    evaluate,
    embed,
    as_tensor,
)
from caligeo.structures import (
    model_form,
    phi0,
    star_phi0,
    spin7_omega0,
    stabilizer_algebra,
    verify_product_structures,
)
from caligeo.calibration import (
    OrientedPlane,
    PlaneClass,
    classify_plane,
    comass,
    family_spectrum,
    normal_selfdual_isomorphism,
    restrict_to_plane,
)
from caligeo.orbifold import (
    AffineIsometry,
    fixed_set,
    generate_group,
    involution_locus,
    load_config,
    orbifold_betti,
    singular_set,
)
from caligeo.pde import (
    Jet1,
    TopologyInvariants,
    dirac_index,
    dirac_lhs,
    dirac_linearization_check,
    jet_plane_calibrated,
    residual,
)
from caligeo.pdegrid import (
    band_limited_field,
    classify_solution_planes,
    coassoc_deformation_linearization,
    graph_residual_grid,
    solve_graph,
)
from caligeo.report import Report
from caligeo import suite, wproj

__version__ = "0.1.0"
