"""centrolab: a numerical laboratory for extremal curves of curvature-power
functionals on star-shaped plane curves, with the companion constructions in
the standard symplectic four-space."""

from .geometry import (
    CentroaffineCurve,
    CurvatureProfile,
    bracket,
    estimate_curvature,
    functional_a,
    functional_b,
    reparameterize_centroaffine,
)
from .profile_ode import (
    ExponentData,
    PhasePoint,
    critical_point,
    exponent_data,
    hamiltonian,
    hamiltonian_vector_field,
    integrate_flow,
    residual_third_order,
)
from .orbits import (
    ProfileOrbit,
    find_orbit_with_period,
    half_period,
    orbit_from_energy,
    rigidity_scan,
)
from .hill import (
    ClosedExtremalCurve,
    Monodromy,
    monodromy,
    reconstruct,
    rotation_tune,
    vertices_and_osculants,
    winding_number,
)
from .spectrum import (
    classify_circle,
    deformation_generator,
    hessian_coefficient,
    linearized_curvature,
    second_variation_third,
    spectrum_exponent,
    trivial_basis,
)
from .third_case import (
    ThirdCaseProfile,
    circle_oracle,
    isoperimetric_ratio,
    rigidity_check_third,
    solve_phase,
    third_profile,
)
from .exponent_orbit import (
    ThreeTermEquation,
    orbit_of_a,
    orbit_of_q,
    transform_solution,
)
from .fourspace import (
    Curve4D,
    conjugate,
    detect_inflections,
    legendrian_lift,
    omega4,
    push_off,
    sign_zoo,
)

__version__ = "0.1.0"
