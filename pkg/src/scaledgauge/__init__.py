"""Scaled number structures on a spacetime lattice with a real scale gauge field."""

from .errors import (
    ArithmeticOverflowError,
    ConfigError,
    DimensionMismatchError,
    InvalidCouplingError,
    NotIntegrableError,
    NumberVacuumDivisionError,
    OutOfLatticeError,
    ScaledGaugeError,
    SeriesDivergenceError,
)
from .numbers import (
    AxiomReport,
    BaseElement,
    ScaledStructure,
    StructureValue,
    axiom_suite,
    element_of,
    eval_analytic,
    exp_in_structure,
    same_number_map,
)
from .lattice import (
    LatticePath,
    LatticeSpec,
    Plaquette,
    Site,
    Step,
    axis_ordered_path,
    enumerate_plaquettes,
    neighbor,
    path_endpoint,
    reversed_axis_path,
)
from .gauge import (
    IntegrabilityReport,
    LinkFactor,
    ParamPath,
    PathTransport,
    RealGaugeField,
    generate_field,
    is_integrable,
    line_integral_transport,
    link_factor,
    loop_transport,
    path_transport,
    plaquette_curl,
    straight_line_path,
)
from .calculus import (
    ComplexLatticeField,
    anchor_dependence_report,
    covariant_derivative,
    first_order_covariant,
    plain_derivative,
    transported_integral,
)
from .hilbert import (
    ScaledHilbertStructure,
    TransportStages,
    random_unitary,
    scaled_add,
    scaled_inner,
    scaled_scalar_mul,
    three_step_transport,
    vector_correspondence,
)
from .theory import (
    EXPONENTIAL,
    FIRST_ORDER,
    GAMMA,
    PAULI,
    AbelianConfig,
    FieldStrength,
    GaugeTransformation,
    LagrangianDensity,
    MultipletField,
    SU2Config,
    abelian_cov_derivative,
    covariance_residual_abelian,
    covariance_residual_su2,
    field_strength,
    gauge_transform_abelian,
    gauge_transform_su2,
    lagrangian_density,
    multiplet_derivative,
    su2_cov_derivative,
    su2_link,
    su2_rotation,
)
from .config import ExperimentConfig, config_from_dict, config_from_file

__version__ = "0.1.0"
