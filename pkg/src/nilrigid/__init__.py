"""nilrigid: exact rigidity analysis of Anosov automorphisms of nilmanifolds.

Decides whether an automorphism given by exact rational data satisfies
the local Lyapunov-spectrum-rigidity criterion (simple hyperbolic
spectrum, sorted exponents, Q-irreducible induced torus actions), and
verifies the supporting coarse geometry and shear-perturbation
constructions at desk scale.
"""

from .algebra import (
    AlgebraElement,
    AlgebraError,
    LieAlgebra,
    ValidationReport,
    abelian,
    bracket,
    direct_sum,
    free32_algebra,
    free_nilpotent,
    heisenberg,
    smale_algebra,
    validate,
)
from .analysis import (
    Automorphism,
    AutomorphismError,
    Eigenvalue,
    GradingError,
    GradingReport,
    IrreducibilityResult,
    LatticeError,
    RigidityVerdict,
    SpectrumReport,
    check_irreducible,
    check_sorted,
    compute_grading,
    compute_spectrum,
    rigidity_verdict,
    validate_automorphism,
)
from .documents import EXAMPLE_NAMES, InputDocument, InputError, example_pair, load_input_file
from .factor import factor_over_Q, is_irreducible_over_Q
from .geometry import (
    GroupElement,
    WeakStrongFrame,
    bch_product,
    escape_experiment,
    geometry_check_suite,
    group_element,
    group_identity,
    guivarch_length,
    inverse,
    make_frame,
    strong_distance_upper_bound,
    unstable_frame,
    weak_displacement,
    weak_distance,
    weak_distance_scaling_check,
)
from .linalg import RatMatrix, Subspace, charpoly, intersect, kernel, quotient_basis, span, subspace_sum
from .poly import RatPoly, real_root_count
from .roots import CertificationError, CertifiedRoot, ModulusTieError, certified_roots
from .shear import (
    ExactComplex,
    PairingTestResult,
    ShearData,
    ShearPreconditionError,
    ShearUnsupportedError,
    SkewPoint,
    TrigPoly,
    cohomology_residual,
    conjugacy_series,
    find_shear_data,
    lipschitz_pairing_test,
    skew_orbit,
)

__version__ = "0.1.0"
