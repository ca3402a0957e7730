"""Tomographic representations of complex wavefunctions.

Forward maps: symplectic tomogram w(X, mu, nu), its optical ((mu, nu) on the
unit circle) and Fresnel (mu = 1) families, for 1D states and product states
up to three axes. Inverse maps: wavefunction recovery through the
autocorrelation slice of the plane-wise 2D Fourier transform, and direct
quadrature inversion to the density matrix and the Wigner function. The
chirped-Gaussian model state is built in as the analytic anchor for every
numerical path, and a text file format plus CLI expose the whole pipeline.
"""

from .errors import (
    DegeneratePointError,
    DomainLookupError,
    ManifestError,
    MissingAnchorError,
    NodeAtOriginError,
    SingularFrequencyError,
    UnsupportedSizeError,
    WavetomoError,
)
from .grid import (
    ComplexField1D,
    ComplexField2D,
    RealField2D,
    SampledWavefunction,
    UniformGrid1D,
    dft2_at,
    fft2,
    trapezoid_integrate,
)
from .tomography import (
    EPS_NU,
    FresnelTomogram,
    Moments,
    NdWavefunction,
    OpticalTomogram,
    SymplecticPoint,
    TomogramPlane,
    fresnel_tomogram,
    fresnel_tomogram_nd,
    optical_from_fresnel,
    optical_tomogram,
    plane_grids_for_slice,
    symplectic_from_fresnel,
    symplectic_plane_set,
    symplectic_tomogram,
    symplectic_tomogram_nd,
    symplectic_tomogram_plane,
    wavefunction_moments,
)
from .reconstruct import (
    DensityMatrix,
    DensityMatrixNd,
    InversionConfig,
    PsiAutocorrelation,
    PsiReconstruction,
    WignerFunction,
    density_matrix_from_planes,
    fresnel_as_symplectic_source,
    psi_slice_at,
    raised_cosine_taper,
    reconstruct_density_matrix,
    reconstruct_density_matrix_fresnel,
    reconstruct_density_matrix_nd,
    reconstruct_psi,
    reconstruct_wigner,
    tomogram_ft2,
    wigner_from_planes,
)
from .analytic import (
    GcfParams,
    analytic_plane_set,
    density_matrix_direct,
    gcf_autocorrelation,
    gcf_fresnel_analytic,
    gcf_grid,
    gcf_moments,
    gcf_plane_analytic,
    gcf_psi,
    gcf_sampled,
    gcf_source,
    gcf_fresnel_source,
    gcf_tomogram_analytic,
    gcf_tomogram_ft_analytic,
    gcf_width,
    gcf_wigner_analytic,
    wigner_direct,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "WavetomoError", "DegeneratePointError", "DomainLookupError", "ManifestError",
    "MissingAnchorError", "NodeAtOriginError", "SingularFrequencyError",
    "UnsupportedSizeError",
    # grids and fields
    "UniformGrid1D", "ComplexField1D", "ComplexField2D", "RealField2D",
    "SampledWavefunction", "trapezoid_integrate", "fft2", "dft2_at",
    # forward maps
    "EPS_NU", "SymplecticPoint", "TomogramPlane", "FresnelTomogram",
    "OpticalTomogram", "NdWavefunction", "Moments",
    "symplectic_tomogram", "symplectic_tomogram_plane", "fresnel_tomogram",
    "optical_tomogram", "symplectic_from_fresnel", "optical_from_fresnel",
    "symplectic_tomogram_nd", "fresnel_tomogram_nd", "wavefunction_moments",
    "plane_grids_for_slice", "symplectic_plane_set",
    # inverse maps
    "DensityMatrix", "DensityMatrixNd", "WignerFunction", "PsiAutocorrelation",
    "PsiReconstruction", "InversionConfig", "raised_cosine_taper",
    "tomogram_ft2", "psi_slice_at", "reconstruct_psi",
    "reconstruct_density_matrix", "reconstruct_density_matrix_fresnel",
    "reconstruct_density_matrix_nd", "reconstruct_wigner",
    "fresnel_as_symplectic_source", "density_matrix_from_planes",
    "wigner_from_planes",
    # analytic model
    "GcfParams", "gcf_psi", "gcf_grid", "gcf_sampled", "gcf_moments",
    "gcf_width", "gcf_tomogram_analytic", "gcf_plane_analytic",
    "gcf_fresnel_analytic", "gcf_autocorrelation", "gcf_tomogram_ft_analytic",
    "gcf_wigner_analytic", "gcf_source", "gcf_fresnel_source",
    "analytic_plane_set", "wigner_direct", "density_matrix_direct",
]
