"""Closed-form spectral theory of the tridiagonal family V_n(b).

V_n(b) has diagonal b+1, superdiagonal 1 and subdiagonal b. Its determinant
is the repunit R_{n+1}(b) = 1 + b + ... + b**n, its spectrum is explicit,
and its inverse has rational entries built from repunits.
"""

from .inverse import (
    InverseEntry,
    apply_inverse,
    cheb_repunit_identity,
    chebyshev_point,
    chebyshev_u,
    inverse_dense,
    inverse_entry,
    inverse_entry_details,
    thomas_solve,
)
from .matrix import (
    RowEntries,
    SimilarityScaling,
    TridiagonalParams,
    dense_materialize,
    dense_symmetrized,
    matvec_t,
    matvec_v,
    row_entries,
    similarity_scaling,
    weighted_inner,
)
from .repunit import repunit_exact, repunit_float, repunit_log, repunit_table
from .scalars import DomainError, LogScalar, as_base
from .spectral import (
    Eigenpair,
    Spectrum,
    det_bounds,
    determinant_continuant,
    eigenpair,
    eigenvalue,
    eigenvector,
    eigenvector_log,
    hyperbolic_product,
    hyperbolic_product_log,
    spectral_product,
    spectrum,
)

__version__ = "0.1.0"
