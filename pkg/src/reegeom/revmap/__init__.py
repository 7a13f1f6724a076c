from reegeom.revmap.gmatrix import GMatrix, pt_kernel, g_matrix, \
    family_generator, family_from_css, regularized_family, \
    max_admissible_x, VP_REGULARIZATION, HORODECKI_REGULARIZATION
from reegeom.revmap.zfamily import SigmaZParams, ZFamilyDerivatives, \
    LineCrossing, SweepRow, z_derivatives, z_family, z_family_pauli, \
    line_crossing, css_line_sweep, sample_sigma_z, sample_sweep_params
