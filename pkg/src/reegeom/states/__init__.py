from reegeom.states.qstate import DensityMatrix, PauliForm, \
    DiagonalPauliForm, LocalUnitary, to_pauli, from_pauli, \
    partial_transpose, partial_trace, is_ppt, canonicalize, concurrence
from reegeom.states.families import bell_state, bell_diagonal_state, \
    vp_state, horodecki_state
from reegeom.states.spectra import ZParallelState, EigenSystem, \
    PtEigenSystem, eigensystem, pt_eigensystem, boundary_T, boundary_L
