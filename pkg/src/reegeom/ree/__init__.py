from reegeom.ree.entropy import von_neumann_entropy, relative_entropy, \
    logarithmic_mean, log_derivative, directional_derivative, \
    directional_optimality_check
from reegeom.ree.oracle import OracleConfig, ReeReport, ProductEnsemble, \
    create_oracle_config, ree_numeric
