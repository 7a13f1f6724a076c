from typing import Union

from reegeom.css.css import css_auto
from reegeom.ree.oracle import OracleConfig, ReeReport, ree_numeric
from reegeom.states.qstate import MatrixLike


def ree_geometric(rho: MatrixLike) -> ReeReport:
    """REE from the geometric closest separable state.

    Raises NotSolvableFamilyError unless rho is separable or belongs to one
    of the solvable families. The optimizer is not run, so css_numeric stays
    None and gap is nan; use ree_compare for both.
    """
    result = css_auto(rho, numeric_fallback=False)
    return ReeReport(result.ree, css_geometric=result.css,
                     residuals=result.residuals)


def ree_compare(rho: MatrixLike, cfg: Union[OracleConfig, dict] = None
                ) -> ReeReport:
    geometric = css_auto(rho, numeric_fallback=False)
    numeric = ree_numeric(rho, cfg)
    return ReeReport(
        value=geometric.ree,
        css_numeric=numeric.css_numeric,
        css_geometric=geometric.css,
        gap=geometric.ree - numeric.value,
        iterations=numeric.iterations,
        converged=numeric.converged,
        restart_values=numeric.restart_values,
        residuals=geometric.residuals,
    )
