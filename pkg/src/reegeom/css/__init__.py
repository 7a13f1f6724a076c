from reegeom.css.classify import FamilyKind, FamilyTag, classify
from reegeom.css.css import CssResult, Residuals, css_bell_diagonal, css_vp, \
    css_horodecki, css_auto, vp_family_parameter, horodecki_family_parameter
