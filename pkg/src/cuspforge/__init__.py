"""cuspforge: exact certification of singular sextic surfaces.

The package is an exact computer-algebra kernel (rationals, number fields,
sparse multivariate polynomials, Groebner bases, ideal calculus) together
with a pipeline that constructs a four-parameter family of dihedral sextic
surfaces, reproduces its discriminant geometry, and certifies the cusp and
node counts of its distinguished members.
"""

from cuspforge.fields import (
    QQ,
    MinimalPolynomial,
    NumberField,
    NFElt,
    SplitEvent,
)
from cuspforge.polys import PolyRing, Polynomial, GREVLEX, LEX, block_order
from cuspforge.groebner import (
    GroebnerBasis,
    ComputeContext,
    ResourceLimit,
    buchberger,
    normal_form,
)
__version__ = "1.0.0"

__all__ = [
    "QQ",
    "MinimalPolynomial",
    "NumberField",
    "NFElt",
    "SplitEvent",
    "PolyRing",
    "Polynomial",
    "GREVLEX",
    "LEX",
    "block_order",
    "GroebnerBasis",
    "ComputeContext",
    "ResourceLimit",
    "buchberger",
    "normal_form",
]
