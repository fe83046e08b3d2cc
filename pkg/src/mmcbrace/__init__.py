"""Right-brace census engine for 2-groups with a cyclic index-2 adjoint group."""

__version__ = "0.1.0"

from .zmod import EndoMatrix, GroupElement, GroupShape  # noqa: E402,F401
from .holomorph import HolElement, HolSubgroup  # noqa: E402,F401
from .brace import BraceTable, Cocycle  # noqa: E402,F401
from .census import Census, CensusRecord  # noqa: E402,F401
from .families import BraceDescriptor  # noqa: E402,F401
from .presentations import PresentedElement, TwoGroupFamily  # noqa: E402,F401
