"""Arc graphs of punctured surfaces: normal coordinates, unicorn paths and
finite experiments on the Gromov boundary.

The subpackages are layered: :mod:`triangulation` and :mod:`normal` describe
ideal triangulations and normal paths, :mod:`surface` adds the mapping class
action, :mod:`diagram` computes intersections and crossing orders,
:mod:`unicorn` builds unicorn paths, :mod:`graph` measures distances and
:mod:`boundary_lab` runs the orbit experiments.  :mod:`suites` and
:mod:`cli` bundle them into reproducible reports.
"""

from .errors import ArcGraphError, DomainError, InputError
from .surface import MappingClassWord, OrientedArc, Surface, builtin_surface, load_surface
from .triangulation import Triangulation, validate_triangulation

__version__ = "0.1.0"

__all__ = [
    "ArcGraphError",
    "DomainError",
    "InputError",
    "MappingClassWord",
    "OrientedArc",
    "Surface",
    "Triangulation",
    "builtin_surface",
    "load_surface",
    "validate_triangulation",
]
