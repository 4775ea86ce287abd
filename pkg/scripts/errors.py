"""
Exception types raised by the lattice workbench.

All of them are ValueErrors so callers that only care about "bad input"
can keep catching ValueError.
"""


class ConstructionError(ValueError):
    """Infeasible code or lattice construction request"""


class UnsupportedGeometryError(ValueError):
    """Lattice does not admit the diagonal decomposition (d_min of C_0 below 2)"""


class UnsupportedDecoderError(ValueError):
    """Decoder cannot handle the given Tanner graph"""


class DimensionTooLargeError(ValueError):
    """Exhaustive enumeration refused because the code dimension is too large"""


class MembershipError(ValueError):
    """Vector is not a member of the lattice"""


class ConfigError(ValueError):
    """Invalid simulation or decoder configuration"""


class RecipeError(ValueError):
    """Malformed construction recipe"""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"Invalid recipe field '{field}': {message}")


class FormatError(ValueError):
    """Malformed alist or lattice file"""

    def __init__(self, line_number, message, path=None):
        self.line_number = line_number
        self.path = path
        where = f"{path}:" if path else "line "
        super().__init__(f"{where}{line_number}: {message}")
