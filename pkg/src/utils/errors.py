"""
Exception hierarchy shared by every GRNF module
"""


class GrnfError(ValueError):
    """Base class for all validation failures raised by the library"""


class DimensionLimitError(GrnfError):
    """Combinatorial size cap exceeded (Bell numbers, partitions, k_max)"""


class ShapeError(GrnfError):
    """Tensor order, mode size or channel count mismatch"""


class GraphValidationError(GrnfError):
    """Graph violates its structural or attribute invariants"""


class ImportanceWeightError(GrnfError):
    """Importance weight of a weighted map is zero, infinite or undefined"""


class DatasetFormatError(GrnfError):
    """Malformed graph JSON, corpus file or TU dataset directory"""


class ArgumentError(GrnfError):
    """Invalid scalar argument (M, epsilon, delta, k, ...)"""
