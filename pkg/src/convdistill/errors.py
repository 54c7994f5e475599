"""Exception hierarchy shared by all convdistill modules."""


class ConvDistillError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(ConvDistillError):
    """Operand shapes are incompatible for the requested operation."""


class DivisionNearZero(ConvDistillError):
    """Unregularized spectral division hit a (near-)zero denominator bin."""


class EmptyInput(ConvDistillError):
    """An operation requiring at least one element received none."""


class UnknownFeature(ConvDistillError):
    """Feature id does not exist in the segmentation."""


class SegmentationMismatch(ConvDistillError):
    """Segmentation extent does not match the matrix it is applied to."""


class UnsupportedSegmentation(ConvDistillError):
    """Operation is not defined for this segmentation kind."""


class MatrixFormatError(ConvDistillError):
    """A matrix file could not be parsed."""
