"""Core type aliases.

These aliases name the array shapes passed between modules without adding
runtime overhead. Shapes are documented here once instead of at every
call site.
"""

from typing import Union

import numpy as np
import numpy.typing as npt

#: Non-negative integer identifying one semantic class.
ClassId = int

#: Real matrix, row-major, one row per instance (``N x D`` or ``N x K``).
Matrix = npt.NDArray[np.float64]

#: Real vector (means, weights, scores).
Vector = npt.NDArray[np.float64]

#: Integer vector (labels, row indices).
IndexVector = npt.NDArray[np.int64]

#: Anything accepted where a matrix is expected.
MatrixLike = Union[Matrix, list[list[float]]]
