import numpy as np
import pytest

from ctsvd.core.tensor import Tensor3


@pytest.fixture
def example_tensor():
    """2x2x2 worked example: X^(1) = [1 2; 3 4], X^(2) = [5 6; 7 8]."""
    return Tensor3.from_slices([[[1.0, 2.0], [3.0, 4.0]], [[5.0, 6.0], [7.0, 8.0]]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)
