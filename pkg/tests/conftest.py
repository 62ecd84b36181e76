import numpy as np
import pytest

from srinterp.raster import Image
from srinterp.synth import natural_image, reference_pair


@pytest.fixture(scope="session")
def natural_pairs():
    """Six (input 128x128, reference 512x512) pairs."""
    return [reference_pair(seed=100 + i) for i in range(6)]


@pytest.fixture(scope="session")
def natural_images():
    """Ten 128x128 textured images."""
    return [natural_image(128, 128, seed=300 + i) for i in range(10)]


@pytest.fixture
def checker_image():
    arr = np.zeros((8, 8), dtype=np.uint8)
    arr[::2, ::2] = 200
    arr[1::2, 1::2] = 200
    return Image.from_array(arr)
