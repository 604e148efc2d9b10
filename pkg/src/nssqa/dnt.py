"""Divisive normalization of wavelet subbands.

Each coefficient is divided by the local Gaussian-scale-mixture
multiplier estimate: the root of the 3x3 mean of squared coefficients
relative to the subband's overall variance. Flat subbands normalize
to zero rather than blowing up.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import uniform_filter

Z_FLOOR = 1e-6
NEIGHBORHOOD = 3


def normalize(subband: np.ndarray) -> np.ndarray:
    """Divide a subband by its local GSM multiplier estimate."""
    variance = subband.var()
    if variance < 1e-24:
        return np.zeros_like(subband)
    # uniform_filter can go fractionally negative on squared input
    local_energy = np.maximum(
        uniform_filter(subband**2, size=NEIGHBORHOOD, mode="nearest"), 0.0
    )
    z_hat = np.sqrt(local_energy / variance)
    return subband / np.maximum(z_hat, Z_FLOOR)
