"""Space-time wavelet block thresholding for noisy image sequences.

Arrays are float64 with time first: (n, N) for a line of pixels or
(n, N, N) for images. n and N must be powers of two.
"""

from ._core import (
    DEFAULT_DELTA,
    STUDY_DELTA,
    VolumeFileError,
    block_length,
    block_threshold,
    denoise,
    deviation_check,
    dwt,
    epsilon_from_sigma,
    idwt,
    mad_sigma,
    observe,
    phantom,
    rate_experiment,
    read_volume,
    run_study,
    snr_to_sigma,
    theoretical_delta_floor,
    wavelet_names,
    write_volume,
)

__all__ = [
    "DEFAULT_DELTA",
    "STUDY_DELTA",
    "VolumeFileError",
    "block_length",
    "block_threshold",
    "denoise",
    "deviation_check",
    "dwt",
    "epsilon_from_sigma",
    "idwt",
    "mad_sigma",
    "observe",
    "phantom",
    "rate_experiment",
    "read_volume",
    "run_study",
    "snr_to_sigma",
    "theoretical_delta_floor",
    "wavelet_names",
    "write_volume",
]
