"""Procedural test images: gradients, soft checkerboards, filtered noise fields.

Stand-ins for the classic photographic test set, used by the benchmark and
the test suite. All generators are deterministic.
"""

from __future__ import annotations

import numpy as np

from .core import GrayImage

__all__ = [
    "default_bench_images",
    "make_checkerboard",
    "make_filtered_field",
    "make_ramp",
    "make_vignette",
]


def _rescale(arr: np.ndarray, lo: float = 0.0, hi: float = 255.0) -> np.ndarray:
    amin = arr.min()
    amax = arr.max()
    if amax == amin:
        return np.full_like(arr, (lo + hi) / 2.0)
    return lo + (arr - amin) * ((hi - lo) / (amax - amin))


def make_ramp(height: int, width: int) -> GrayImage:
    """Diagonal linear gradient spanning [0, 255]."""
    x = np.arange(height, dtype=np.float64)[:, np.newaxis]
    y = np.arange(width, dtype=np.float64)[np.newaxis, :]
    return GrayImage(_rescale(x + y))


def make_vignette(height: int, width: int) -> GrayImage:
    """Smooth raised-cosine brightness sweep that wraps without a seam.

    A linear ramp's wrap discontinuity leaves 1/u tails along the spectrum
    axes, which a periodic transform sees as content; this gradient keeps all
    its energy next to DC.
    """
    x = np.arange(height, dtype=np.float64)[:, np.newaxis]
    y = np.arange(width, dtype=np.float64)[np.newaxis, :]
    sweep = (1.0 - np.cos(2.0 * np.pi * x / height)) * (1.0 - np.cos(2.0 * np.pi * y / width))
    return GrayImage(_rescale(sweep))


def make_checkerboard(height: int, width: int, period: int = 16, sharpness: float = 3.0) -> GrayImage:
    """Checkerboard with tanh-shaped edges; low sharpness keeps harmonics weak."""
    x = np.arange(height, dtype=np.float64)[:, np.newaxis]
    y = np.arange(width, dtype=np.float64)[np.newaxis, :]
    cells = np.sin(2.0 * np.pi * x / period) * np.sin(2.0 * np.pi * y / period)
    return GrayImage(_rescale(np.tanh(sharpness * cells)))


def make_filtered_field(
    height: int, width: int, sigma: float, seed: int, lo: float = 0.0, hi: float = 255.0
) -> GrayImage:
    """Gaussian-filtered white noise rescaled to [lo, hi]; 1/f-like spectrum."""
    rng = np.random.default_rng(seed)
    field = rng.normal(0.0, 1.0, (height, width))
    fu = np.fft.fftfreq(height)[:, np.newaxis]
    fv = np.fft.fftfreq(width)[np.newaxis, :]
    envelope = np.exp(-2.0 * np.pi**2 * sigma**2 * (fu * fu + fv * fv))
    smooth = np.fft.ifft2(np.fft.fft2(field) * envelope).real
    return GrayImage(_rescale(smooth, lo, hi))


def default_bench_images(size: int = 256) -> list[tuple[str, GrayImage]]:
    """Four deterministic bench images with broadband spectra.

    The gradient and checkerboard get a filtered-noise texture so their
    spectra are nonzero away from the axes, like photographic content. The
    checker lattice sits at 4 cycles per axis and the vignette's energy
    hugs DC, so their own impulses stay inside the detection guard.
    """
    # Lower contrast keeps the smooth image's own low-frequency energy from
    # burying the weakest benchmark interference component.
    coarse = make_filtered_field(size, size, sigma=2.5, seed=11, lo=80.0, hi=176.0)
    fine = make_filtered_field(size, size, sigma=1.2, seed=12)
    vignette = make_vignette(size, size)
    checker = make_checkerboard(size, size, period=size // 4, sharpness=0.5)
    texture_a = make_filtered_field(size, size, sigma=1.2, seed=13)
    texture_b = make_filtered_field(size, size, sigma=1.2, seed=14)
    vignette_t = GrayImage(_rescale(0.6 * vignette.pixels + 0.4 * texture_a.pixels))
    checker_t = GrayImage(_rescale(0.5 * checker.pixels + 0.5 * texture_b.pixels))
    return [
        ("checker-textured", checker_t),
        ("field-coarse", coarse),
        ("field-fine", fine),
        ("vignette-textured", vignette_t),
    ]
