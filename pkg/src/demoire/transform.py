"""Exact 2D discrete Fourier transform, DC centering, and magnitude display.

Conventions: the forward transform is unnormalized, the inverse carries the
1/(H*W) factor, and arbitrary (including prime) dimensions are exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GrayImage

__all__ = ["Spectrum", "center_shift", "dft2d", "idft2d", "log_magnitude"]

# Imaginary residue thresholds for the inverse transform. The relative test
# catches asymmetric spectral edits; the absolute floor keeps all-but-zero
# outputs (e.g. a fully notched pure sinusoid) from tripping on FFT rounding
# noise, where real and imaginary parts are both at machine scale.
_IMAG_REL_TOL = 1e-6
_IMAG_ABS_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Complex 2D spectrum; ``centered`` is true when DC sits at (H//2, W//2)."""

    data: np.ndarray
    centered: bool = False

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128, copy=True)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2D spectrum array, got {arr.ndim}D")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"spectrum dimensions must be at least 1x1, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("spectrum values must all be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape


def dft2d(img: GrayImage) -> Spectrum:
    """Forward transform: S(u,v) = sum_xy f(x,y) exp(-2i*pi*(ux/H + vy/W))."""
    return Spectrum(np.fft.fft2(img.pixels), centered=False)


def idft2d(spec: Spectrum) -> GrayImage:
    """Normalized inverse transform, keeping the real plane.

    The spectrum must be un-centered (apply :func:`center_shift` first) and
    approximately Hermitian; an imaginary residue above tolerance signals a
    symmetry-breaking bug in upstream spectral edits.
    """
    if spec.centered:
        raise ValueError("spectrum is centered: apply center_shift before the inverse transform")
    inv = np.fft.ifft2(spec.data)
    max_imag = float(np.max(np.abs(inv.imag)))
    max_real = float(np.max(np.abs(inv.real)))
    if max_imag > _IMAG_REL_TOL * max_real and max_imag > _IMAG_ABS_FLOOR:
        raise ValueError(
            f"inverse transform has imaginary residue {max_imag:.3e} against "
            f"max real {max_real:.3e}: spectrum lost Hermitian symmetry"
        )
    return GrayImage(inv.real)


def center_shift(spec: Spectrum) -> Spectrum:
    """Move DC to (H//2, W//2), or back to (0, 0) if already centered.

    For even dimensions the two directions coincide; for odd dimensions the
    inverse rolls by the complementary offset.
    """
    h, w = spec.shape
    if spec.centered:
        shift = (-(h // 2), -(w // 2))
    else:
        shift = (h // 2, w // 2)
    return Spectrum(np.roll(spec.data, shift, axis=(0, 1)), centered=not spec.centered)


def log_magnitude(spec: Spectrum) -> GrayImage:
    """Display view log(1 + |S|), rescaled to [0, 255] over the full grid."""
    scaled = np.log1p(np.abs(spec.data))
    lo = float(scaled.min())
    hi = float(scaled.max())
    if hi == lo:
        return GrayImage(np.zeros(spec.shape))
    return GrayImage((scaled - lo) * (255.0 / (hi - lo)))
