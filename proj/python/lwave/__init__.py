"""Wavelet transforms, the L-WaveBlock and a small convergence harness."""

from ._core import (
    Error,
    FormatError,
    Generator,
    InvalidConfig,
    LWaveBlock,
    NonFiniteLoss,
    ShapeError,
    compare_convergence,
    dwt2d,
    filters,
    gradcheck,
    idwt2d,
    psnr,
    read_pnm,
    ssim,
    wavedec2,
    waverec2,
    write_pnm,
)

__all__ = [
    "Error",
    "FormatError",
    "Generator",
    "InvalidConfig",
    "LWaveBlock",
    "NonFiniteLoss",
    "ShapeError",
    "compare_convergence",
    "dwt2d",
    "filters",
    "gradcheck",
    "idwt2d",
    "psnr",
    "read_pnm",
    "ssim",
    "wavedec2",
    "waverec2",
    "write_pnm",
]
