"""Face matching over Hu moment invariants of facial feature regions."""

from ._humatch import (
    Cascade,
    Gallery,
    HumatchError,
    Pipeline,
    central_moments,
    histogram,
    hu_moments,
    identify,
    load_pgm,
    log_scale,
    otsu_threshold,
    rect_sum,
    save_pgm,
)

__all__ = [
    "Cascade",
    "Gallery",
    "HumatchError",
    "Pipeline",
    "central_moments",
    "histogram",
    "hu_moments",
    "identify",
    "load_pgm",
    "log_scale",
    "otsu_threshold",
    "rect_sum",
    "save_pgm",
]
