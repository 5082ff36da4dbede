"""
PNG rendering of 1+1 dimensional causal sets.
Time runs up the image, space to the right. Hasse edges are drawn in grey,
slice points in red and the marked point with its light cones shaded.
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from PIL import Image, ImageDraw

from models.causet import Causet, Slice
from utils.file_utils import ensure_directory_exists

logger = logging.getLogger(__name__)

BACKGROUND = (255, 255, 255)
EDGE_COLOR = (170, 170, 170)
POINT_COLOR = (40, 40, 40)
SLICE_COLOR = (200, 30, 30)
MARKED_COLOR = (30, 60, 200)
SHADOW_COLOR = (225, 232, 250)
POINT_RADIUS = 3
MARGIN = 20


class CausetRenderer:
    """Draws an embedded two-dimensional causal set."""

    def __init__(self, size: Tuple[int, int] = (800, 800)):
        self.size = size

    def _transform(self, c: Causet):
        window = c.model.window
        t_low, t_high = window.lower[0], window.upper[0]
        x_low, x_high = window.lower[1], window.upper[1]
        width, height = self.size
        sx = (width - 2 * MARGIN) / (x_high - x_low)
        sy = (height - 2 * MARGIN) / (t_high - t_low)

        def to_pixel(t: float, x: float) -> Tuple[float, float]:
            return MARGIN + (x - x_low) * sx, height - MARGIN - (t - t_low) * sy
        return to_pixel, (t_low, t_high, x_low, x_high)

    def render(self, c: Causet, path: Path, slice_: Optional[Slice] = None,
               marked: Optional[int] = None) -> Path:
        if c.coords is None or c.model is None or c.model.d != 1:
            raise ValueError("Rendering needs an embedded 1+1 dimensional causal set")
        to_pixel, (t_low, t_high, x_low, x_high) = self._transform(c)
        image = Image.new('RGB', self.size, BACKGROUND)
        draw = ImageDraw.Draw(image)

        if marked is not None:
            t, x = c.coords[marked]
            for reach, sign in ((t_high - t, 1.0), (t - t_low, -1.0)):
                cone = [to_pixel(t, x), to_pixel(t + sign * reach, x - reach), to_pixel(t + sign * reach, x + reach)]
                draw.polygon(cone, fill=SHADOW_COLOR)

        for i, j in c.cover_edges():
            draw.line([to_pixel(*c.coords[i]), to_pixel(*c.coords[j])], fill=EDGE_COLOR, width=1)

        highlighted = slice_.points if slice_ is not None else frozenset()
        for i in range(c.n):
            px, py = to_pixel(*c.coords[i])
            color = MARKED_COLOR if i == marked else SLICE_COLOR if i in highlighted else POINT_COLOR
            draw.ellipse([px - POINT_RADIUS, py - POINT_RADIUS, px + POINT_RADIUS, py + POINT_RADIUS], fill=color)

        path = Path(path)
        ensure_directory_exists(path.parent)
        image.save(path, format='PNG')
        logger.info("Rendered %d points to %s", c.n, path)
        return path
