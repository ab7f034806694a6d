"""Render the Julia set of F_pi on the chart z0 = 1 as a grayscale pixmap.

Bounded pixels (black) are exactly the points with tau in [-1, 1]; the
gray level of the rest encodes the escape time of T^n(tau).
"""
import sys

import numpy as np

from projspec import ChartSlice, render_slice, write_csv, write_image
from projspec.dynamics import on_interval_array, tau_array

out = sys.argv[1] if len(sys.argv) > 1 else "julia_demo"
s = ChartSlice(width=256, height=256)
pts, field = render_slice(s, workers=4)
analytic = on_interval_array(tau_array(pts)).reshape(field.counts.shape)
print("bounded pixels:", int((field.counts < 0).sum()), " analytic:", int(analytic.sum()),
      " agreement:", float(np.mean((field.counts < 0) == analytic)))
write_image(field, out + ".ppm")
write_csv(pts, field.counts.reshape(-1), out + ".csv", "escape")
print("wrote", out + ".ppm", "and", out + ".csv")
