"""
Seasonal and trend filters
==========================

The 2x12 moving average has zeros at every monthly seasonal frequency, and
first differencing removes a linear trend. Composing the two gives the
filter whose transfer function we later divide out.
"""

from math import pi

import numpy as np

from cyclescope import (
    MonthlySeries,
    apply_filter,
    compose,
    difference_filter,
    ma_2x12,
    transfer,
)

ma = ma_2x12()
print("2x12 weights:", np.round(ma.weights * 24).astype(int), "/ 24")

# gain at the seasonal harmonics is zero up to rounding
for k in range(1, 12):
    print(f"k={k:2d}  |L(2 pi k/12)| = {abs(transfer(ma, 2 * pi * k / 12)):.1e}")

###############################################################################
# A series with a seasonal pattern, a drift and a 41-month cycle.
t = np.arange(1, 241)
x = 0.004 * t + 0.05 * np.cos(2 * pi * t / 12) + 0.02 * np.cos(2 * pi * t / 41)
s = MonthlySeries((2000, 1), x, "demo")

comp = compose(ma, difference_filter(1))
out = apply_filter(s, comp)
print(f"filtered: {len(out)} points from {out.dates()[0]} to {out.dates()[-1]}")

# what is left is the cycle, rescaled by the composite gain
psi = 2 * pi / 41
print(f"gain at the cycle: {abs(transfer(comp, psi)):.4f}")
print(f"observed range / input range: {np.ptp(out.values[20:-20]) / 0.04:.4f}")
