"""Regenerate bessel_oracle.csv: 50-digit reference values for J, Y, I, K and
their derivatives at pseudo-random (n, x) pairs.

    python3 gen_bessel_oracle.py > bessel_oracle.csv
"""
import random

import mpmath as mp

mp.mp.dps = 50
rng = random.Random(20240917)

print("n,x,j,y,jp,yp,i,k,ip,kp")
rows = 0
while rows < 1000:
    n = rng.randint(0, 60)
    x = 10 ** rng.uniform(-6, mp.log10(500))
    x = float(x)
    xm = mp.mpf(x)
    j = mp.besselj(n, xm)
    y = mp.bessely(n, xm)
    jp = mp.besselj(n, xm, derivative=1)
    yp = mp.bessely(n, xm, derivative=1)
    i = mp.besseli(n, xm)
    k = mp.besselk(n, xm)
    ip = mp.besseli(n, xm, derivative=1)
    kp = mp.diff(lambda t: mp.besselk(n, t), xm)
    vals = [j, y, jp, yp, i, k, ip, kp]
    # keep rows whose values are representable as normal doubles
    if any(abs(v) > mp.mpf("1e300") or (v != 0 and abs(v) < mp.mpf("1e-300")) for v in vals):
        continue
    print(",".join([str(n), repr(x)] + [mp.nstr(v, 25, min_fixed=0, max_fixed=0) for v in vals]))
    rows += 1
