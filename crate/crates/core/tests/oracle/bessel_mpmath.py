# Reference values for the cylinder-function tests, evaluated with mpmath at
# 50 significant digits. Run: python3 bessel_mpmath.py
import mpmath as mp

mp.mp.dps = 50

XS = ["1e-3", "0.1", "1", "2.5", "5", "7.9", "8.1", "12", "19.9", "20.1",
      "25", "50", "100", "1000", "10000"]

print("// x, J0, J1, J2, J3, Y0, Y1")
for s in XS:
    x = mp.mpf(s)
    vals = [mp.besselj(n, x) for n in range(4)] + [mp.bessely(0, x), mp.bessely(1, x)]
    print("    (%s, [%s])," % (s, ", ".join(mp.nstr(v, 17, min_fixed=-1, max_fixed=-1) for v in vals)))

print("// first zeros")
print("j0,1 =", mp.nstr(mp.besseljzero(0, 1), 20))
print("y0,1 =", mp.nstr(mp.besselyzero(0, 1), 20))
