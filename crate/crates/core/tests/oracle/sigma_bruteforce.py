# Reference cross sections for the confined impurity (d = 1). G_r comes from
# the brute-force mode sum in renorm_bruteforce.py, s(k) from mpmath Bessel
# functions; sigma is then |s Sigma / (1 - s G_r)|^2 with Sigma the open-mode
# flux sum. Run: python3 sigma_bruteforce.py
import math
import mpmath
from renorm_bruteforce import renorm_sum


def strength(kd, a):
    x = kd * abs(a)
    j0, y0 = mpmath.besselj(0, x), mpmath.bessely(0, x)
    den = mpmath.mpc(j0, y0 if a > 0 else -y0)
    return complex(-2j * j0 / den)


def sigma(kd, y0, a):
    re, im = renorm_sum(kd, y0)
    g = complex(re, im)
    n_open = int(kd / math.pi)
    flux = math.fsum(2.0 * math.sin(n * math.pi * y0) ** 2 / math.sqrt(kd * kd - (n * math.pi) ** 2)
                     for n in range(1, n_open + 1))
    s = strength(kd, a)
    rs = s / (1.0 - s * g)
    return abs(rs) ** 2 * flux ** 2, rs


if __name__ == "__main__":
    for kd_over_pi, y0, a in [(1.5, 0.3, 0.1), (2.5, 0.05, 0.1), (3.7, 0.5, -0.02), (7.2, 0.32, 0.02)]:
        sig, rs = sigma(kd_over_pi * math.pi, y0, a)
        print("    (%r, %r, %r, %.17e, %.17e, %.17e)," % (kd_over_pi, y0, a, sig, rs.real, rs.imag))
