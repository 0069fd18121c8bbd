"""Independent reference values for the frozen constants in the unit tests.

Uses mpmath/scipy only; nothing here reads the C++ tables.
Run: python3 tests/oracles/oracles.py
"""
import mpmath as mp
from scipy import special

mp.mp.dps = 30
C = 32  # bump sharpness
W = mp.mpf(1) / 2  # mollifier width


def bump(t):
    d = 1 - t * t
    return mp.e ** (C - C / d) if d > 0 else mp.mpf(0)


Z = mp.quad(bump, [-1, 0, 1])


def bump_cdf(s):
    if s <= -1:
        return mp.mpf(0)
    if s >= 1:
        return mp.mpf(1)
    return mp.quad(bump, [-1, s]) / Z


def chi_hat(xi):
    a = abs(xi)
    if a <= mp.mpf(3) / 2 - W:
        return mp.mpf(1)
    if a >= mp.mpf(3) / 2 + W:
        return mp.mpf(0)
    return 1 - bump_cdf((a - mp.mpf(3) / 2) / W)


def phi_hat(xi):
    return mp.sqrt(2 * mp.pi) * mp.e ** (-xi * xi / 2)


def even_integral(f, hi):
    # 2 * int_0^hi f, split at the cutoff's kinks
    pts = [p for p in (0, 1, mp.mpf(3) / 2, 2) if p <= hi] + ([hi] if hi > 2 else [])
    return 2 * mp.quad(f, pts)


print("chi_hat(1.5)            =", mp.nstr(chi_hat(mp.mpf(3) / 2), 17))
print("chi_hat(1.25)           =", mp.nstr(chi_hat(mp.mpf(5) / 4), 17))
eta0 = even_integral(lambda x: chi_hat(x) / phi_hat(x), 2) / (2 * mp.pi)
print("eta(0)                  =", mp.nstr(eta0, 17))
chi0 = even_integral(chi_hat, 2) / (2 * mp.pi)
print("chi(0)                  =", mp.nstr(chi0, 17))

# chi_sigma * e^{-x^2/2} at 0, sigma = 0.5: chi_sigma has transform chi_hat(2 sigma xi)
s = mp.mpf(1) / 2
smooth0 = even_integral(lambda x: chi_hat(2 * s * x) * phi_hat(x), 2 / (2 * s)) / (2 * mp.pi)
print("smooth gaussian at 0    =", mp.nstr(smooth0, 17))

# lattice coefficient k = 0 of chi_{0.5} * phi with h = 1, sigma = 0.5
h = 1
coef0 = h * even_integral(lambda x: chi_hat(x) * phi_hat(x) / phi_hat(s * x), 2) / (2 * mp.pi)
print("lattice coefficient u_0 =", mp.nstr(coef0, 17))

print("2 E1(0.01)              =", repr(2 * special.exp1(0.01)))
print("sqrt((1+e^-1)/2)        =", mp.nstr(mp.sqrt((1 + mp.e ** -1) / 2), 17))
print("delta e^-2/(3 e G(1/2)) =", mp.nstr(mp.mpf(1) / 4 * mp.e ** -2 / (3 * mp.e * mp.gamma(0.5)), 17))
print("sqrt(2/pi)              =", mp.nstr(mp.sqrt(2 / mp.pi), 17))
