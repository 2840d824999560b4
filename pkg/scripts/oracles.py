"""High-precision reference values used as frozen test oracles.

Independent of the library: mpmath at 40 digits, closed forms only.
Run: python scripts/oracles.py
"""

import mpmath as mp

mp.mp.dps = 40


def showcase_cheat(alpha_prime=3 / mp.sqrt(2)):
    e = mp.e ** (-2 * alpha_prime**2)
    k = 2 * mp.sqrt(2) * alpha_prime
    parity = lambda p: mp.e ** (-p * p) * (e - mp.cos(k * p)) / (1 - e)  # odd cat, pi W(0, p)
    d = mp.findroot(lambda p: mp.diff(parity, p), 0.5)
    return d, (parity(d) + 1) / 4


def token_gain(alpha):
    return mp.e ** (-2 * alpha**2) / (2 * (1 + mp.e ** (-4 * alpha**2)))


if __name__ == "__main__":
    d, c = showcase_cheat()
    print("d      ", mp.nstr(d, 17))
    print("C_max  ", mp.nstr(c, 17))
    for a in (0.5, 1, 1.5, 2, 2.5):
        print(f"G_max({a})", mp.nstr(token_gain(mp.mpf(a)), 17))
