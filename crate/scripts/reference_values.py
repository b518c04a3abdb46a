"""High-precision reference values frozen into the Rust test suite.

Run with: python3 scripts/reference_values.py
"""
import mpmath as mp


def ml(alpha, beta, x):
    dps = int(abs(x) ** (1.0 / alpha) / 2.3) + 80
    with mp.workdps(dps):
        alpha, beta, x = mp.mpf(alpha), mp.mpf(beta), mp.mpf(x)
        s = mp.mpf(0)
        k = 0
        while True:
            term = x**k / mp.gamma(alpha * k + beta)
            s += term
            if k > 10 and abs(term) < mp.mpf(10) ** (-60) * max(abs(s), mp.mpf(10) ** -200):
                break
            k += 1
        return s


def hyp1f2(a, b1, b2, z, dps=200):
    with mp.workdps(dps):
        return mp.hyp1f2(a, b1, b2, z)


def gamma_early_T0(s, g, mu, omega, t, dps=40):
    """Early-time noise action at T = 0 by direct quadrature."""
    with mp.workdps(dps):
        s, g, mu, omega, t = map(mp.mpf, (s, g, mu, omega, t))

        def f(x):
            if x < 1:
                return mp.nsum(lambda n: (-1) ** n * 2 * (2 * n - 1) * x ** (2 * n) / mp.factorial(2 * n), [2, mp.inf])
            return 2 + x**2 - 2 * mp.cos(x) - 2 * x * mp.sin(x)

        # integrate in x = ω t
        xmax = omega * t
        pts = [0] + [min(xmax, k * mp.pi) for k in range(1, int(xmax / mp.pi) + 2)]
        pts = sorted(set(pts))
        integral = mp.quad(lambda x: x ** (s - 4) * f(x), pts)
        return g / (2 * mp.pi * mu) * t ** (3 - s) * integral


if __name__ == "__main__":
    mp.mp.dps = 30
    for a, b, x in [(0.8, 2, -1), (0.8, 2, -50), (1.2, 1, -30), (1.5, 1.5, -100), (0.5, 2, -40),
                    (1.7, 2, -100), (1.7, 1, -100), (1.99, 1, -200), (0.3, 0.3, -2), (1.2, 1.2, -1e3)]:
        print(f"ml({a}, {b}, {x}) = {mp.nstr(ml(a, b, x), 25)}")
    print("hyp1f2(0.5;0.5,1.5;-1) =", mp.nstr(hyp1f2(0.5, 0.5, 1.5, -1), 25))
    print("hyp1f2(-0.9;0.5,0.1;-0.25) =", mp.nstr(hyp1f2(-0.9, 0.5, 0.1, -0.25), 25))
    print("hyp1f2(-0.9;0.5,0.1;-2500) =", mp.nstr(hyp1f2(-0.9, 0.5, 0.1, -2500), 25))
    mu = 1e-8
    for s in (1.2, 0.5, 1.7):
        for m in (0.5, 1, 10):
            t = 4 * mp.pi * mu * m
            print(f"gamma_early(s={s}, t={m}P) =", mp.nstr(gamma_early_T0(s, 1, mu, 1 / mu, t), 18))
