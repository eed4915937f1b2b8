"""Independent reference values for the unit tests.

Everything here is derived from the model's definitions with mpmath at 30
digits and shares no code with the library:

* the two beliefs are independent uniforms on [p_t - e, p_t + e] with
  e = eps * min(p_t, 1 - p_t);
* the basic game's consensus is their average, so given p_t it has the
  triangular density (e - |c - p_t|) / e^2;
* the single-quote game's consensus is one belief, density 1 / (2 e);
* p_t has a uniform prior, so the posterior of p_t given the consensus is
  proportional to the likelihood above.

Run:  python3 tests/oracles/generate.py > tests/unit/oracle_values.hpp
"""

import mpmath as mp

mp.mp.dps = 30


def half_width(t, eps):
    return eps * min(t, 1 - t)


def likelihood(variant, c, t, eps):
    e = half_width(t, eps)
    if e <= 0 or abs(c - t) >= e:
        return mp.mpf(0)
    if variant == "basic":
        return (e - abs(c - t)) / e**2
    return 1 / (2 * e)


def support(c, eps):
    lo = max(c / (1 + eps), (c - eps) / (1 - eps)) if eps < 1 else c / (1 + eps)
    hi = min((c + eps) / (1 + eps), c / (1 - eps)) if eps < 1 else (c + eps) / (1 + eps)
    return mp.mpf(lo), mp.mpf(hi)


def posterior_moments(variant, c, eps):
    c = mp.mpf(c)
    eps = mp.mpf(eps)
    lo, hi = support(c, eps)
    pts = sorted({lo, hi} | {x for x in (c, mp.mpf("0.5")) if lo < x < hi})
    mass = mp.quad(lambda t: likelihood(variant, c, t, eps), pts)
    first = mp.quad(lambda t: t * likelihood(variant, c, t, eps), pts)
    return mass, first


def fair_m(variant, c, eps):
    mass, first = posterior_moments(variant, c, eps)
    return first / mass - c


def mean_margin(variant, c, eps, m):
    mass, first = posterior_moments(variant, c, eps)
    return 1 - (first / mass) / (mp.mpf(c) + m)


def conditional_margin(t, eps, w1):
    """Seller's objective margin averaged over belief pairs with p_s < p_b."""
    t, eps, w1 = mp.mpf(t), mp.mpf(eps), mp.mpf(w1)
    e = half_width(t, eps)
    lo, hi = t - e, t + e

    def inner(b):
        # integral over s in [lo, b] of 1 - t / ((1 - w1) b + w1 s)
        return (b - lo) - t / w1 * mp.log(b / ((1 - w1) * b + w1 * lo))

    return 2 * mp.quad(inner, [lo, hi]) / (hi - lo) ** 2


def w1_star(t, eps):
    f = lambda w: conditional_margin(t, eps, w)
    a, b = mp.mpf("1e-6"), 1 - mp.mpf("1e-6")
    if f(a) * f(b) > 0:
        return None
    return mp.findroot(f, (a, b), solver="anderson")


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 17, min_fixed=-30, max_fixed=30)};")


def tag(x):
    return str(x).replace(".", "p").replace("-", "m")


def main():
    print("#pragma once")
    print()
    print("// Generated by tests/oracles/generate.py. Do not edit by hand.")
    print()
    print("namespace oracle {")
    print()

    for variant in ("basic", "definetti"):
        for c, eps in ((0.3, 0.5), (0.1, 0.5), (0.3, 1.0), (0.7, 0.25), (0.45, 0.75), (0.8, 0.5), (0.5, 0.5)):
            mass, _ = posterior_moments(variant, c, eps)
            emit(f"{variant}_mass_{tag(c)}_{tag(eps)}", mass)
            emit(f"{variant}_m_{tag(c)}_{tag(eps)}", fair_m(variant, c, eps))
            emit(f"{variant}_margin0_{tag(c)}_{tag(eps)}", mean_margin(variant, c, eps, 0))
            emit(f"{variant}_margin_shift_{tag(c)}_{tag(eps)}", mean_margin(variant, c, eps, mp.mpf("0.01")))
        print()

    for t, eps, w1 in ((0.3, 0.5, 0.5), (0.7, 0.5, 0.5), (0.2, 1.0, 0.25), (0.8, 0.75, 0.75), (0.6, 0.3, 0.4)):
        emit(f"cond_margin_{tag(t)}_{tag(eps)}_{tag(w1)}", conditional_margin(t, eps, w1))
    print()

    for t, eps in ((0.3, 0.25), (0.3, 0.75), (0.7, 1.0), (0.9, 0.5)):
        emit(f"w1_star_{tag(t)}_{tag(eps)}", w1_star(t, eps))
    print()
    print("}  // namespace oracle")


if __name__ == "__main__":
    main()
