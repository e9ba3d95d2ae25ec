"""Regenerates reference.json with 50-digit mpmath values.

    python3 gen_reference.py > reference.json
"""
import json
import random

import mpmath as mp

mp.mp.dps = 50
rng = random.Random(20240611)


def c(z):
    return [float(mp.re(z)), float(mp.im(z))]


def loggamma_points():
    pts = [1, 0.5, 3.7 + 2.1j, 10, 25.5 - 3j, -2.5, -7.3 + 0.2j, 0.1 + 40j, -30.2 - 5j, 45 + 20j]
    while len(pts) < 60:
        z = complex(rng.uniform(-35, 35), rng.uniform(-35, 35))
        if abs(z) <= 50 and min(abs(z + n) for n in range(0, 40)) > 1e-2:
            pts.append(z)
    return pts


def main():
    out = {"log_gamma": [], "digamma": [], "hyp1f1": []}
    for z in loggamma_points():
        zz = mp.mpc(z)
        out["log_gamma"].append({"z": c(zz), "value": c(mp.loggamma(zz))})
        out["digamma"].append({"z": c(zz), "value": c(mp.digamma(zz))})

    cases = [
        (-2.3 + 0.7j, 1.4, 30),
        (0.5, 1.5, 50),
        (-2.3, 1.6, 0.8),
        (1.0, 1.0, 40),
        (-4.6 + 0.6j, 6.2, 12.0),
        (0.3, 5.6, -20),
        (-1.7, 0.8, 200),
        (2.2 - 1.1j, 3.3 + 0.4j, 28 + 10j),
        (-6.0, 3.5, 35.0),
        (-0.3, 1.4, 1000.0),
        (1.5 + 0.7j, 2.4 + 1.4j, 5 - 3j),
    ]
    while len(cases) < 60:
        a = complex(rng.uniform(-6, 4), rng.choice([0.0, rng.uniform(-2, 2)]))
        cc = complex(rng.uniform(0.3, 8), rng.choice([0.0, rng.uniform(-2, 2)]))
        r = rng.choice([rng.uniform(0.1, 25), rng.uniform(25, 80), rng.uniform(80, 2000)])
        t = rng.choice([0.0, 0.0, rng.uniform(-1.2, 1.2)])
        z = complex(mp.re(r * mp.expj(t)), mp.im(r * mp.expj(t)))
        cases.append((a, cc, z))
    for a, cc, z in cases:
        a, cc, z = mp.mpc(a), mp.mpc(cc), mp.mpc(z)
        value = mp.hyp1f1(a, cc, z)
        out["hyp1f1"].append(
            {"a": c(a), "c": c(cc), "z": c(z), "log_abs": float(mp.log(abs(value))), "arg": float(mp.arg(value))}
        )
    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
