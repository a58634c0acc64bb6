# Dense 1e-4 grid brute force for the crafted randomized-optimality instance.
# One state, two actions, J = 0, identity utilities, TK(0.61) gain weighting.
#   action 0: cost 1.0 with probability 1
#   action 1: cost 0.0 w.p. 0.18, cost 1.6 w.p. 0.82
from mpmath import mp, mpf

mp.dps = 40


def tk(p, d):
    if p <= 0:
        return mpf(0)
    if p >= 1:
        return mpf(1)
    return p**d / (p**d + (1 - p) ** d) ** (1 / d)


def cpt_gain(atoms, d):
    levels = sorted(set(v for v, m in atoms if v > 0))
    prev, tot = mpf(0), mpf(0)
    for v in levels:
        tail = sum(m for vv, m in atoms if vv >= v)
        tot += (v - prev) * tk(tail, d)
        prev = v
    return tot


d = mpf("0.61")
q = mpf("0.18")
x = mpf("1.6")


def h(p):
    return cpt_gain([(mpf(1), p), (mpf(0), (1 - p) * q), (x, (1 - p) * (1 - q))], d)


v0, v1 = h(mpf(1)), h(mpf(0))
best = None
for k in range(10001):
    p = mpf(k) / 10000
    val = h(p)
    if best is None or val < best[0]:
        best = (val, p)
print("vertex0", v0)
print("vertex1", v1)
print("grid_min", best[0], "at weight on action 0 =", best[1])
print("margin", min(v0, v1) - best[0])
