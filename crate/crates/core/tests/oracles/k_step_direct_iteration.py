# Smallest K with ||Q^K||_inf < 1 - 1e-6 for single-action transient chains,
# where Q is the transition matrix restricted to non-absorbing states.
# Exact rational arithmetic; "A" denotes the absorbing state.
from fractions import Fraction as F

CHAINS = {
    "half_exit": {"s0": {"s0": F(1, 2), "A": F(1, 2)}},
    "three_step_line": {"s0": {"s1": F(1)}, "s1": {"s2": F(1)}, "s2": {"A": F(1)}},
    "leaky_pair": {
        "s0": {"s0": F(3, 10), "s1": F(6, 10), "A": F(1, 10)},
        "s1": {"s0": F(1, 2), "s1": F(1, 2)},
    },
    "corridor": {
        **{f"s{i}": {f"s{i}": F(3, 10), f"s{i + 1}": F(7, 10)} for i in range(4)},
        "s4": {"s4": F(3, 10), "A": F(7, 10)},
    },
    "slow_cycle": {
        "s0": {"s1": F(1)},
        "s1": {"s2": F(1)},
        "s2": {"s0": F(99, 100), "A": F(1, 100)},
    },
}

THRESHOLD = 1 - F(1, 10**6)


def matmul(a, b, states):
    return {x: {y: sum(a[x].get(z, 0) * b[z].get(y, 0) for z in states) for y in states} for x in states}


for name, rows in CHAINS.items():
    states = list(rows)
    q = {x: {y: rows[x].get(y, F(0)) for y in states} for x in states}
    power = q
    norms = []
    for k in range(1, 50):
        norm = max(sum(power[x].values()) for x in states)
        norms.append(norm)
        if norm < THRESHOLD:
            break
        power = matmul(power, q, states)
    print(name, "K =", len(norms), "norms =", [float(n) for n in norms])
