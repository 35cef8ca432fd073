"""Independent reference values for the GLIF integration tests.

Re-implements the unit update from the equations alone (no shared code with
the Rust crate), in exact rationals for a single-unit trace and in 50-digit
arithmetic for a small relaxed network, whose gradient comes from a
high-precision central difference. Prints Rust constants.

    python3 gen_values.py > values.txt   # then paste into oracles.rs
"""
from fractions import Fraction as Fr

import mpmath as mp

mp.mp.dps = 50


def unit(u, s, c, alpha, beta, gamma, tau_lin, tau_exp, v_re, g):
    l_exp = (1 - alpha * (1 - tau_exp)) * u
    l = l_exp - (1 - alpha) * tau_lin
    i = (1 - beta * (1 - g)) * c
    f = -gamma * l_exp - (1 - gamma) * v_re
    return l + i + f * s


def single_unit_trace():
    alpha, beta, gamma = Fr(3, 10), Fr(3, 5), Fr(1, 5)
    tau_lin, tau_exp, v_re, v_th = Fr(1, 16), Fr(1, 4), Fr(1, 2), Fr(1, 2)
    gs = [Fr(k + 1, 11) for k in range(10)]
    u, s, out = Fr(0), Fr(0), []
    for t in range(10):
        u = unit(u, s, Fr(2, 5), alpha, beta, gamma, tau_lin, tau_exp, v_re, gs[t])
        s = Fr(1) if u >= v_th else Fr(0)
        out.append((u, s))
    return out


DIMS = [2, 3, 2]
T = 4
FIELDS = ["alpha", "beta", "gamma", "tau_lin", "tau_exp", "v_re", "v_th"]


def raw_value(f, l, u):
    return mp.mpf((f * 7 + l * 3 + u * 5) % 11) / 11 * 2 - 1


def weight_value(l, r, c):
    return mp.mpf((r * 5 + c * 3 + l * 7) % 13) / 13 * 2.4 - 0.2


def input_value(t, i):
    return mp.mpf((t * 3 + i * 5) % 7) / 7


def build():
    layers = []
    for l in range(len(DIMS) - 1):
        w = [[weight_value(l, r, c) for c in range(DIMS[l])] for r in range(DIMS[l + 1])]
        raw = [
            {**{name: raw_value(f, l, u) for f, name in enumerate(FIELDS)},
             "g": [raw_value(7 + t, l, u) for t in range(T)]}
            for u in range(DIMS[l + 1])
        ]
        layers.append({"w": w, "raw": raw})
    return layers


def sig(x):
    return 1 / (1 + mp.e ** (-x))


def forward(layers, label=1):
    x = [[input_value(t, i) for i in range(DIMS[0])] for t in range(T)]
    state = [([mp.mpf(0)] * DIMS[l + 1], [mp.mpf(0)] * DIMS[l + 1]) for l in range(len(layers))]
    counts = [mp.mpf(0)] * DIMS[-1]
    kink = mp.inf
    for t in range(T):
        s_in = x[t]
        for li, layer in enumerate(layers):
            us, ss = state[li]
            new_u, new_s = [], []
            for r in range(DIMS[li + 1]):
                p = {k: sig(v) for k, v in layer["raw"][r].items() if k != "g"}
                g = sig(layer["raw"][r]["g"][t])
                c = mp.fsum(layer["w"][r][j] * s_in[j] for j in range(len(s_in)))
                u = unit(us[r], ss[r], c, p["alpha"], p["beta"], p["gamma"], p["tau_lin"], p["tau_exp"], p["v_re"], g)
                x_ = u - p["v_th"]
                kink = min(kink, abs(abs(x_) - mp.mpf("0.5")))
                new_u.append(u)
                new_s.append(min(mp.mpf(1), max(mp.mpf(0), x_ + mp.mpf("0.5"))))
            state[li] = (new_u, new_s)
            s_in = new_s
        counts = [a + b for a, b in zip(counts, s_in)]
    logits = [v / T for v in counts]
    m = max(logits)
    lse = m + mp.log(mp.fsum(mp.e ** (v - m) for v in logits))
    return logits, lse - logits[label], kink


def grad(layers, getter_setter):
    h = mp.mpf("1e-20")
    get, put = getter_setter
    x0 = get(layers)
    put(layers, x0 + h)
    lp = forward(layers)[1]
    put(layers, x0 - h)
    lm = forward(layers)[1]
    put(layers, x0)
    return (lp - lm) / (2 * h)


def fmt(x):
    return mp.nstr(x, 20, strip_zeros=False)


def main():
    print("// single-unit trace (U, S), exact rationals rounded to f64")
    for u, s in single_unit_trace():
        print(f"({float(u)!r}, {float(s)!r}),")
    layers = build()
    logits, loss, kink = forward(layers)
    print("// relaxed network logits, loss, min kink distance")
    print([fmt(v) for v in logits], fmt(loss), fmt(kink))
    print("// d loss / d weight, layer-major, row-major")
    for l, layer in enumerate(layers):
        for r in range(len(layer["w"])):
            for c in range(len(layer["w"][r])):
                def gs(l=l, r=r, c=c):
                    def get(L):
                        return L[l]["w"][r][c]
                    def put(L, v):
                        L[l]["w"][r][c] = v
                    return get, put
                print(f"{fmt(grad(layers, gs()))},")
    print("// d loss / d raw field, layer 0 unit 1 then layer 1 unit 0: 7 scalars then g[0..T]")
    for l, u in [(0, 1), (1, 0)]:
        for name in FIELDS + [("g", t) for t in range(T)]:
            def gs(l=l, u=u, name=name):
                if isinstance(name, tuple):
                    def get(L):
                        return L[l]["raw"][u]["g"][name[1]]
                    def put(L, v):
                        L[l]["raw"][u]["g"][name[1]] = v
                else:
                    def get(L):
                        return L[l]["raw"][u][name]
                    def put(L, v):
                        L[l]["raw"][u][name] = v
                return get, put
            print(f"{fmt(grad(layers, gs()))},")


if __name__ == "__main__":
    main()
