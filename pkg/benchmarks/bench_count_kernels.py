"""Compare the numba and numpy fiber-counting kernels.

Run with ``python benchmarks/bench_count_kernels.py``.  Each case counts
representations of the marginal Markov potential over a few primes; both
backends must agree exactly.
"""

import argparse
import time

from markovcoha.dimred import count_reps
from markovcoha.dimred._kernels import HAVE_NUMBA
from markovcoha.pipelines import cut_data
from markovcoha.presets import preset

CASES = [("markov-marg", (1, 1, 1)), ("markov-marg", (1, 1, 2)), ("markov-gen", (2, 1, 1)), ("markov-marg", (2, 2, 1)), ("markov-gen", (2, 2, 1))]


def best_of(fn, repeat):
    best, value = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = fn()
        best = min(best, time.perf_counter() - t0)
    return best, value


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", default="2,3,5,7")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    primes = [int(p) for p in args.primes.split(",")]
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    if HAVE_NUMBA:
        # compile once outside the timings
        count_reps(cut_data(preset("markov-marg")), (1, 1, 1), 2, backend="numba")
    print(f"{'case':<24}{'q':>4}" + "".join(f"{b:>12}" for b in backends) + f"{'count':>16}")
    for name, d in CASES:
        cd = cut_data(preset(name))
        for p in primes:
            times, counts = [], set()
            for b in backends:
                t, c = best_of(lambda: count_reps(cd, d, p, budget=10**8, backend=b), args.repeat)
                times.append(t)
                counts.add(c)
            if len(counts) != 1:
                raise SystemExit(f"backends disagree on {name} {d} q={p}: {counts}")
            label = f"{name} {','.join(map(str, d))}"
            print(f"{label:<24}{p:>4}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + f"{counts.pop():>16}")


if __name__ == "__main__":
    main()
