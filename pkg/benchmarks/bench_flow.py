"""Benchmark: compiled vs pure-Python Dinic kernel on two-bag networks.

Usage: python3 benchmarks/bench_flow.py [--sizes 20,50,100,200] [--repeat 5]
"""
import argparse
import random
import statistics
import time

from bagconsist import Bag, build_network
from bagconsist._pyflow import dinic as py_dinic

try:
    from bagconsist._fastflow import dinic as cy_dinic
except ImportError:
    cy_dinic = None


def make_instance(rng: random.Random, support: int):
    """A consistent pair of bags with `support` rows each."""
    b_vals = [str(i) for i in range(max(2, support // 4))]
    r = {}
    s = {}
    for i in range(support):
        b = rng.choice(b_vals)
        r[(str(i), b)] = rng.randint(1, 10 ** 6)
    for i in range(support):
        b = rng.choice(b_vals)
        s[(b, str(i))] = rng.randint(1, 10 ** 6)
    return Bag(("A", "B"), r), Bag(("B", "C"), s)


def time_kernel(kernel, net, repeat: int) -> float:
    arcs = net.arcs()
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        kernel(net.num_nodes, arcs, 0, net.num_nodes - 1)
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,50,100,200")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = random.Random(1)
    print("%8s %10s %12s %12s %8s" % ("support", "arcs", "python", "cython",
                                      "speedup"))
    for size in sizes:
        r, s = make_instance(rng, size)
        net = build_network(r, s)
        n_arcs = len(net.arcs())
        t_py = time_kernel(py_dinic, net, args.repeat)
        if cy_dinic is None:
            print("%8d %10d %12.6f %12s %8s" % (size, n_arcs, t_py, "n/a", "-"))
            continue
        t_cy = time_kernel(cy_dinic, net, args.repeat)
        print("%8d %10d %12.6f %12.6f %7.2fx"
              % (size, n_arcs, t_py, t_cy, t_py / t_cy))


if __name__ == "__main__":
    main()
