"""Compare the compiled and pure-Python state-sum kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--max-width W]

Each case cables a corpus diagram, builds its state-sum network and times
one histogram with each kernel. The two histograms must agree exactly.
"""

from __future__ import annotations

import argparse
import time

from vkq import _kernel_py, catalog
from vkq.bracket import diagram_network
from vkq.diagram import cable

try:
    from vkq import _kernel as compiled
except ImportError:  # pragma: no cover - depends on the build
    compiled = None


def _flat(net):
    slots = [e for sl in net.crossings for e in sl]
    return slots, [], net.n_edges


def cases(max_width: int):
    for name in ("trefoil", "virtual-trefoil", "hopf0", "virtual-hopf"):
        d = catalog.build(name)
        for w in range(1, max_width + 1):
            cd = cable(d, w)
            yield f"{name} x{w}", diagram_network(cd)


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--max-width", type=int, default=3)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled kernel not built; only the Python kernel is available")
    print(f"{'case':<22} {'crossings':>9} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, net in cases(args.max_width):
        slots, links, n = _flat(net)
        c = len(net.crossings)
        if c > 20:
            continue
        t_py = best_of(lambda: _kernel_py.state_histogram(slots, links, n), args.repeat)
        if compiled is None:
            print(f"{label:<22} {c:>9} {t_py:>10.4f} {'-':>11} {'-':>8}")
            continue
        h_py = _kernel_py.state_histogram(slots, links, n)
        h_c = list(compiled.state_histogram(slots, links, n))
        if h_py != h_c:
            raise SystemExit(f"kernels disagree on {label}")
        t_c = best_of(lambda: compiled.state_histogram(slots, links, n), args.repeat)
        print(f"{label:<22} {c:>9} {t_py:>10.4f} {t_c:>11.5f} {t_py / max(t_c, 1e-9):>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
