"""Measure how the pipeline scales on stacked plane triangulations.

Usage: python3 benchmarks/scaling.py [max_exponent]

Prints per-size timings for generation, decomposition alone, and the
independent verification pass, plus the empirical growth rate between
consecutive sizes (1.0 = linear in n).
"""

import math
import sys
import time

from framedprod.assemble import decompose
from framedprod.generators import gen_plane_triangulation
from framedprod.verify import verify_certificate


def main():
    max_exp = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    sizes = []
    n = 1000
    while n < 10 ** max_exp:
        sizes.append(n)
        n = int(n * 3.2)
    sizes.append(10 ** max_exp)
    prev = None
    print(f"{'n':>8} {'gen s':>8} {'decomp s':>9} {'verify s':>9} "
          f"{'growth':>7}")
    for n in sizes:
        t0 = time.monotonic()
        E = gen_plane_triangulation(n, 42)
        t1 = time.monotonic()
        cert = decompose(E, 3, self_verify=False)
        t2 = time.monotonic()
        fails = verify_certificate(E, cert)
        t3 = time.monotonic()
        assert fails == []
        total = t3 - t1
        growth = ""
        if prev is not None:
            pn, pt = prev
            growth = f"{math.log(total / pt) / math.log(n / pn):5.2f}"
        prev = (n, total)
        print(f"{n:>8} {t1 - t0:>8.2f} {t2 - t1:>9.2f} {t3 - t2:>9.2f} "
              f"{growth:>7}")


if __name__ == "__main__":
    main()
