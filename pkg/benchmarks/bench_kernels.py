"""Compare the numba and pure-numpy convolution backends.

The backend is fixed at import time, so each one runs in its own
subprocess with DIFFBRAUER_NO_NUMBA set accordingly.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from diffbrauer import _kernels
from diffbrauer.ff import get_field
from diffbrauer.series import LaurentSeries, DiffForm
from diffbrauer.cartier import cartier, cartier_inverse

repeat = int(sys.argv[1])
rng = np.random.default_rng(20240611)
out = {"backend": _kernels.backend()}

def best(fn):
    fn()  # warm-up (compilation for numba)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)

for n, k in [(64, 1), (64, 2), (256, 2), (1024, 1)]:
    a = rng.integers(0, 5, size=(n, k))
    b = rng.integers(0, 5, size=(n, k))
    out[f"conv2d n={n} k={k}"] = best(lambda: [_kernels.conv2d(a, b) for _ in range(20)]) / 20

F = get_field(5, 2)
forms = []
for _ in range(200):
    c = rng.integers(0, 5, size=(64, 2))
    forms.append(DiffForm(LaurentSeries(F, -3, c, 61)))

def round_trip():
    for w in forms:
        cartier(cartier_inverse(w))

out["cartier round trip x200 (q=25, prec 64)"] = best(round_trip)

def inverses():
    for w in forms[:50]:
        w.coeff.inverse(64)

out["series inverse x50 (q=25, prec 64)"] = best(inverses)
print(json.dumps(out))
"""


def run_backend(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env["DIFFBRAUER_NO_NUMBA"] = "1" if no_numba else "0"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    rows = [(k, fast[k], slow[k]) for k in fast if k != "backend"]
    if args.json:
        print(json.dumps({"numba": fast, "numpy": slow}, indent=2, sort_keys=True))
        return
    print(f"{'case':<44}{fast['backend']:>12}{slow['backend']:>12}{'ratio':>8}")
    for name, a, b in rows:
        print(f"{name:<44}{a * 1e3:>10.3f}ms{b * 1e3:>10.3f}ms{b / a:>8.2f}")


if __name__ == "__main__":
    main()
