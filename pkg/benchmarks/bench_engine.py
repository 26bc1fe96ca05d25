"""Jump throughput of the compiled engine against the pure-Python fallback.

    python3 benchmarks/bench_engine.py [--jumps N] [--n 100 200] [--repeat 3]

Both backends run the same seeded trajectory, so the final simulated time
is printed as a check that they did identical work.
"""
import argparse
import time

from clustnet.triadic import Chain, TriadicParams

CASES = {
    "independent": TriadicParams("independent", lambda0=1.0, mu0=99.0),
    "simplified": TriadicParams("simplified", alpha=1.0, beta=1.0, lam=50.0, mu=10.0,
                                lambda0=1.0, mu0=100.0),
    "general": TriadicParams("general", alpha=2.75, beta=2.5, lam=400.0, mu=300.0,
                             lambda0=1.0, mu0=200.0),
    "corrected": TriadicParams("corrected", lam=500.0, lambda0=1.0, mu0=199.0),
}


def time_backend(name, n, params, jumps, repeat):
    best, sim_time = float("inf"), None
    for _ in range(repeat):
        chain = Chain(n, params, seed=1, backend_name=name)
        t0 = time.perf_counter()
        chain.advance(jumps)
        best = min(best, time.perf_counter() - t0)
        sim_time = chain.sim_time
    return best, sim_time


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jumps", type=int, default=20_000)
    ap.add_argument("--n", type=int, nargs="+", default=[100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    try:
        from clustnet import _core  # noqa: F401
    except ImportError:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")

    print(f"{'model':<12}{'n':>5}{'python us/jump':>16}{'cython us/jump':>16}{'speedup':>9}  same")
    for n in args.n:
        for label, params in CASES.items():
            tp, sp = time_backend("python", n, params, args.jumps, args.repeat)
            tc, sc = time_backend("cython", n, params, args.jumps, args.repeat)
            print(f"{label:<12}{n:>5}{1e6 * tp / args.jumps:>16.2f}{1e6 * tc / args.jumps:>16.2f}"
                  f"{tp / tc:>9.1f}  {sp == sc}")


if __name__ == "__main__":
    main()
