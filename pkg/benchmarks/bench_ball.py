"""Compare the compiled and pure-numpy kernels.

    python benchmarks/bench_ball.py [--fixture fig1] [--radius 11] [--sweep-radius 10]
"""
import argparse
import timeit
from importlib.resources import files

from coxdense import parse_system, words


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", default="fig1")
    ap.add_argument("--radius", type=int, default=11)
    ap.add_argument("--sweep-radius", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    system = parse_system((files("coxdense") / "fixtures" / f"{args.fixture}.cox").read_text())
    kernels = ["python"] + (["cython"] if words._compiled is not None else [])
    if len(kernels) == 1:
        print("compiled kernel not built; timing the fallback only")

    rows = []
    for kernel in kernels:
        size = len(words.enumerate_ball(system, args.radius, kernel=kernel))
        t_ball = min(timeit.repeat(lambda: words.enumerate_ball(system, args.radius, kernel=kernel),
                                   number=1, repeat=args.repeat))
        counts, _ = words.sign_sweep(system, args.sweep_radius, kernel=kernel)
        t_sweep = min(timeit.repeat(lambda: words.sign_sweep(system, args.sweep_radius, kernel=kernel),
                                    number=1, repeat=args.repeat))
        rows.append((kernel, size, t_ball, sum(counts), t_sweep))

    print(f"{args.fixture}: ball radius {args.radius}, sweep radius {args.sweep_radius}")
    print(f"{'kernel':8} {'ball size':>10} {'ball s':>9} {'ns/elt':>8} {'sweep size':>11} {'sweep s':>9} {'ns/elt':>8}")
    for kernel, size, tb, ssize, ts in rows:
        print(f"{kernel:8} {size:10d} {tb:9.3f} {tb / size * 1e9:8.0f} {ssize:11d} {ts:9.3f} {ts / ssize * 1e9:8.0f}")
    if len(rows) == 2:
        print(f"speedup: ball x{rows[0][2] / rows[1][2]:.1f}, sweep x{rows[0][4] / rows[1][4]:.1f}")


if __name__ == "__main__":
    main()
