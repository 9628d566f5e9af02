"""Compare the compiled and pure-Python search kernels on worst-case inputs.

Worst case for the separation search: every mask is rejected, so all 2**w
subsets are tried. Same for the 1-in-3 search with an unsatisfiable formula.

    python3 benchmarks/bench_kernels.py [--max-width 20] [--repeat 3]
"""
import argparse
import time

from labelcast import _kernels_py

try:
    from labelcast import _kernels as compiled
except ImportError:
    compiled = None


def unsplittable(width):
    # sons over consecutive parent pairs plus one odd triangle: never 2-colourable
    masks = [(1 << i) | (1 << (i + 1)) for i in range(width - 1)]
    masks.append(0b101)
    return masks


def unsat_clauses(k):
    # exactly one of x1..x3 true and exactly one false cannot both hold; the rest pads the clause list
    pos = [0b111, 0]
    neg = [0, 0b111]
    for i in range(3, k):
        pos.append((1 << i) | 1)
        neg.append(1 << (i - 1))
    return pos, neg


def timed(fn, *args, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-width", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled kernels not available; build with `pip install -e . --no-build-isolation`")

    print(f"{'kernel':<12}{'width':>6}{'python s':>12}{'cython s':>12}{'speedup':>10}")
    for width in range(8, args.max_width + 1, 2):
        cases = [
            ("separation", _kernels_py.first_separating_mask,
             compiled and compiled.first_separating_mask, (unsplittable(width), width)),
        ]
        pos, neg = unsat_clauses(width)
        cases.append(("one-in-three", _kernels_py.first_one_in_three,
                      compiled and compiled.first_one_in_three, (pos, neg, width)))
        for name, py, cy, fargs in cases:
            t_py, r_py = timed(py, *fargs, repeat=args.repeat)
            assert r_py == -1, (name, width)
            if cy:
                t_cy, r_cy = timed(cy, *fargs, repeat=args.repeat)
                assert r_py == r_cy, (name, width, r_py, r_cy)
                print(f"{name:<12}{width:>6}{t_py:>12.4f}{t_cy:>12.5f}{t_py / max(t_cy, 1e-9):>10.0f}x")
            else:
                print(f"{name:<12}{width:>6}{t_py:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
