"""Time the positivity see-saw on the compiled and pure-Python kernels.

Run with ``python benchmarks/bench_seesaw.py``. For each case the full
``check_pp`` search (32 restarts, up to 200 iterations each) is timed on every
available backend and the best of ``--repeat`` runs is reported.
"""

import argparse
import timeit

import numpy as np

from choiscope import channels, kernels
from choiscope.channels import Channel, check_pp
from choiscope.sampling import ginibre


def cases():
    yield "partial transpose 2x2", channels.partial_transpose_channel(2, 2)
    yield "transpose d=4", channels.transpose_channel(4)
    for d in (3, 6, 8):
        g = ginibre(d * d, d * d, seed=d)
        yield f"random hermitian Choi {d}->{d}", Channel(g + g.conj().T, d, d)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--restarts", type=int, default=32)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args(argv)

    names = sorted(kernels.BACKENDS)
    if "compiled" not in names:
        print("compiled kernel not built; timing the pure-Python kernel only")
    header = f"{'case':<28}" + "".join(f"{n + ' [ms]':>16}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, c in cases():
        best, values = {}, {}
        for name in names:
            def run(name=name):
                return check_pp(c, restarts=args.restarts, backend=name, workers=args.workers)

            values[name] = run().best_value
            best[name] = min(timeit.repeat(run, number=1, repeat=args.repeat)) * 1e3
        line = f"{label:<28}" + "".join(f"{best[n]:>16.2f}" for n in names)
        if len(names) == 2:
            line += f"{best['python'] / best['compiled']:>9.1f}x"
            # both kernels follow the same iteration from the same seeds
            assert np.isclose(values["python"], values["compiled"], atol=1e-8), values
        print(line)


if __name__ == "__main__":
    main()
