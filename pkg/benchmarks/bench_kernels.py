"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from lamebic._kernels import _fallback
from lamebic.lame import LameConfig, lame_potential
from lamebic.spectral import RK4_STEPS, default_energy_window

try:
    from lamebic._kernels import _native
except ImportError:
    _native = None


def cases():
    rng = np.random.default_rng(0)
    x = rng.uniform(-40, 40, 8001)
    m = np.full_like(x, 0.5)
    cfg = LameConfig(2, 0.5)
    pot = lambda t: lame_potential(cfg, t)  # noqa: E731
    h = cfg.period / RK4_STEPS
    t = np.arange(2 * RK4_STEPS + 1) * (0.5 * h)
    v = pot(t)
    E = default_energy_window(pot, cfg.period)
    return {
        "sncndn (8001 points)": lambda impl: impl.sncndn(x, m),
        f"monodromy_trace ({E.size} energies)": lambda impl: impl.monodromy_trace(v[0::2], v[1::2], h, E),
        "monodromy_trace (5 energies)": lambda impl: impl.monodromy_trace(v[0::2], v[1::2], h, E[:5]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = {"python": _fallback}
    if _native is not None:
        impls["native"] = _native
    else:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'kernel':<34}" + "".join(f"{name:>12}" for name in impls) + ("     speedup" if len(impls) > 1 else ""))
    for label, fn in cases().items():
        times = {}
        for name, impl in impls.items():
            times[name] = min(timeit.repeat(lambda: fn(impl), number=1, repeat=args.repeat))
        row = f"{label:<34}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in impls)
        if "native" in times:
            row += f"{times['python'] / times['native']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
