"""Compare the compiled and pure-Python kernel backends.

Times each hot primitive and a full game loop on both backends, and
checks along the way that they produce identical bits from identical
streams.  Run as a script:

    python benchmarks/bench_kernels.py [--trials N]
"""

from __future__ import annotations

import argparse
import timeit

from qmonty import lab
from qmonty.kernels import _pure
from qmonty.streams import make_rng

try:
    from qmonty.kernels import _native
except ImportError:
    _native = None


def time_call(fn, number: int) -> float:
    return timeit.timeit(fn, number=number) / number


def bench_kernels(number: int) -> list[tuple[str, float, float]]:
    e1 = (1.0 + 0j, 0j, 0j)
    rows = []
    backends = [("pure", _pure)] + ([("native", _native)] if _native else [])
    cases = {
        "haar_unit": lambda mod, rng: (lambda: mod.haar_unit(rng)),
        "unit_in_complement": lambda mod, rng: (
            lambda: mod.unit_in_complement(e1, rng)),
        "lueders": lambda mod, rng: (
            lambda: mod.lueders(mod.haar_unit(rng), e1, rng)),
        "cross_conj": lambda mod, rng: (
            lambda: mod.cross_conj(mod.haar_unit(rng), e1)),
        "born": lambda mod, rng: (
            lambda: mod.born(mod.haar_unit(rng), e1)),
    }
    for name, make in cases.items():
        per = {}
        for label, mod in backends:
            rng = make_rng(17)
            per[label] = time_call(make(mod, rng), number)
        rows.append((name, per["pure"], per.get("native", float("nan"))))
    return rows


def bench_games(trials: int) -> tuple[float, float, bool]:
    import os
    import subprocess
    import sys

    def run(env_flag: str) -> tuple[float, float]:
        env = dict(os.environ)
        if env_flag:
            env["QMONTY_PURE_PYTHON"] = env_flag
        else:
            env.pop("QMONTY_PURE_PYTHON", None)
        code = (
            "import time; from qmonty import lab\n"
            "cfg = lab.ExperimentConfig(host={'kind': 'haar'}, "
            "player={'kind': 'switch'}, trials=%d, seed=123)\n"
            "t0 = time.perf_counter(); st = lab.run_trials(cfg)\n"
            "print(time.perf_counter() - t0, st.estimate)" % trials
        )
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        dt, est = out.stdout.split()
        return float(dt), float(est)

    pure_dt, pure_est = run("1")
    if _native is None:
        return pure_dt, float("nan"), True
    native_dt, native_est = run("")
    return pure_dt, native_dt, pure_est == native_est


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--number", type=int, default=100_000,
                        help="timing repetitions per kernel")
    parser.add_argument("--trials", type=int, default=50_000,
                        help="games for the end-to-end comparison")
    args = parser.parse_args()

    if _native is None:
        print("native backend unavailable; timing pure only\n")

    print("%-22s %12s %12s %8s" % ("kernel", "pure (ns)", "native (ns)",
                                   "speedup"))
    for name, pure_t, native_t in bench_kernels(args.number):
        speed = pure_t / native_t if native_t == native_t else float("nan")
        print("%-22s %12.0f %12.0f %7.1fx"
              % (name, pure_t * 1e9, native_t * 1e9, speed))

    pure_dt, native_dt, same = bench_games(args.trials)
    print("\nfull games (%d trials, haar host + switch):" % args.trials)
    print("  pure:   %.2f s  (%.1f us/game)"
          % (pure_dt, pure_dt / args.trials * 1e6))
    if native_dt == native_dt:
        print("  native: %.2f s  (%.1f us/game, %.1fx)"
              % (native_dt, native_dt / args.trials * 1e6,
                 pure_dt / native_dt))
        print("  estimates identical: %s" % same)
        if not same:
            print("  WARNING: backends disagreed; investigate before "
                  "trusting either")
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
