"""Compare the Feynman-Kac and direct-utility value estimates at a few states.

    python3 scripts/cross_check_value.py [--paths 5000] [--steps 500]
"""

import argparse
import time

from reinsim.config import load_config
from reinsim.valuation import value_direct, value_feynman_kac


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--paths", type=int, default=5000)
    parser.add_argument("--steps", type=int, default=500)
    args = parser.parse_args()
    cfg = load_config(None, [f"M={args.paths}", f"N={args.steps}"])
    print("principle  x     y     feynman_kac            direct                 overlap")
    for name, principle in cfg.principles().items():
        ctx = cfg.context(principle)
        for x, y in ((1.0, 1.0), (0.0, 0.0), (2.0, -1.0)):
            start = time.perf_counter()
            fk = value_feynman_kac(ctx, cfg.factor(), 0.0, x, y, cfg.M, cfg.grid(), cfg.seed)
            dv = value_direct(ctx, cfg.factor(), 0.0, x, y, None, cfg.M, cfg.grid(), cfg.seed)
            print(
                f"{name:<10} {x:<5g} {y:<5g} {fk.mean:.6f} +- {fk.std_error:.1e}   "
                f"{dv.mean:.6f} +- {dv.std_error:.1e}   {fk.overlaps(dv)}  ({time.perf_counter() - start:.1f}s)"
            )


if __name__ == "__main__":
    main()
