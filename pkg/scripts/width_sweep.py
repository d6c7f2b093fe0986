"""Sweep n and compare measured decoder widths with sqrt(nD), using the best B per n."""

import argparse
import math
from dataclasses import dataclass

from btncodec.approx import build_approx_decoder
from btncodec.bounds import lower_bound
from btncodec.core import metrics
from btncodec.perfect import build_perfect_decoder, optimal_B
from btncodec.verify import InstanceSpec, gen_random_set, measure_error, verify_perfect


@dataclass(frozen=True)
class SweepConfig:
    D: int = 16
    sizes: tuple = (64, 256, 1024, 4096)
    seed: int = 1


def sweep(cfg: SweepConfig):
    for n in cfg.sizes:
        X = gen_random_set(InstanceSpec(n, cfg.D, seed=cfg.seed))
        B = optimal_B(n, cfg.D) if n > cfg.D else 2
        perfect = build_perfect_decoder(X, B)
        approx = build_approx_decoder(X, max(B, 3))
        pm, am = metrics(perfect.decoder), metrics(approx.decoder)
        yield {
            "n": n,
            "B": B,
            "perfect_width": pm.width,
            "perfect_size": pm.size,
            "perfect_err": float(verify_perfect(perfect, X).average),
            "approx_width": am.width,
            "approx_err": float(measure_error(approx, X).average),
            "sqrt_nD": math.sqrt(n * cfg.D),
            "size_lower_bound": lower_bound(n, cfg.D, X.d),
        }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--D", type=int, default=SweepConfig.D)
    parser.add_argument("--sizes", type=int, nargs="+", default=list(SweepConfig.sizes))
    parser.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = parser.parse_args()
    cfg = SweepConfig(args.D, tuple(args.sizes), args.seed)
    rows = list(sweep(cfg))
    keys = list(rows[0])
    print("\t".join(keys))
    for row in rows:
        print("\t".join(f"{row[k]:.4g}" if isinstance(row[k], float) else str(row[k]) for k in keys))


if __name__ == "__main__":
    main()
