"""Monte Carlo estimate of the average error of the approximate decoder on uniform sets.

Prints mean, standard error and the value D*ceil(n/B)/(n*2^B) that the
mean should approach for the uncorrected variant.
"""

import argparse
import time
from dataclasses import dataclass

from btncodec.verify import monte_carlo_error


@dataclass(frozen=True)
class MCConfig:
    n: int = 3072
    D: int = 24
    B: int = 3
    trials: int = 100
    seed: int = 5
    corrected: bool = False


def run(cfg: MCConfig) -> dict:
    start = time.perf_counter()
    mean, se, _ = monte_carlo_error(cfg.n, cfg.D, cfg.B, cfg.trials, cfg.seed, cfg.corrected)
    nb = -(-cfg.n // cfg.B)
    return {
        "mean": mean,
        "stderr": se,
        "expected_uncorrected": cfg.D * nb / (cfg.n * 2**cfg.B),
        "seconds": time.perf_counter() - start,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = MCConfig()
    for field in ("n", "D", "B", "trials", "seed"):
        parser.add_argument(f"--{field}", type=int, default=getattr(defaults, field))
    parser.add_argument("--corrected", action="store_true")
    cfg = MCConfig(**vars(parser.parse_args()))
    for key, value in run(cfg).items():
        print(f"{key}={value:.6g}")


if __name__ == "__main__":
    main()
