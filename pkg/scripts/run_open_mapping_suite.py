"""Check the openness identity r * K = 1 on a batch of random instances.

Generates polyhedral cone maps, splits them by surjectivity, and reports
how tightly the interior radius inverts the openness constant on the
surjective half.  Non-surjective instances must show an infinite constant
and a zero radius.
"""

import argparse
import math
import time

import numpy as np

from conekit.instances import parse_instance, random_polyhedral_instance


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50, help="instances to generate")
    ap.add_argument("--seed", type=int, default=0, help="first seed in the batch")
    args = ap.parse_args()

    t0 = time.perf_counter()
    devs = []
    onto = flat = inconsistent = 0
    for seed in range(args.seed, args.seed + args.count):
        inst = parse_instance(random_polyhedral_instance(seed))
        cfg = inst.sampler
        rep = inst.map.is_surjective(config=cfg)
        K = inst.map.openness_constant(cfg)
        r = inst.map.interior_radius(cfg)
        if rep.surjective != math.isfinite(K) or rep.surjective != (r > 0.0):
            inconsistent += 1
            print(f"seed {seed}: surjective={rep.surjective} K={K} r={r}")
            continue
        if rep.surjective:
            onto += 1
            devs.append(abs(r * K - 1.0))
        else:
            flat += 1
    dt = time.perf_counter() - t0

    print(f"{args.count} instances in {dt:.1f}s: "
          f"{onto} surjective, {flat} not, {inconsistent} inconsistent")
    if devs:
        devs = np.array(devs)
        print(f"|rK - 1|: median {np.median(devs):.2e}  max {devs.max():.2e}")
    return 1 if inconsistent else 0


if __name__ == "__main__":
    raise SystemExit(main())
