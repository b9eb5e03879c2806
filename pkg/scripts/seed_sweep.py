"""Counterexample growth across seeds.

For each seed prints the fitted exponent of value vs ln N, the affine fit
value ~ A ln N + B, and the inscribed-cube fraction c1/N.  A constant A near
4/pi with a large negative B inflates the local exponent ln N / (ln N + B/A).
"""

import argparse
import math

from chirplab.experiments import ExperimentConfig, fit_log_affine, run_counterexample_experiment
from chirplab.geometry import inscribed_cube_side, support_polytope
from chirplab.phase import sample_generic_alphas


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--seeds", type=int, default=8)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--N-list", default="100,200,300,500,1000")
    args = p.parse_args()
    Ns = tuple(float(v) for v in args.N_list.split(","))
    print("seed,exponent,r_squared,A,B,c1_over_N,local_exponent_prediction")
    for seed in range(args.seeds):
        cfg = ExperimentConfig(n=args.n, seed=seed, N_list=Ns)
        r = run_counterexample_experiment(cfg)
        A, B = fit_log_affine(r.series)
        c1 = inscribed_cube_side(support_polytope(0.0, sample_generic_alphas(2, args.n, seed), 1.0))
        mid = math.log(math.sqrt(Ns[0] * Ns[-1]))
        pred = mid / (mid + B / A)
        print(f"{seed},{r.fit.exponent:.4f},{r.fit.r_squared:.4f},{A:.4f},{B:.4f},{c1:.4f},{pred:.4f}")
    print(f"# 4/pi = {4 / math.pi:.4f}")


if __name__ == "__main__":
    main()
