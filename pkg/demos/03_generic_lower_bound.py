"""Six generic agents in the plane.

A universally rigid framework on N generic points in R^2 needs at least
2N - 2 = 10 edges.  Starting at alpha_max and nudging alpha slightly past
it (tune_alpha) reaches that bound on some random configurations.
"""

from stressdesign import build_problem, random_generic, tune_alpha

for seed in range(8):
    problem = build_problem(random_generic(6, 2, seed))
    best = tune_alpha(problem, generic=True)
    print(
        f"seed {seed}: alpha_max={problem.alpha:.3f}  chosen alpha={best.alpha:.3f}  "
        f"edges={best.edges.count}  lambda_4={best.lambda_min_nonzero:.3f}  "
        f"certified={best.certificate.passed}"
    )
