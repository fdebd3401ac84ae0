"""Trading edges for convergence speed on a regular 10-gon.

alpha_max = 1 / max(psi) is the largest weight that keeps the cost's
minimizer at the origin; at or below it the L1 term wins and the design is
sparse.  Pushing alpha well past it buys a larger smallest nonzero
eigenvalue (faster consensus) with more edges, up to the complete graph
with every nonzero eigenvalue equal to one.
"""

from stressdesign import build_problem, regular_polygon, sweep

problem = build_problem(regular_polygon(10), beta=1.0, gamma=0.1)
print(f"alpha_max for the 10-gon: {problem.alpha:.4f}")

print(f"{'alpha':>6} {'edges':>5} {'lambda_4':>9} {'kappa':>7} {'iters':>6}")
for d in sweep(problem, [problem.alpha, 0.5, 1.0, 1.5, 3.0, 5.0]):
    print(
        f"{d.alpha:6.3f} {d.edges.count:5d} {d.lambda_min_nonzero:9.4f} "
        f"{d.certificate.condition_number:7.3f} {d.report.iterations:6d}"
    )
