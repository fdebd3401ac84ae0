"""Four agents on a square: the smallest case with a nontrivial stress.

With N = D + 2 every equilibrium stress is a multiple of one pattern:
+1 on the four sides, -1 on the two diagonals.  The design program then
reduces to choosing the scale c, and the optimum sits at c = gamma / 4
while the cost still rewards sparsity (alpha < 1.5), or at c = beta / 4
once the speed term dominates.
"""

import numpy as np

from stressdesign import Configuration, assemble_stress, build_problem, solve_p1, verify_urf

square = Configuration.from_points([[1, 1], [-1, 1], [-1, -1], [1, -1]])

for alpha in (0.5, 2.0):
    problem = build_problem(square, alpha=alpha, beta=1.0, gamma=0.1)
    weights, report = solve_p1(problem)
    omega = assemble_stress(problem.ordering, weights)
    print(f"alpha = {alpha}")
    for (i, j), w in zip(problem.ordering.edges, weights):
        print(f"  edge ({i}, {j}): {w:+.6f}")
    print("  spectrum:", np.round(np.linalg.eigvalsh(omega), 6))
    print(f"  {report.status.value} after {report.iterations} iterations, objective {report.objective:.6f}")
    print("  certificate passes:", verify_urf(omega, square).passed)
