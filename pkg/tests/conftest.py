"""Shared fixtures: seeded random instances of discrete counting problems."""

import numpy as np

from entropoly import DomainKind, PolytopeSpec, exact_count, solve_max_entropy
from entropoly.errors import EntropolyError


def random_discrete_instance(rng, binary, max_points=20000, n_range=(4, 11),
                             d_range=(1, 4)):
    """A feasible discrete spec with a converged solve and modest point count.

    The right-hand side is the image of a random point, so the system is
    always feasible; instances whose solve fails, sits on the domain
    boundary, or has too many lattice points are resampled.
    """
    while True:
        n = int(rng.integers(*n_range))
        d = int(rng.integers(*d_range))
        A = rng.integers(0, 3, (d, n))
        if (np.abs(A).sum(axis=0) == 0).any() or np.linalg.matrix_rank(A) < d:
            continue
        x = rng.integers(0, 2, n) if binary else rng.integers(1, 4, n)
        b = A @ x
        spec = PolytopeSpec(A.astype(float), b.astype(float),
                            DomainKind.BINARY if binary else DomainKind.INTEGER)
        if exact_count(spec) > max_points:
            continue
        try:
            sol = solve_max_entropy(spec)
        except EntropolyError:
            continue
        if binary and (sol.z.min() < 1e-6 or sol.z.max() > 1.0 - 1e-6):
            continue
        return spec, sol
