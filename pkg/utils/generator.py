import numpy as np


def generate_random_rays(count: int, k: int, seed: int | None = None) -> list[tuple]:
    """
    Generates directions uniformly distributed on the unit sphere of (alpha_1, ..., alpha_k) space.

    :param count: The number of rays.
    :type count: int
    :param k: The dimension of the coefficient space.
    :type k: int
    :param seed: Seed of the generator; equal seeds give equal rays.
    :type seed: int | None

    :return: The unit directions.
    :rtype: list[tuple]
    """
    if k == 0:
        return [()] * count
    rng = np.random.default_rng(seed)
    samples = rng.standard_normal((count, k))
    samples /= np.linalg.norm(samples, axis=1, keepdims=True)
    return [tuple(float(x) for x in row) for row in samples]
