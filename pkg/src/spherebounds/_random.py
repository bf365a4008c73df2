import numpy as np


def as_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seeds(seed, count):
    """Independent integer seeds derived from ``seed``; prefix-stable in ``count``."""
    ss = np.random.SeedSequence(seed)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in ss.spawn(count)]


def haar_orthogonal(dim, rng):
    """Haar-distributed orthogonal matrix (QR of a Gaussian matrix, signs fixed by diag(R))."""
    rng = as_rng(rng)
    if dim == 1:
        return np.array([[1.0 if rng.random() < 0.5 else -1.0]])
    z = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * np.sign(np.diag(r))


def random_sphere_points(count, dim, rng):
    """``count`` uniform points on the unit sphere in R^dim."""
    rng = as_rng(rng)
    z = rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)
