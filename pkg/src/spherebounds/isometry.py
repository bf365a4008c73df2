"""Periodic orthogonal maps built from rotation spectra.

A spectrum lists the dimension of the fixed subspace and one integer
multiplier ``k`` per invariant 2-plane; the block rotates its plane by
``2*pi*k/p``.  Conjugating by an orthogonal matrix scrambles the block frame
without changing any metric quantity.
"""

from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from spherebounds._random import as_rng, haar_orthogonal


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(math.isqrt(p)) + 1))


@dataclass(frozen=True)
class RotationSpectrum:
    n: int
    p: int
    fixed_dim: int
    multipliers: tuple
    seed: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "multipliers", tuple(int(k) for k in self.multipliers))
        if self.n < 1 or self.p < 2 or self.fixed_dim < 0:
            raise ValueError(f"invalid spectrum parameters n={self.n}, p={self.p}, fixed_dim={self.fixed_dim}")
        if self.fixed_dim + 2 * len(self.multipliers) != self.n + 1:
            raise ValueError(
                f"fixed_dim + 2*blocks must equal n+1 = {self.n + 1}, "
                f"got {self.fixed_dim} + 2*{len(self.multipliers)}"
            )
        if any(k % self.p == 0 for k in self.multipliers):
            raise ValueError("multipliers must be nonzero modulo p")
        if self.multipliers and math.gcd(self.p, *self.multipliers) != 1:
            raise ValueError(f"multipliers {self.multipliers} realize a period smaller than {self.p}")

    @property
    def dim(self) -> int:
        return self.n + 1

    @property
    def folded(self) -> tuple:
        """Multipliers folded to ``min(k, p-k)``; k and p-k give conjugate rotations."""
        return tuple(min(k % self.p, self.p - k % self.p) for k in self.multipliers)

    @property
    def is_identity(self) -> bool:
        return not self.multipliers

    def to_dict(self):
        return {
            "n": self.n,
            "p": self.p,
            "fixed_dim": self.fixed_dim,
            "multipliers": list(self.multipliers),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["n"]), int(d["p"]), int(d["fixed_dim"]), tuple(d["multipliers"]), d.get("seed"))


@dataclass(frozen=True, eq=False)
class PeriodicIsometry:
    matrix: np.ndarray
    spectrum: RotationSpectrum
    conjugator: Optional[np.ndarray] = field(default=None)

    @property
    def p(self) -> int:
        return self.spectrum.p

    @property
    def n(self) -> int:
        return self.spectrum.n

    def as_map(self):
        from spherebounds.maps import isometry_map

        return isometry_map(self)

    def to_dict(self):
        return {
            "spectrum": self.spectrum.to_dict(),
            "matrix": self.matrix.tolist(),
            "conjugator": None if self.conjugator is None else self.conjugator.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        conj = d.get("conjugator")
        return cls(
            np.array(d["matrix"], dtype=float),
            RotationSpectrum.from_dict(d["spectrum"]),
            None if conj is None else np.array(conj, dtype=float),
        )


def rotation_block(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def block_matrix(spectrum: RotationSpectrum) -> np.ndarray:
    M = np.eye(spectrum.dim)
    for b, k in enumerate(spectrum.multipliers):
        i = spectrum.fixed_dim + 2 * b
        M[i : i + 2, i : i + 2] = rotation_block(2.0 * math.pi * k / spectrum.p)
    return M


def build_block_isometry(spectrum: RotationSpectrum, conjugator=None) -> PeriodicIsometry:
    """Identity on the first ``fixed_dim`` coordinates, then one rotation block per multiplier.

    With ``conjugator`` C the matrix is ``C B C^T``.
    """
    B = block_matrix(spectrum)
    if conjugator is not None:
        C = np.asarray(conjugator, dtype=float)
        if C.shape != B.shape or np.linalg.norm(C.T @ C - np.eye(len(C))) > 1e-10:
            raise ValueError("conjugator must be an orthogonal matrix of matching size")
        B = C @ B @ C.T
        return PeriodicIsometry(B, spectrum, C)
    return PeriodicIsometry(B, spectrum)


def canonical_simplex_rotation(p: int):
    """Rotation of R^(p-1) by 2*pi*i/p in block i, and its base point.

    The orbit of the base point (the normalized vector (1,0,1,0,...)) is a
    regular simplex with p vertices centred at the origin.
    """
    if p < 3 or p % 2 == 0:
        raise ValueError(f"need an odd period >= 3, got {p}")
    m = (p - 1) // 2
    spectrum = RotationSpectrum(n=p - 2, p=p, fixed_dim=0, multipliers=tuple(range(1, m + 1)))
    base = np.zeros(p - 1)
    base[0::2] = 1.0
    return build_block_isometry(spectrum), base / np.linalg.norm(base)


def random_periodic_isometry(n: int, p: int, seed, unit_multipliers: bool = False) -> PeriodicIsometry:
    """Random block spectrum of period ``p`` on S^n, conjugated by a Haar-random rotation.

    ``unit_multipliers`` restricts every multiplier to 1 or p-1, the spectra
    whose shift is smallest.
    """
    dim = n + 1
    if dim < 2:
        raise ValueError("no periodic rotation of S^0 with a 2-plane block")
    if p < 2:
        raise ValueError("period must be >= 2")
    rng = as_rng(seed)
    blocks = int(rng.integers(1, dim // 2 + 1))
    for _ in range(1000):
        if unit_multipliers:
            ks = tuple(int(k) for k in rng.choice([1, p - 1], size=blocks))
        else:
            ks = tuple(int(k) for k in rng.integers(1, p, size=blocks))
        if math.gcd(p, *ks) == 1:
            break
    else:
        raise ValueError(f"could not draw multipliers of exact period {p}")
    spectrum = RotationSpectrum(n=n, p=p, fixed_dim=dim - 2 * blocks, multipliers=ks,
                            seed=seed if isinstance(seed, int) else None)
    return build_block_isometry(spectrum, haar_orthogonal(dim, rng))


def shift_exact(iso) -> float:
    """sup over the sphere of |Qx - x|: the largest singular value of Q - I."""
    M = iso.matrix if isinstance(iso, PeriodicIsometry) else np.asarray(iso, dtype=float)
    return float(np.linalg.norm(M - np.eye(len(M)), 2))


def shift_from_spectrum(spectrum: RotationSpectrum) -> float:
    if spectrum.is_identity:
        return 0.0
    return max(2.0 * math.sin(math.pi * k / spectrum.p) for k in spectrum.folded)


def _nearest_orthogonal(P):
    u, _, vt = np.linalg.svd(P)
    return u @ vt


def minimal_period(M, p_max: int = 1000) -> Optional[int]:
    """Smallest m >= 1 with |M^m - I| <= m * 1e-10, or None if none up to ``p_max``."""
    M = np.asarray(M, dtype=float)
    eye = np.eye(len(M))
    if np.linalg.norm(M.T @ M - eye) > 1e-10:
        raise ValueError("matrix is not orthogonal")
    P = eye
    for m in range(1, p_max + 1):
        P = P @ M
        if m % 32 == 0:
            P = _nearest_orthogonal(P)
        if np.linalg.norm(P - eye) <= m * 1e-10:
            return m
    return None
