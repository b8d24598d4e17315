"""Deterministic, splittable random-number streams.

Every stochastic component of the package draws from an :class:`RngStream`.
A stream is identified by ``(seed, path)`` where ``path`` is the tuple of
spawn indices below the root node ``(seed, (stream_id,))``.  The identifier
is hashed through :class:`numpy.random.SeedSequence` into a key for the
Philox 4x64 counter-based bit generator, so

* identical ``(seed, path)`` reproduce the identical bit stream on any
  platform and process, and
* streams with distinct paths are non-overlapping by construction
  (SeedSequence spawn keys index disjoint subtrees of the hash tree).

``split`` hands out children under fresh spawn indices.  The parent stays
usable afterward: its own draw stream is keyed by its path and is disjoint
from every child's by the same construction, so no advancing is needed.

Distribution sampling delegates to :class:`numpy.random.Generator`
(Poisson uses inversion for small means and PTRS rejection above; gamma
uses the Marsaglia-Tsang squeeze) except for the noncentral chi-square,
which is drawn explicitly as a Poisson mixture of central chi-squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_U64_MAX = 2**64 - 1


@dataclass
class RngStream:
    """Single-owner random stream; share only via :meth:`split`."""

    seed: int
    path: tuple[int, ...] = (0,)
    _gen: np.random.Generator = field(init=False, repr=False)
    _n_spawned: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.seed <= _U64_MAX:
            raise ValueError(f"seed must be a u64, got {self.seed}")
        if not all(0 <= p <= _U64_MAX for p in self.path):
            raise ValueError(f"path entries must be u64, got {self.path}")
        self.path = tuple(int(p) for p in self.path)
        ss = np.random.SeedSequence(entropy=int(self.seed), spawn_key=self.path)
        self._gen = np.random.Generator(np.random.Philox(ss))

    # -- stream management -------------------------------------------------

    def split(self, n: int) -> list["RngStream"]:
        """Return ``n`` independent child streams.

        Children are keyed by ``path + (k,)`` with ``k`` running over spawn
        indices never handed out before by this stream.  The parent remains
        usable; its draws never overlap any child's.
        """
        if n < 1:
            raise ValueError(f"split needs n >= 1, got {n}")
        base = self._n_spawned
        self._n_spawned += n
        return [RngStream(self.seed, self.path + (base + k,)) for k in range(n)]

    def child(self) -> "RngStream":
        return self.split(1)[0]

    def descriptor(self) -> dict:
        """JSON-ready identifier sufficient to recreate this stream."""
        return {"seed": self.seed, "path": list(self.path)}

    @classmethod
    def from_descriptor(cls, d: dict) -> "RngStream":
        return cls(int(d["seed"]), tuple(d["path"]))

    # -- distributions -----------------------------------------------------

    def uniform(self, low=0.0, high=1.0, size=None):
        if not high > low:
            raise ValueError(f"uniform needs high > low, got [{low}, {high})")
        return self._gen.uniform(low, high, size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        if not np.all(np.asarray(scale) > 0):
            raise ValueError(f"normal scale must be > 0, got {scale}")
        return self._gen.normal(loc, scale, size)

    def gamma(self, shape, scale=1.0, size=None):
        if not (np.all(np.asarray(shape) > 0) and np.all(np.asarray(scale) > 0)):
            raise ValueError(f"gamma needs shape, scale > 0, got {shape}, {scale}")
        return self._gen.gamma(shape, scale, size)

    def inverse_gamma(self, shape, scale=1.0, size=None):
        """Reciprocal-of-gamma draws; mean scale/(shape-1) for shape > 1."""
        if not (np.all(np.asarray(shape) > 0) and np.all(np.asarray(scale) > 0)):
            raise ValueError(
                f"inverse_gamma needs shape, scale > 0, got {shape}, {scale}"
            )
        return 1.0 / self._gen.gamma(shape, 1.0 / np.asarray(scale, float), size)

    def exponential(self, scale=1.0, size=None):
        if not np.all(np.asarray(scale) > 0):
            raise ValueError(f"exponential scale must be > 0, got {scale}")
        return self._gen.exponential(scale, size)

    def poisson(self, lam, size=None):
        if not np.all(np.asarray(lam) >= 0):
            raise ValueError(f"poisson mean must be >= 0, got {lam}")
        return self._gen.poisson(lam, size)

    def noncentral_chi2(self, df, nc, size=None):
        """Draw chi2(df + 2K) with K ~ Poisson(nc / 2)."""
        df = np.asarray(df, float)
        nc = np.asarray(nc, float)
        if not np.all(df > 0):
            raise ValueError(f"noncentral_chi2 needs df > 0, got {df}")
        if not np.all(nc >= 0):
            raise ValueError(f"noncentral_chi2 needs nc >= 0, got {nc}")
        k = self._gen.poisson(nc / 2.0, size)
        return self._gen.chisquare(df + 2.0 * k)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    def permutation(self, n: int):
        return self._gen.permutation(n)


def make_stream(seed: int, stream_id: int = 0) -> RngStream:
    """Root stream for ``(seed, stream_id)``; element 0, reproducible."""
    return RngStream(int(seed), (int(stream_id),))
