"""Seeded random and structured test matrices.

Specs are strings such as ``"uniform-nonneg(5,7,0.3)"``, ``"star(10)"`` or
``"random-bipartite(4,6,0.5)"``.  For a fixed ``(spec, seed)`` the output is
identical on every run.
"""

from __future__ import annotations

import re

import numpy as np

from .errors import ConfigError
from .matrix import Matrix

_SPEC_RE = re.compile(r"^\s*([a-z-]+)\s*\(([^)]*)\)\s*$")

# name -> argument converters
_SIGNATURES = {
    "uniform-nonneg": (int, int, float),
    "signed": (int, int, float),
    "complex": (int, int, float),
    "star": (int,),
    "path": (int,),
    "random-bipartite": (int, int, float),
}


def parse_spec(spec):
    """Split ``"name(a,b,c)"`` into ``(name, args)`` with typed arguments."""
    match = _SPEC_RE.match(spec)
    if not match:
        raise ConfigError(f"cannot parse generator spec {spec!r}")
    name, argtext = match.groups()
    if name not in _SIGNATURES:
        raise ConfigError(f"unknown generator {name!r}; choose from {sorted(_SIGNATURES)}")
    raw = [t.strip() for t in argtext.split(",")] if argtext.strip() else []
    types = _SIGNATURES[name]
    if len(raw) != len(types):
        raise ConfigError(f"{name} takes {len(types)} argument(s), got {len(raw)}")
    try:
        args = tuple(t(x) for t, x in zip(types, raw))
    except ValueError:
        raise ConfigError(f"bad argument in generator spec {spec!r}") from None
    _validate(name, args)
    return name, args


def _validate(name, args):
    if name in ("star", "path"):
        if args[0] < 1:
            raise ConfigError(f"{name} needs n >= 1")
        return
    m, n, density = args
    if m < 1 or n < 1:
        raise ConfigError(f"{name} needs positive dimensions")
    if not 0.0 <= density <= 1.0:
        raise ConfigError(f"{name} density/probability must lie in [0, 1]")


def star(n):
    """Adjacency of the star K(1,n); vertex 0 is the centre."""
    a = np.zeros((n + 1, n + 1))
    a[0, 1:] = 1.0
    a[1:, 0] = 1.0
    return Matrix.from_dense(a)


def path(n):
    a = np.zeros((n, n))
    idx = np.arange(n - 1)
    a[idx, idx + 1] = 1.0
    a[idx + 1, idx] = 1.0
    return Matrix.from_dense(a)


def _mask(rng, m, n, density):
    return rng.random((m, n)) < density


def uniform_nonneg(m, n, density, rng):
    # 1 - U[0,1) lies in (0, 1], so masked-in entries are strictly positive
    values = 1.0 - rng.random((m, n))
    return Matrix.from_dense(np.where(_mask(rng, m, n, density), values, 0.0))


def signed(m, n, density, rng):
    values = rng.uniform(-1.0, 1.0, (m, n))
    return Matrix.from_dense(np.where(_mask(rng, m, n, density), values, 0.0))


def complex_matrix(m, n, density, rng):
    values = rng.uniform(-1.0, 1.0, (m, n)) + 1j * rng.uniform(-1.0, 1.0, (m, n))
    return Matrix.from_dense(np.where(_mask(rng, m, n, density), values, 0.0))


def random_bipartite(m, n, prob, rng):
    """Symmetric 0/1 adjacency of a random bipartite graph on ``m + n`` vertices."""
    bi = (rng.random((m, n)) < prob).astype(float)
    a = np.zeros((m + n, m + n))
    a[:m, m:] = bi
    a[m:, :m] = bi.T
    return Matrix.from_dense(a)


def generate(spec, seed):
    name, args = parse_spec(spec) if isinstance(spec, str) else spec
    rng = np.random.default_rng(seed)
    if name == "star":
        return star(*args)
    if name == "path":
        return path(*args)
    if name == "uniform-nonneg":
        return uniform_nonneg(*args, rng)
    if name == "signed":
        return signed(*args, rng)
    if name == "complex":
        return complex_matrix(*args, rng)
    return random_bipartite(*args, rng)
