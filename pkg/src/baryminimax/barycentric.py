"""Barycentric rational functions with built-in interpolation constraints.

A type (n, n) rational is stored through its n+1 support points. The first
``ell`` of them carry interpolation data (t_j, y_j) and share a single
coefficient beta_j between numerator and denominator, so that

    xi(x) = [sum_{j<=ell} beta_j y_j/(x-t_j) + sum_{j>ell} alpha_j/(x-t_j)]
            / [sum_j beta_j/(x-t_j)]

and xi(t_j) = y_j holds whenever beta_j != 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, PoleError

PROXIMITY = 1e-13
BETA_FLOOR = 1e-12


def _complex_vector(v, name) -> np.ndarray:
    a = np.atleast_1d(np.asarray(v, dtype=complex))
    if a.ndim != 1:
        raise ArgumentError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(a)):
        bad = int(np.nonzero(~np.isfinite(a))[0][0])
        raise ArgumentError(f"{name}[{bad}] is not finite", )
    return a


def find_duplicates(nodes) -> list[tuple[int, int]]:
    """Pairs (i, j), i < j, of exactly coincident nodes."""
    nodes = np.asarray(nodes, dtype=complex)
    if nodes.size < 2:
        return []
    order = np.lexsort((nodes.imag, nodes.real))
    s = nodes[order]
    same = np.nonzero(s[1:] == s[:-1])[0]
    return [tuple(sorted((int(order[i]), int(order[i + 1])))) for i in same]


def find_coincidences(a, b) -> list[tuple[int, int]]:
    """Index pairs (i, j) with ``a[i] == b[j]`` exactly."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.size == 0 or b.size == 0:
        return []
    lookup = {}
    for j, v in enumerate(b):
        lookup.setdefault(v, j)
    return [(i, lookup[v]) for i, v in enumerate(a) if v in lookup]


def _check_distinct(nodes, name):
    dup = find_duplicates(nodes)
    if dup:
        i, j = dup[0]
        err = ArgumentError(f"{name} {i} and {j} coincide ({nodes[i]!r})")
        err.indices = (i, j)
        raise err


@dataclass(frozen=True)
class SampleSet:
    """Sample nodes x_j and values f_j, both complex."""

    nodes: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = _complex_vector(self.nodes, "sample node")
        f = _complex_vector(self.values, "sample value")
        if x.shape != f.shape:
            raise ArgumentError(f"{x.size} nodes but {f.size} values")
        _check_distinct(x, "sample nodes")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "values", f)

    @property
    def m(self) -> int:
        return self.nodes.size


@dataclass(frozen=True)
class InterpolationData:
    """Interpolation constraints xi(t_j) = y_j; may be empty."""

    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0, complex))

    def __post_init__(self):
        t = _complex_vector(self.nodes, "interpolation node")
        y = _complex_vector(self.values, "interpolation value")
        if t.shape != y.shape:
            raise ArgumentError(f"{t.size} interpolation nodes but {y.size} values")
        _check_distinct(t, "interpolation nodes")
        object.__setattr__(self, "nodes", t)
        object.__setattr__(self, "values", y)

    @property
    def ell(self) -> int:
        return self.nodes.size

    def check_disjoint(self, samples: SampleSet):
        hits = find_coincidences(self.nodes, samples.nodes)
        if hits:
            i, j = hits[0]
            err = ArgumentError(
                f"interpolation node {i} coincides with sample node {j} ({self.nodes[i]!r})"
            )
            err.indices = (i, j)
            raise err


@dataclass(frozen=True)
class SupportPoints:
    """The n+1 support points: ell constrained nodes followed by free ones."""

    interp_nodes: np.ndarray
    free_nodes: np.ndarray

    def __post_init__(self):
        ti = np.atleast_1d(np.asarray(self.interp_nodes, dtype=complex))
        tf = np.atleast_1d(np.asarray(self.free_nodes, dtype=complex))
        allt = np.concatenate([ti, tf])
        if not np.all(np.isfinite(allt)):
            raise ArgumentError("support points must be finite")
        if allt.size == 0:
            raise ArgumentError("need at least one support point")
        _check_distinct(allt, "support points")
        object.__setattr__(self, "interp_nodes", ti)
        object.__setattr__(self, "free_nodes", tf)

    @property
    def nodes(self) -> np.ndarray:
        return np.concatenate([self.interp_nodes, self.free_nodes])

    @property
    def ell(self) -> int:
        return self.interp_nodes.size

    @property
    def n(self) -> int:
        return self.interp_nodes.size + self.free_nodes.size - 1

    def check_disjoint(self, samples: SampleSet):
        hits = find_coincidences(self.nodes, samples.nodes)
        if hits:
            i, j = hits[0]
            raise ArgumentError(f"support point {i} coincides with sample node {j}")


@dataclass(frozen=True)
class BarycentricRational:
    """Type (n, n) rational in constrained barycentric form.

    ``alpha`` holds the n+1-ell free numerator coefficients, ``beta`` all
    n+1 denominator coefficients. Coefficients are not normalized.
    """

    support: SupportPoints
    interp_values: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.interp_values, dtype=complex))
        a = np.atleast_1d(np.asarray(self.alpha, dtype=complex))
        b = np.atleast_1d(np.asarray(self.beta, dtype=complex))
        ell = self.support.ell
        k = self.support.free_nodes.size
        if y.size != ell:
            raise ArgumentError(f"{y.size} interpolation values for {ell} constrained nodes")
        if a.size != k:
            raise ArgumentError(f"alpha has length {a.size}, expected {k}")
        if b.size != ell + k:
            raise ArgumentError(f"beta has length {b.size}, expected {ell + k}")
        if not np.any(b != 0):
            raise ArgumentError("at least one beta must be nonzero")
        object.__setattr__(self, "interp_values", y)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def n(self) -> int:
        return self.support.n

    @property
    def ell(self) -> int:
        return self.support.ell

    @property
    def nodes(self) -> np.ndarray:
        return self.support.nodes

    @property
    def numerator_weights(self) -> np.ndarray:
        ell = self.ell
        return np.concatenate([self.beta[:ell] * self.interp_values, self.alpha])

    def beta_floor(self, rel=BETA_FLOOR) -> float:
        return rel * float(np.abs(self.beta).max())

    def interpolation_valid(self, rel=BETA_FLOOR) -> bool:
        """True when every constrained beta_j is numerically nonzero."""
        return bool(np.all(np.abs(self.beta[: self.ell]) > self.beta_floor(rel)))

    def __call__(self, x):
        return evaluate(self, x)

    def to_dict(self) -> dict:
        pairs = lambda v: [[float(z.real), float(z.imag)] for z in v]  # noqa: E731
        return {
            "support_interp": pairs(self.support.interp_nodes),
            "support_free": pairs(self.support.free_nodes),
            "interp_values": pairs(self.interp_values),
            "alpha": pairs(self.alpha),
            "beta": pairs(self.beta),
            "degree_n": self.n,
            "ell": self.ell,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BarycentricRational":
        try:
            unpack = lambda key: np.array(  # noqa: E731
                [complex(float(re), float(im)) for re, im in data[key]], dtype=complex
            )
            r = cls(
                SupportPoints(unpack("support_interp"), unpack("support_free")),
                unpack("interp_values"),
                unpack("alpha"),
                unpack("beta"),
            )
            n, ell = int(data["degree_n"]), int(data["ell"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ArgumentError(f"malformed rational: {exc}") from exc
        if (n, ell) != (r.n, r.ell):
            raise ArgumentError(
                f"declared (degree_n, ell) = ({n}, {ell}) but data gives ({r.n}, {r.ell})"
            )
        return r


def _two_sums(r: BarycentricRational, x: np.ndarray):
    C = 1.0 / (x[:, None] - r.nodes[None, :])
    return C @ r.numerator_weights, C @ r.beta


def evaluate(r: BarycentricRational, x):
    """Evaluate ``r`` at a scalar or array of points.

    Points within ``1e-13 * (1 + |t_j|)`` of a support point return the
    limit value there (y_j or alpha_j/beta_j). If beta_j is numerically zero
    the point is nudged off the node and may evaluate to a huge value.
    """
    xa = np.asarray(x, dtype=complex)
    flat = xa.ravel()
    t = r.nodes
    out = np.empty(flat.shape, dtype=complex)
    if flat.size:
        radius = PROXIMITY * (1.0 + np.abs(t))
        dist = np.abs(flat[:, None] - t[None, :])
        near = dist < radius[None, :]
        hit = near.any(axis=1)
        free = ~hit
        if free.any():
            with np.errstate(divide="ignore", invalid="ignore"):
                p, q = _two_sums(r, flat[free])
                out[free] = p / q
            zero = q == 0
            if zero.any():
                raise PoleError(complex(flat[free][zero][0]))
        floor = r.beta_floor()
        ell = r.ell
        for i in np.nonzero(hit)[0]:
            j = int(np.argmin(dist[i]))
            if abs(r.beta[j]) > floor:
                if j < ell:
                    out[i] = r.interp_values[j]
                else:
                    out[i] = r.alpha[j - ell] / r.beta[j]
            else:
                xs = np.array([t[j] + 2 * radius[j]])
                with np.errstate(divide="ignore", invalid="ignore"):
                    p, q = _two_sums(r, xs)
                    out[i] = (p / q)[0] if q[0] != 0 else complex(np.inf)
    if xa.ndim == 0:
        return complex(out[0])
    return out.reshape(xa.shape)


def evaluate_on_samples(r: BarycentricRational, samples: SampleSet) -> np.ndarray:
    """Evaluate at every sample node; a vanishing denominator names its index."""
    x = samples.nodes
    with np.errstate(divide="ignore", invalid="ignore"):
        p, q = _two_sums(r, x)
        vals = p / q
    zero = np.nonzero(q == 0)[0]
    if zero.size:
        i = int(zero[0])
        raise PoleError(complex(x[i]), i)
    return vals


def assemble_from_coefficients(support: SupportPoints, interp_values, c) -> BarycentricRational:
    """Build the rational from a reduced coefficient vector c = (c1, c2, c3).

    c1 (length ell) are the shared coefficients of the constrained nodes,
    c2 the free numerator coefficients, c3 the free denominator ones.
    """
    c = np.asarray(c, dtype=complex).ravel()
    ell = support.ell
    k = support.free_nodes.size
    if c.size != ell + 2 * k:
        raise ArgumentError(f"coefficient vector has length {c.size}, expected {ell + 2 * k}")
    beta = np.concatenate([c[:ell], c[ell + k :]])
    alpha = c[ell : ell + k]
    return BarycentricRational(support, interp_values, alpha, beta)
