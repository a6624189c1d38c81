"""Finite-dimensional traced *-algebras.

A :class:`TracedAlgebra` is a direct sum of full matrix blocks with a
faithful trace ``tau(x) = sum_i w_i * tr(x_i)`` (positive weights ``w_i``)
and an optional faithful state density ``rho`` (positive definite,
``tau(rho) = 1``).  Elements carry one complex matrix per block.  On top of
this the module provides spectral calculus, distribution functions
``tau(E^{|a|}(eps, oo))``, the modular flow of a state density with its KMS
boundary residual, and trace-preserving conditional expectations onto
pinching (block-diagonal) subalgebras.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "TracedAlgebra",
    "AlgebraElement",
    "SpectralData",
    "apply_function",
    "distribution",
    "singular_data",
    "modular_flow",
    "kms_residual",
    "conditional_expectation",
    "pinching_subalgebra",
    "restrict_to_pattern",
]

_HERM_TOL = 1e-10
_CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class TracedAlgebra:
    """Block sizes, trace weights, and an optional state density."""

    blocks: tuple
    weights: tuple = ()
    state_blocks: tuple = ()

    def __post_init__(self):
        blocks = tuple(int(n) for n in self.blocks)
        weights = tuple(float(w) for w in self.weights) if self.weights else (1.0,) * len(blocks)
        if len(weights) != len(blocks):
            raise DomainError("one trace weight per block required")
        if any(n < 1 for n in blocks):
            raise DomainError("block dimensions must be >= 1")
        if any(w <= 0 for w in weights):
            raise DomainError("trace weights must be positive")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "weights", weights)
        if self.state_blocks:
            mats = tuple(np.array(b, dtype=complex) for b in self.state_blocks)
            for n, m in zip(blocks, mats):
                if m.shape != (n, n):
                    raise DomainError("state density shape mismatch")
                if np.linalg.norm(m - m.conj().T) > _HERM_TOL * max(1.0, np.linalg.norm(m)):
                    raise DomainError("state density must be self-adjoint")
                if np.min(np.linalg.eigvalsh(m)) <= 0:
                    raise DomainError("state density must be positive definite")
            tr = sum(w * np.trace(m).real for w, m in zip(weights, mats))
            if abs(tr - 1.0) > 1e-12:
                raise DomainError(f"state density must have trace 1, got {tr}")
            for m in mats:
                m.setflags(write=False)
            object.__setattr__(self, "state_blocks", mats)

    @property
    def dim(self) -> int:
        return sum(n * n for n in self.blocks)

    def element(self, *mats) -> "AlgebraElement":
        return AlgebraElement(self, tuple(np.array(m, dtype=complex) for m in mats))

    def identity(self) -> "AlgebraElement":
        return self.element(*(np.eye(n) for n in self.blocks))

    def zero(self) -> "AlgebraElement":
        return self.element(*(np.zeros((n, n)) for n in self.blocks))

    def diagonal(self, *diags) -> "AlgebraElement":
        return self.element(*(np.diag(np.asarray(d, dtype=complex)) for d in diags))

    @property
    def state(self) -> "AlgebraElement":
        if not self.state_blocks:
            raise DomainError("algebra carries no state density")
        return AlgebraElement(self, self.state_blocks)

    def with_state(self, *mats) -> "TracedAlgebra":
        return TracedAlgebra(self.blocks, self.weights, tuple(np.asarray(m) for m in mats))

    def trace(self, x: "AlgebraElement") -> complex:
        self._check(x)
        return sum(w * np.trace(b) for w, b in zip(self.weights, x.mats))

    def omega(self, x: "AlgebraElement") -> complex:
        """State value ``tau(rho x)`` of the attached density."""
        return self.trace(self.state @ x)

    def _check(self, x):
        if x.algebra.blocks != self.blocks:
            raise DomainError("element belongs to a different algebra")


class AlgebraElement:
    """One complex matrix per block of the parent algebra."""

    __slots__ = ("algebra", "mats")

    def __init__(self, algebra: TracedAlgebra, mats):
        mats = tuple(np.asarray(m, dtype=complex) for m in mats)
        if len(mats) != len(algebra.blocks):
            raise DomainError("wrong number of blocks")
        for n, m in zip(algebra.blocks, mats):
            if m.shape != (n, n):
                raise DomainError(f"block shape {m.shape} does not match M_{n}")
        self.algebra = algebra
        self.mats = mats

    def __add__(self, other):
        self.algebra._check(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.mats, other.mats)))

    def __sub__(self, other):
        self.algebra._check(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.mats, other.mats)))

    def __mul__(self, scalar):
        return AlgebraElement(self.algebra, tuple(scalar * a for a in self.mats))

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def __matmul__(self, other):
        self.algebra._check(other)
        return AlgebraElement(self.algebra, tuple(a @ b for a, b in zip(self.mats, other.mats)))

    def star(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(a.conj().T for a in self.mats))

    @property
    def H(self) -> "AlgebraElement":
        return self.star()

    def fro_norm(self) -> float:
        return float(np.sqrt(sum(np.linalg.norm(a) ** 2 for a in self.mats)))

    def op_norm(self) -> float:
        return max(
            (float(np.linalg.norm(a, 2)) if a.size else 0.0) for a in self.mats
        )

    def is_selfadjoint(self, tol=_HERM_TOL) -> bool:
        scale = max(self.op_norm(), 1e-300)
        return all(np.linalg.norm(a - a.conj().T, 2) <= tol * scale for a in self.mats)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        payload = {
            "blocks": [
                [[[z.real, z.imag] for z in row] for row in m] for m in self.mats
            ]
        }
        return json.dumps(payload)

    @staticmethod
    def from_json(algebra: TracedAlgebra, text: str) -> "AlgebraElement":
        payload = json.loads(text)
        mats = [
            np.array([[complex(re, im) for re, im in row] for row in m])
            for m in payload["blocks"]
        ]
        return AlgebraElement(algebra, mats)

    @staticmethod
    def from_csv(algebra: TracedAlgebra, path) -> "AlgebraElement":
        """Read blocks from CSV: rows of interleaved re, im pairs, blocks
        separated by blank lines."""
        mats, current = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or all(not c.strip() for c in row):
                    if current:
                        mats.append(current)
                        current = []
                    continue
                vals = [float(c) for c in row]
                current.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
        if current:
            mats.append(current)
        return AlgebraElement(algebra, [np.array(m) for m in mats])

    def __repr__(self):
        return f"AlgebraElement(blocks={self.algebra.blocks})"


@dataclass(frozen=True)
class SpectralData:
    """Eigen/singular data with the spectral weights of the parent trace.

    ``values[i]`` carries weight ``weights[i]``; for self-adjoint input the
    values are eigenvalues, otherwise singular values.
    """

    values: np.ndarray
    weights: np.ndarray
    reconstruction_error: float


def _eigh_blocks(a: AlgebraElement):
    for w, m in zip(a.algebra.weights, a.mats):
        vals, vecs = np.linalg.eigh(m)
        yield w, m, vals, vecs


def apply_function(a: AlgebraElement, f) -> AlgebraElement:
    """Spectral calculus ``f(a)`` for self-adjoint ``a``.

    Raises :class:`DomainError` when ``a`` is not self-adjoint or when ``f``
    is undefined (non-finite) at an eigenvalue.
    """
    if not a.is_selfadjoint():
        raise DomainError("apply_function requires a self-adjoint element")
    out = []
    for _, _, vals, vecs in _eigh_blocks(a):
        with np.errstate(divide="ignore", invalid="ignore"):
            fvals = np.asarray(f(vals), dtype=complex)
        if fvals.shape != vals.shape:
            fvals = np.array([f(v) for v in vals], dtype=complex)
        bad = ~np.isfinite(fvals)
        if np.any(bad):
            raise DomainError(f"function undefined at eigenvalue {vals[bad][0]!r}")
        out.append((vecs * fvals) @ vecs.conj().T)
    return AlgebraElement(a.algebra, out)


def singular_data(a: AlgebraElement) -> SpectralData:
    """Weighted singular values of ``a``, clustered for clean steps."""
    vals, weights = [], []
    err = 0.0
    for w, m in zip(a.algebra.weights, a.mats):
        u, s, vh = np.linalg.svd(m)
        err = max(err, float(np.linalg.norm((u * s) @ vh - m)))
        vals.extend(s.tolist())
        weights.extend([w] * len(s))
    vals = np.asarray(vals)
    weights = np.asarray(weights)
    order = np.argsort(vals)[::-1]
    vals, weights = vals[order], weights[order]
    # merge near-degenerate singular values so the distribution is a clean
    # step function under floating-point noise
    if vals.size:
        tol = _CLUSTER_TOL * max(vals[0], 1e-300)
        rep = vals.copy()
        i = 0
        while i < len(vals):
            j = i
            while j + 1 < len(vals) and rep[i] - vals[j + 1] <= tol:
                j += 1
            rep[i : j + 1] = np.mean(vals[i : j + 1])
            i = j + 1
        vals = rep
    return SpectralData(vals, weights, err)


def distribution(a: AlgebraElement, eps: float) -> float:
    """Distribution function ``tau(E^{|a|}(eps, oo))`` at ``eps > 0``."""
    if eps <= 0:
        raise DomainError("distribution needs eps > 0")
    data = singular_data(a)
    return float(np.sum(data.weights[data.values > eps]))


def modular_flow(rho: AlgebraElement, t: float, a: AlgebraElement) -> AlgebraElement:
    """Finite-dimensional modular flow ``sigma_t(a) = rho^{it} a rho^{-it}``."""
    rho.algebra._check(a)
    if not rho.is_selfadjoint():
        raise DomainError("state density must be self-adjoint")
    out = []
    for (_, _, vals, vecs), m in zip(_eigh_blocks(rho), a.mats):
        if np.min(vals) <= 0:
            raise DomainError("state density must be positive definite (singular rho)")
        phases = np.exp(1j * t * np.log(vals))
        a_tilde = vecs.conj().T @ m @ vecs
        out.append(vecs @ (a_tilde * np.outer(phases, phases.conj())) @ vecs.conj().T)
    return AlgebraElement(a.algebra, out)


def modular_generator(rho: AlgebraElement) -> AlgebraElement:
    """The flow generator ``K = -log rho`` (no 2 pi normalization)."""
    return apply_function(rho, lambda v: -np.log(v))


def kms_residual(rho: AlgebraElement, a: AlgebraElement, b: AlgebraElement) -> float:
    """Residual of the boundary identity at imaginary time.

    Returns ``|tau(rho a b) - tau(rho b rho a rho^{-1})|``; the cyclic trace
    makes it vanish for every positive definite density.
    """
    alg = rho.algebra
    alg._check(a)
    alg._check(b)
    for m in rho.mats:
        if np.min(np.linalg.eigvalsh(m)) <= 0:
            raise DomainError("state density must be positive definite (singular rho)")
    rho_inv = apply_function(rho, lambda v: 1.0 / v)
    lhs = alg.trace(rho @ a @ b)
    rhs = alg.trace(rho @ b @ rho @ a @ rho_inv)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# Pinching conditional expectations
# ---------------------------------------------------------------------------

def _validate_pattern(algebra: TracedAlgebra, pattern):
    if len(pattern) != len(algebra.blocks):
        raise DomainError("pattern needs one partition per block")
    norm = []
    for n, groups in zip(algebra.blocks, pattern):
        seen = []
        gs = []
        for g in groups:
            g = tuple(int(i) for i in g)
            if any(i < 0 or i >= n for i in g):
                raise DomainError("pattern index out of range")
            seen.extend(g)
            gs.append(g)
        if sorted(seen) != list(range(n)):
            raise DomainError("pattern projections must be orthogonal and sum to the identity")
        norm.append(tuple(gs))
    return tuple(norm)


def conditional_expectation(x: AlgebraElement, pattern) -> AlgebraElement:
    """Trace-preserving pinching ``E(x) = sum_i p_i x p_i``.

    ``pattern`` lists, per block, the index groups of mutually orthogonal
    diagonal projections summing to the identity.
    """
    pattern = _validate_pattern(x.algebra, pattern)
    out = []
    for m, groups in zip(x.mats, pattern):
        acc = np.zeros_like(m)
        for g in groups:
            idx = np.asarray(g)
            acc[np.ix_(idx, idx)] = m[np.ix_(idx, idx)]
        out.append(acc)
    return AlgebraElement(x.algebra, out)


def pinching_subalgebra(algebra: TracedAlgebra, pattern) -> TracedAlgebra:
    """The block-diagonal subalgebra cut out by a pinching pattern.

    The restricted trace uses the ambient block weights, so it is the
    restriction of the ambient trace.
    """
    pattern = _validate_pattern(algebra, pattern)
    blocks, weights = [], []
    for w, groups in zip(algebra.weights, pattern):
        for g in groups:
            blocks.append(len(g))
            weights.append(w)
    return TracedAlgebra(tuple(blocks), tuple(weights))


def restrict_to_pattern(x: AlgebraElement, pattern) -> AlgebraElement:
    """View a pinched element as an element of the pinching subalgebra."""
    pattern = _validate_pattern(x.algebra, pattern)
    sub = pinching_subalgebra(x.algebra, pattern)
    mats = []
    for m, groups in zip(x.mats, pattern):
        for g in groups:
            idx = np.asarray(g)
            mats.append(m[np.ix_(idx, idx)])
    return AlgebraElement(sub, mats)
