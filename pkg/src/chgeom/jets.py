"""Bi-graded truncated Taylor arithmetic in polarized coordinates.

A real-analytic function of ``z`` is evaluated with ``z`` and ``conj(z)``
replaced by independent formal variables (the holomorphic and the
antiholomorphic *sheet*).  Coefficients are kept for every monomial whose
holomorphic degree is at most ``max_holo_order`` and whose antiholomorphic
degree is at most ``max_anti_order``; products are truncated sheet by sheet.
The coefficient of ``x^I y^J`` times ``I! J!`` is then the mixed Wirtinger
partial ``d^{|I|+|J|} f / dz_I dzbar_J`` at the base point, exact up to
roundoff.

Coefficient arrays have shape ``batch + (n_holo_monomials, n_anti_monomials)``
so that vectors and matrices of jets are ordinary arrays of jets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "JetDomainError",
    "JetRing",
    "Jet",
    "DerivativeTable",
    "lift_point",
    "mixed_partials",
    "fd_oracle",
    "fd_table",
    "jet_matmul",
    "jet_inv",
    "jet_logdet",
    "jet_det",
    "jet_trace",
]

MAX_ORDER = 4


class JetDomainError(ArithmeticError):
    """A jet operation was applied outside its domain (e.g. log of zero)."""


# -- monomial bookkeeping ---------------------------------------------------


@lru_cache(maxsize=None)
def graded_monomials(nvars: int, order: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of total degree <= order, sorted by degree first.

    Degree-grading makes truncation to a lower order a prefix slice.
    """
    out = []
    for deg in range(order + 1):
        # reverse so that (1,0,..) precedes (0,1,..) within a degree
        block = [m for m in itertools.product(range(deg + 1), repeat=nvars) if sum(m) == deg]
        out.extend(sorted(block, reverse=True))
    return tuple(out)


@lru_cache(maxsize=None)
def _index(nvars: int, order: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(graded_monomials(nvars, order))}


@lru_cache(maxsize=None)
def _n_monomials(nvars: int, order: int) -> int:
    return math.comb(nvars + order, order)


@lru_cache(maxsize=None)
def _factorials(nvars: int, order: int) -> np.ndarray:
    return np.array(
        [math.prod(math.factorial(e) for e in m) for m in graded_monomials(nvars, order)],
        dtype=float,
    )


@dataclass(frozen=True)
class _MulTable:
    left: np.ndarray
    right: np.ndarray
    scatter_t: sp.csr_matrix  # (n_monomials, n_pairs), transposed scatter


@lru_cache(maxsize=None)
def _mul_table(nvars: int, order: int) -> _MulTable:
    monos = graded_monomials(nvars, order)
    index = _index(nvars, order)
    left, right, target = [], [], []
    for i, a in enumerate(monos):
        da = sum(a)
        for j, b in enumerate(monos):
            if da + sum(b) > order:
                continue
            left.append(i)
            right.append(j)
            target.append(index[tuple(x + y for x, y in zip(a, b))])
    npairs = len(left)
    scatter_t = sp.csr_matrix(
        (np.ones(npairs), (np.array(target), np.arange(npairs))),
        shape=(len(monos), npairs),
    )
    return _MulTable(np.array(left), np.array(right), scatter_t)


@lru_cache(maxsize=None)
def _diff_table(nvars: int, order: int, var: int) -> tuple[np.ndarray, np.ndarray]:
    """Source indices and factors for d/dx_var from degree ``order`` to ``order-1``."""
    index = _index(nvars, order)
    src, fac = [], []
    for m in graded_monomials(nvars, order - 1):
        up = list(m)
        up[var] += 1
        src.append(index[tuple(up)])
        fac.append(up[var])
    return np.array(src), np.array(fac, dtype=float)


def _scatter(mat: sp.csr_matrix, x: np.ndarray, axis: int) -> np.ndarray:
    """Apply a sparse (rows, cols) matrix along ``axis`` of a dense array."""
    x = np.moveaxis(x, axis, 0)
    shape = x.shape
    y = mat @ x.reshape(shape[0], -1)
    return np.moveaxis(np.asarray(y).reshape((mat.shape[0],) + shape[1:]), 0, axis)


# -- the ring ---------------------------------------------------------------


@dataclass(frozen=True)
class JetRing:
    """Truncation pattern: variable counts and per-sheet maximal degrees."""

    num_holo_vars: int
    num_anti_vars: int
    max_holo_order: int
    max_anti_order: int

    def __post_init__(self):
        if self.num_holo_vars < 0 or self.num_anti_vars < 0:
            raise ValueError("variable counts must be nonnegative")
        for o in (self.max_holo_order, self.max_anti_order):
            if not 0 <= o <= MAX_ORDER:
                raise ValueError(f"truncation order {o} outside 0..{MAX_ORDER}")

    @property
    def shape(self) -> tuple[int, int]:
        return (
            _n_monomials(self.num_holo_vars, self.max_holo_order),
            _n_monomials(self.num_anti_vars, self.max_anti_order),
        )

    @property
    def nilpotency(self) -> int:
        """Any jet with zero constant term vanishes beyond this power."""
        return self.max_holo_order + self.max_anti_order

    def holo_monomials(self):
        return graded_monomials(self.num_holo_vars, self.max_holo_order)

    def anti_monomials(self):
        return graded_monomials(self.num_anti_vars, self.max_anti_order)

    def truncated(self, holo_order: int, anti_order: int) -> "JetRing":
        if holo_order > self.max_holo_order or anti_order > self.max_anti_order:
            raise ValueError("can only truncate to lower orders")
        return JetRing(self.num_holo_vars, self.num_anti_vars, holo_order, anti_order)

    @cached_property
    def _tables(self):
        return (
            _mul_table(self.num_holo_vars, self.max_holo_order),
            _mul_table(self.num_anti_vars, self.max_anti_order),
        )

    # constructors
    def constant(self, value, batch: tuple[int, ...] | None = None) -> "Jet":
        value = np.asarray(value, dtype=complex)
        if batch is not None:
            value = np.broadcast_to(value, batch)
        coeffs = np.zeros(np.shape(value) + self.shape, dtype=complex)
        coeffs[..., 0, 0] = value
        return Jet(self, coeffs)

    def zeros(self, batch: tuple[int, ...] = ()) -> "Jet":
        return Jet(self, np.zeros(tuple(batch) + self.shape, dtype=complex))

    def holo_variable(self, k: int, value=0.0) -> "Jet":
        jet = self.constant(value)
        if self.max_holo_order >= 1:
            jet.coeffs[(1 + k), 0] = 1.0
        return jet

    def anti_variable(self, k: int, value=0.0) -> "Jet":
        jet = self.constant(value)
        if self.max_anti_order >= 1:
            jet.coeffs[0, (1 + k)] = 1.0
        return jet


# -- jets -------------------------------------------------------------------


class Jet:
    """Array of truncated bi-graded Taylor expansions over one ring.

    Treat instances as immutable; every operation returns a new jet.
    """

    __array_priority__ = 1000  # numpy scalars defer to our reflected ops

    def __init__(self, ring: JetRing, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape[-2:] != ring.shape:
            raise ValueError(f"coefficient shape {coeffs.shape} does not match ring {ring.shape}")
        self.ring = ring
        self.coeffs = coeffs

    # basic protocol
    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-2]

    @property
    def const(self) -> np.ndarray | complex:
        c = self.coeffs[..., 0, 0]
        return c[()] if c.ndim == 0 else c

    def __len__(self):
        return self.batch_shape[0]

    def __getitem__(self, key) -> "Jet":
        key = key if isinstance(key, tuple) else (key,)
        if len(key) > len(self.batch_shape) or any(k is Ellipsis for k in key):
            raise IndexError("jets index over batch axes only")
        return Jet(self.ring, self.coeffs[key])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self):
        return f"Jet(batch={self.batch_shape}, ring={self.ring}, const={self.const!r})"

    def reshape(self, *batch) -> "Jet":
        if len(batch) == 1 and isinstance(batch[0], tuple):
            batch = batch[0]
        return Jet(self.ring, self.coeffs.reshape(tuple(batch) + self.ring.shape))

    def sum(self, axis=None) -> "Jet":
        nb = len(self.batch_shape)
        if axis is None:
            axis = tuple(range(nb))
        axis = (axis,) if isinstance(axis, int) else axis
        axis = tuple(a % nb for a in axis)
        return Jet(self.ring, self.coeffs.sum(axis=axis))

    @staticmethod
    def stack(jets: Sequence["Jet"], axis: int = 0) -> "Jet":
        ring = jets[0].ring
        if any(j.ring != ring for j in jets):
            raise ValueError("cannot stack jets from different rings")
        nb = len(jets[0].batch_shape)
        if axis < 0:
            axis += nb + 1
        return Jet(ring, np.stack([j.coeffs for j in jets], axis=axis))

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Jet):
            if other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other.coeffs
        other = np.asarray(other, dtype=complex)
        out = np.zeros(other.shape + self.ring.shape, dtype=complex)
        out[..., 0, 0] = other
        return out

    # arithmetic
    def __add__(self, other):
        return Jet(self.ring, self.coeffs + self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ring, -self.coeffs)

    def __sub__(self, other):
        return Jet(self.ring, self.coeffs - self._coerce(other))

    def __rsub__(self, other):
        return Jet(self.ring, self._coerce(other) - self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(self.ring, _convolve(self.ring, self.coeffs, self._coerce(other)))
        other = np.asarray(other, dtype=complex)
        return Jet(self.ring, self.coeffs * other[..., None, None])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        other = np.asarray(other, dtype=complex)
        return Jet(self.ring, self.coeffs / other[..., None, None])

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, exponent):
        if isinstance(exponent, (int, np.integer)) and exponent >= 0:
            out = self.ring.constant(1.0, self.batch_shape)
            base = self
            e = int(exponent)
            while e:
                if e & 1:
                    out = out * base
                e >>= 1
                if e:
                    base = base * base
            return out
        return self.real_power(float(exponent))

    def _split(self, opname: str, require_positive: bool = False):
        c = np.asarray(self.coeffs[..., 0, 0])
        if np.any(c == 0):
            raise JetDomainError(f"{opname}: constant term is zero")
        if require_positive:
            bad = (c.real <= 0) | (np.abs(c.imag) > 1e-10 * np.abs(c))
            if np.any(bad):
                raise JetDomainError(f"{opname}: constant term must be positive real, got {c[bad].ravel()[0]!r}")
        nil = self.coeffs.copy()
        nil[..., 0, 0] = 0.0
        return c, Jet(self.ring, nil)

    def _series(self, nil: "Jet", coeffs: Sequence) -> "Jet":
        """Evaluate sum_k coeffs[k] * nil**k by Horner; coeffs may be arrays."""
        out = self.ring.constant(coeffs[-1], nil.batch_shape)
        for ck in reversed(coeffs[:-1]):
            out = out * nil + ck
        return out

    def reciprocal(self) -> "Jet":
        c, nil = self._split("division")
        x = nil / c
        n = self.ring.nilpotency
        return self._series(x, [(-1.0) ** k for k in range(n + 1)]) / c

    def log(self) -> "Jet":
        c, nil = self._split("log")
        x = nil / c
        n = self.ring.nilpotency
        coeffs = [np.log(c)] + [(-1.0) ** (k + 1) / k for k in range(1, n + 1)]
        return self._series(x, coeffs)

    def exp(self) -> "Jet":
        c = np.asarray(self.coeffs[..., 0, 0])
        nil = self.coeffs.copy()
        nil[..., 0, 0] = 0.0
        n = self.ring.nilpotency
        series = self._series(Jet(self.ring, nil), [1.0 / math.factorial(k) for k in range(n + 1)])
        return series * np.exp(c)

    def real_power(self, exponent: float) -> "Jet":
        self._split("power", require_positive=True)
        return (self.log() * exponent).exp()

    # calculus
    def diff_holo(self, k: int) -> "Jet":
        r = self.ring
        if r.max_holo_order == 0:
            raise ValueError("no holomorphic order left to differentiate")
        src, fac = _diff_table(r.num_holo_vars, r.max_holo_order, k)
        ring = r.truncated(r.max_holo_order - 1, r.max_anti_order)
        return Jet(ring, self.coeffs[..., src, :] * fac[:, None])

    def diff_anti(self, k: int) -> "Jet":
        r = self.ring
        if r.max_anti_order == 0:
            raise ValueError("no antiholomorphic order left to differentiate")
        src, fac = _diff_table(r.num_anti_vars, r.max_anti_order, k)
        ring = r.truncated(r.max_holo_order, r.max_anti_order - 1)
        return Jet(ring, self.coeffs[..., :, src] * fac)

    def truncate(self, holo_order: int, anti_order: int) -> "Jet":
        ring = self.ring.truncated(holo_order, anti_order)
        nh, na = ring.shape
        return Jet(ring, self.coeffs[..., :nh, :na])

    def coefficient(self, holo: Sequence[int], anti: Sequence[int]):
        i = _index(self.ring.num_holo_vars, self.ring.max_holo_order)[tuple(holo)]
        j = _index(self.ring.num_anti_vars, self.ring.max_anti_order)[tuple(anti)]
        c = self.coeffs[..., i, j]
        return c[()] if c.ndim == 0 else c

    def partials(self) -> np.ndarray:
        """Coefficients scaled by I! J!, i.e. the derivative values."""
        r = self.ring
        fh = _factorials(r.num_holo_vars, r.max_holo_order)
        fa = _factorials(r.num_anti_vars, r.max_anti_order)
        return self.coeffs * fh[:, None] * fa[None, :]


def _convolve(ring: JetRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    th, ta = ring._tables
    # truncated Cauchy product: gather all admissible pairs, multiply, scatter
    ya = a[..., th.left, :][..., ta.left]
    yb = b[..., th.right, :][..., ta.right]
    prod = ya * yb
    prod = _scatter(ta.scatter_t, prod, -1)
    return _scatter(th.scatter_t, prod, -2)


# -- linear algebra over jets ----------------------------------------------


def jet_matmul(a: Jet, b: Jet) -> Jet:
    """Matrix product of jet arrays with batch shapes (..., n, m) and (..., m, k)."""
    ca = a.coeffs[..., :, :, None, :, :]
    cb = b.coeffs[..., None, :, :, :, :]
    ca, cb = np.broadcast_arrays(ca, cb)
    prod = _convolve(a.ring, ca, cb)
    return Jet(a.ring, prod.sum(axis=-4))


def _const_matrix_times(m: np.ndarray, x: Jet) -> Jet:
    return Jet(x.ring, np.einsum("...ij,...jkab->...ikab", m, x.coeffs))


def jet_trace(a: Jet) -> Jet:
    return Jet(a.ring, np.trace(a.coeffs, axis1=-4, axis2=-3))


def _split_matrix(a: Jet):
    m0 = a.coeffs[..., 0, 0]
    nil = a.coeffs.copy()
    nil[..., 0, 0] = 0.0
    return m0, Jet(a.ring, nil)


def jet_inv(a: Jet) -> Jet:
    """Inverse of a square jet matrix (Neumann series around the constant part)."""
    m0, e = _split_matrix(a)
    m0_inv = np.linalg.inv(m0)
    x = -_const_matrix_times(m0_inv, e)  # -A0^{-1} E, nilpotent
    n = m0.shape[-1]
    eye = a.ring.constant(np.eye(n), m0.shape)
    acc = eye
    for _ in range(a.ring.nilpotency):
        acc = eye + jet_matmul(x, acc)
    return jet_matmul(acc, a.ring.constant(m0_inv, m0.shape))


def jet_logdet(a: Jet) -> Jet:
    """log det of a square jet matrix; principal branch on the constant part."""
    m0, e = _split_matrix(a)
    sign, logabs = np.linalg.slogdet(m0)
    if np.any(sign == 0):
        raise JetDomainError("logdet: singular constant part")
    x = _const_matrix_times(np.linalg.inv(m0), e)
    out = a.ring.constant(np.log(sign) + logabs)
    power = x
    for k in range(1, a.ring.nilpotency + 1):
        out = out + jet_trace(power) * ((-1.0) ** (k + 1) / k)
        if k < a.ring.nilpotency:
            power = jet_matmul(power, x)
    return out


def jet_det(a: Jet) -> Jet:
    return jet_logdet(a).exp()


# -- derivative tables ------------------------------------------------------


class DerivativeTable:
    """Mixed partials of a scalar function at a point, read from a jet."""

    def __init__(self, jet: Jet):
        if jet.batch_shape:
            raise ValueError("derivative tables hold scalar jets")
        self.jet = jet
        self._values = jet.partials()
        self._hidx = _index(jet.ring.num_holo_vars, jet.ring.max_holo_order)
        self._aidx = _index(jet.ring.num_anti_vars, jet.ring.max_anti_order)

    @property
    def ring(self) -> JetRing:
        return self.jet.ring

    def __getitem__(self, key) -> complex:
        holo, anti = key
        return complex(self._values[self._hidx[tuple(holo)], self._aidx[tuple(anti)]])

    def items(self) -> Iterable[tuple[tuple[tuple[int, ...], tuple[int, ...]], complex]]:
        for hm, i in self._hidx.items():
            for am, j in self._aidx.items():
                yield (hm, am), complex(self._values[i, j])

    def unit(self, *holo_vars: int, anti: Sequence[int] = ()) -> complex:
        """Entry for repeated variable indices, e.g. ``unit(0, 1, anti=(2,))``."""
        h = [0] * self.ring.num_holo_vars
        a = [0] * self.ring.num_anti_vars
        for k in holo_vars:
            h[k] += 1
        for k in anti:
            a[k] += 1
        return self[h, a]


# -- entry points -----------------------------------------------------------


def lift_point(ring: JetRing, base) -> tuple[Jet, Jet]:
    """Seed coordinate jets at ``base``.

    Returns the holomorphic and the antiholomorphic coordinate jets as two
    jet vectors of length ``len(base)``; the anti jets carry ``conj(base)``.
    """
    base = np.asarray(base, dtype=complex).ravel()
    n = base.size
    if ring.num_holo_vars != n or ring.num_anti_vars != n:
        raise ValueError(f"point has {n} coordinates but ring has {ring.num_holo_vars}/{ring.num_anti_vars} variables")
    holo = Jet.stack([ring.holo_variable(k, base[k]) for k in range(n)])
    anti = Jet.stack([ring.anti_variable(k, np.conj(base[k])) for k in range(n)])
    return holo, anti


def mixed_partials(f: Callable[[Jet, Jet], Jet], point, orders: tuple[int, int]) -> DerivativeTable:
    """All mixed partials of ``f`` up to ``orders`` at ``point``.

    ``f`` receives the holomorphic and antiholomorphic coordinate jets and
    must build its value from ring operations.
    """
    point = np.asarray(point, dtype=complex).ravel()
    ring = JetRing(point.size, point.size, *orders)
    holo, anti = lift_point(ring, point)
    return DerivativeTable(f(holo, anti))


# -- finite-difference oracle -----------------------------------------------

# second-order central stencils (offset, weight) for derivative orders 0..4
_STENCILS = {
    0: ((0, 1.0),),
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}

# per-total-order default steps; two Richardson levels make truncation O(h^6)
DEFAULT_FD_STEPS = {1: 2e-3, 2: 5e-3, 3: 1e-2, 4: 2e-2}
DEFAULT_RICHARDSON_LEVELS = 2


def _wirtinger_to_real(holo: Sequence[int], anti: Sequence[int]) -> dict[tuple[int, ...], complex]:
    """Expand prod d_z^I d_zbar^J into real partials over (x_1..x_n, y_1..y_n)."""
    n = len(holo)
    terms: dict[tuple[int, ...], complex] = {(0,) * (2 * n): 1.0}
    signs = [-1j] * sum(holo) + [1j] * sum(anti)
    axes = [k for k in range(n) for _ in range(holo[k])] + [k for k in range(n) for _ in range(anti[k])]
    for k, sy in zip(axes, signs):
        new: dict[tuple[int, ...], complex] = {}
        for mi, c in terms.items():
            for axis, w in ((k, 0.5), (n + k, 0.5 * sy)):
                m = list(mi)
                m[axis] += 1
                m = tuple(m)
                new[m] = new.get(m, 0.0) + c * w
        terms = {m: c for m, c in new.items() if c != 0}
    return terms


def _stencil(orders: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Offsets (npts, dim) and weights of the tensor-product stencil."""
    axes = [ax for ax, o in enumerate(orders) if o]
    offsets, weights = [], []
    for combo in itertools.product(*[_STENCILS[orders[ax]] for ax in axes]):
        off = np.zeros(len(orders))
        w = 1.0
        for ax, (o, wt) in zip(axes, combo):
            off[ax] = o
            w *= wt
        offsets.append(off)
        weights.append(w)
    return np.array(offsets), np.array(weights)


class _FDEvaluator:
    """Batches all stencil evaluations for a set of real partials at one point."""

    def __init__(self, f: Callable, point: np.ndarray, vectorized: bool):
        self.n = point.size
        self.x0 = np.concatenate([point.real, point.imag])
        self.f = f if vectorized else (lambda zs: np.array([f(z) for z in zs]))

    def real_partials(self, multi_indices: Sequence[tuple[int, ...]], h: float) -> dict:
        blocks, spans = [], []
        start = 0
        for mi in multi_indices:
            off, w = _stencil(mi)
            blocks.append(self.x0 + h * off)
            spans.append((start, start + len(w), w, h ** sum(mi)))
            start += len(w)
        x = np.concatenate(blocks)
        vals = np.asarray(self.f(x[:, : self.n] + 1j * x[:, self.n :]))
        return {mi: vals[a:b] @ w / hp for mi, (a, b, w, hp) in zip(multi_indices, spans)}

    def wirtinger(
        self,
        keys: Sequence[tuple[tuple[int, ...], tuple[int, ...]]],
        step: float | None,
        levels: int = DEFAULT_RICHARDSON_LEVELS,
    ) -> dict:
        by_order: dict[int, list] = {}
        for key in keys:
            by_order.setdefault(sum(key[0]) + sum(key[1]), []).append(key)
        out = {}
        for order, group in by_order.items():
            if order > 4:
                raise ValueError("finite differences support total order <= 4")
            if order == 0:
                val = complex(np.asarray(self.f((self.x0[: self.n] + 1j * self.x0[self.n :])[None]))[0])
                out.update({k: val for k in group})
                continue
            h = DEFAULT_FD_STEPS[order] if step is None else step
            if h <= 0:
                raise ValueError("step must be positive")
            expansions = {k: _wirtinger_to_real(*k) for k in group}
            needed = sorted({mi for e in expansions.values() for mi in e})
            rich = _richardson([self.real_partials(needed, h / 2**j) for j in range(levels + 1)])
            for k, e in expansions.items():
                out[k] = complex(sum(c * rich[mi] for mi, c in e.items()))
        return out


def _richardson(tables: list[dict]) -> dict:
    """Neville-style elimination of h^2, h^4, ... from step-halving tables."""
    out = {}
    for key in tables[0]:
        col = [t[key] for t in tables]
        for lev in range(1, len(tables)):
            f = 4.0**lev
            col = [(f * col[i + 1] - col[i]) / (f - 1.0) for i in range(len(col) - 1)]
        out[key] = col[0]
    return out


def fd_oracle(
    f: Callable,
    point,
    holo: Sequence[int],
    anti: Sequence[int],
    step: float | None = None,
    vectorized: bool = False,
    levels: int = DEFAULT_RICHARDSON_LEVELS,
) -> complex:
    """Mixed Wirtinger partial of ``f`` by central differences in real coordinates.

    ``f`` maps a complex coordinate vector to a real or complex value (with
    ``vectorized=True`` it maps an ``(m, n)`` array to ``m`` values).  Real
    partials use second-order central stencils at steps ``h, h/2, ...,
    h/2**levels`` combined by Richardson extrapolation.  ``step=None`` picks a per-order step
    that balances truncation against cancellation in double precision.
    """
    point = np.asarray(point, dtype=complex).ravel()
    holo, anti = tuple(holo), tuple(anti)
    if len(holo) != point.size or len(anti) != point.size:
        raise ValueError("multi-index length must match the point dimension")
    if levels < 0:
        raise ValueError("levels must be non-negative")
    ev = _FDEvaluator(f, point, vectorized)
    return ev.wirtinger([(holo, anti)], step, levels)[(holo, anti)]


def fd_table(
    f: Callable,
    point,
    orders: tuple[int, int],
    step: float | None = None,
    vectorized: bool = True,
    levels: int = DEFAULT_RICHARDSON_LEVELS,
) -> dict:
    """Finite-difference counterpart of :func:`mixed_partials` as a dict."""
    point = np.asarray(point, dtype=complex).ravel()
    keys = [(h, a) for h in graded_monomials(point.size, orders[0]) for a in graded_monomials(point.size, orders[1])]
    if levels < 0:
        raise ValueError("levels must be non-negative")
    return _FDEvaluator(f, point, vectorized).wirtinger(keys, step, levels)
