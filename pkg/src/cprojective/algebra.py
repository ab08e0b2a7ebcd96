"""Finite-dimensional commutative local GF(p)-algebras given by structure constants.

Basis element 0 is the identity and the remaining basis elements span the
maximal ideal.  Elements are coordinate vectors of length ``d``.

Matrices whose entries are ring elements ("ring matrices") are stored as
integer arrays of shape ``(rows, cols, d)``; they describe maps between free
modules and, after applying :func:`ring_matrix_action`, maps between direct
powers of any module.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import gfp


class AlgebraError(ValueError):
    """Base class for rejected ring presentations; ``witness`` names the failure."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class MalformedSpec(AlgebraError):
    pass


class NoUnit(AlgebraError):
    pass


class NotCommutative(AlgebraError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotLocal(AlgebraError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class AlgebraSpec:
    """Raw, unvalidated ring presentation."""

    p: int
    basis: tuple[str, ...]
    mul: np.ndarray
    name: str = ""

    @classmethod
    def from_json(cls, data: dict, name: str = "") -> "AlgebraSpec":
        try:
            p = int(data["p"])
            basis = tuple(str(b) for b in data["basis"])
            mul = np.asarray(data["mul"], dtype=np.int64)
        except KeyError as exc:
            raise MalformedSpec(f"ring file missing field {exc}", witness=str(exc)) from None
        except (TypeError, ValueError) as exc:
            raise MalformedSpec(f"ring file has a malformed field: {exc}") from None
        return cls(p, basis, mul, data.get("name", name))


@dataclass(frozen=True, eq=False)
class Algebra:
    """A certified commutative local algebra (only :func:`validate` builds these)."""

    p: int
    basis: tuple[str, ...]
    table: np.ndarray = field(repr=False)
    nilpotency: int = 1
    name: str = ""

    @property
    def d(self) -> int:
        return len(self.basis)

    @property
    def maximal_ideal(self) -> tuple[int, ...]:
        return tuple(range(1, self.d))

    @property
    def order(self) -> int:
        return self.p**self.d

    @cached_property
    def regular(self) -> np.ndarray:
        """Left multiplication matrices: ``regular[i] @ e_j = e_i * e_j``."""
        return np.ascontiguousarray(self.table.transpose(0, 2, 1))

    def zero(self) -> np.ndarray:
        return gfp.zeros(self.d, self.p)

    def one(self) -> np.ndarray:
        e = self.zero()
        e[0] = 1
        return e

    def basis_element(self, i: int) -> np.ndarray:
        e = self.zero()
        e[i] = 1
        return e

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        return gfp.reduce(np.einsum("i,j,ijk->k", a, b, self.table.astype(np.int64)), self.p)

    def mult_matrix(self, a) -> np.ndarray:
        """Matrix of multiplication by ``a`` on R."""
        a = np.asarray(a, dtype=np.int64)
        return gfp.reduce(np.einsum("i,ikj->kj", a, self.regular.astype(np.int64)), self.p)

    def is_unit(self, a) -> bool:
        # valid because span(e_1, ..) is the (nilpotent) maximal ideal
        return int(np.asarray(a)[0]) % self.p != 0

    def inverse(self, a) -> np.ndarray:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{self.format(a)} lies in the maximal ideal")
        return gfp.solve(self.mult_matrix(a), self.one(), self.p)

    def elements(self):
        """All p^d elements in lexicographic coordinate order."""
        for coords in itertools.product(range(self.p), repeat=self.d):
            yield gfp.reduce(np.array(coords), self.p)

    def element(self, text: str) -> np.ndarray:
        """Parse ``"1+x"``, ``"2*x - y"``, ``"x*y"`` using basis names."""
        names = {n: i for i, n in enumerate(self.basis)}
        src = text.replace(" ", "")
        if not src:
            raise ValueError("empty ring element")
        total = np.zeros(self.d, dtype=np.int64)
        for sign, term in re.findall(r"([+-]?)([^+-]+)", src):
            value = self.one().astype(np.int64)
            for factor in term.split("*"):
                if factor in names:
                    value = self.mul(value, self.basis_element(names[factor])).astype(np.int64)
                elif factor.isdigit():
                    value = value * int(factor)
                else:
                    raise ValueError(f"unknown basis name {factor!r} in {text!r}")
            total += -value if sign == "-" else value
        return gfp.reduce(total, self.p)

    def format(self, a) -> str:
        terms = []
        for c, name in zip(np.asarray(a).tolist(), self.basis):
            if c == 0:
                continue
            if name == self.basis[0]:
                terms.append(str(c))
            else:
                terms.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(terms) if terms else "0"

    def power_of_maximal_ideal(self, t: int) -> np.ndarray:
        """Echelon basis (columns) of m^t."""
        cur = gfp.identity(self.d, self.p)[:, 1:]
        for _ in range(t - 1):
            cur = _times_m(self, cur)
        return cur

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "p": self.p,
            "basis": list(self.basis),
            "mul": self.table.astype(int).tolist(),
        }


def _times_m(A: Algebra, cols: np.ndarray) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    prods = [gfp.matmul(A.regular[i], cols, A.p) for i in range(1, A.d)]
    if not prods:
        return gfp.zeros((A.d, 0), A.p)
    return gfp.image_basis(np.hstack(prods), A.p)


def validate(spec: AlgebraSpec | dict) -> Algebra:
    """Check every standing hypothesis on a ring presentation.

    Raises the matching :class:`AlgebraError` subclass with a witness
    (index triple or pair) on the first violated axiom.
    """
    if isinstance(spec, dict):
        spec = AlgebraSpec.from_json(spec)
    p = spec.p
    if not _is_prime(p):
        raise MalformedSpec(f"modulus {p} is not prime", witness=p)
    d = len(spec.basis)
    if d < 1:
        raise MalformedSpec("empty basis")
    c = np.asarray(spec.mul)
    if c.shape != (d, d, d):
        raise MalformedSpec(f"mul table has shape {c.shape}, expected {(d, d, d)}", witness=c.shape)
    if c.size and (c.min() < 0 or c.max() >= p):
        raise MalformedSpec(f"structure constants must lie in [0, {p})")
    c = gfp.reduce(c, p)
    eye = np.eye(d, dtype=c.dtype)
    for j, k in zip(*np.nonzero(c[0] != eye)):
        raise NoUnit(f"e0*e{j} has coefficient {c[0, j, k]} on e{k}", witness=(0, int(j), int(k)))
    for i, j in zip(*np.nonzero((c != c.transpose(1, 0, 2)).any(axis=2))):
        raise NotCommutative(f"e{i}*e{j} != e{j}*e{i}", witness=(int(i), int(j)))
    c64 = c.astype(np.int64)
    lhs = np.einsum("ijl,lkm->ijkm", c64, c64) % p
    rhs = np.einsum("jkl,ilm->ijkm", c64, c64) % p
    bad = np.argwhere((lhs != rhs).any(axis=3))
    if bad.size:
        i, j, k = (int(v) for v in bad[0])
        raise NotAssociative(f"(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})", witness=(i, j, k))
    bad = np.argwhere(c[1:, 1:, 0] != 0)
    if bad.size:
        i, j = (int(v) + 1 for v in bad[0])
        raise NotLocal(
            f"e{i}*e{j} has unit component {c[i, j, 0]}; basis 1..d-1 does not span the maximal ideal",
            witness=(i, j, 0),
        )
    A = Algebra(p, tuple(spec.basis), c, 1, spec.name)
    cur = gfp.identity(d, p)[:, 1:]
    t = 1
    while cur.shape[1]:
        nxt = _times_m(A, cur)
        if nxt.shape[1] == cur.shape[1]:
            raise NotLocal(f"m^{t} = m^{t + 1} != 0: ideal not nilpotent", witness=t)
        cur = nxt
        t += 1
    return Algebra(p, tuple(spec.basis), c, t, spec.name)


def regular_representation(A: Algebra) -> np.ndarray:
    return A.regular


# -- ring matrices ---------------------------------------------------------


def ring_matrix_mul(A: Algebra, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of ring matrices ``X (r x s)`` and ``Y (s x t)``."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    out = np.einsum("ija,jkb,abc->ikc", X, Y, A.table.astype(np.int64), optimize=True)
    return gfp.reduce(out, A.p)


def ring_matrix_action(A: Algebra, X: np.ndarray, base: np.ndarray) -> np.ndarray:
    """GF(p) matrix of ``X`` acting between direct powers of a module.

    ``base`` holds the action matrices ``(d, k, k)`` of the repeated
    summand.  Block ``(g, h)`` of the result is the action of ``X[g, h]``.
    """
    X = gfp.reduce(X, A.p)
    rows, cols, d = X.shape
    k = base.shape[1]
    p = A.p
    out = gfp.zeros((rows, k, cols, k), p)
    base = gfp.reduce(base, p)
    for j in range(d):
        xj = X[:, :, j]
        if not xj.any():
            continue
        g, h = np.nonzero(xj)
        # only touch nonzero blocks; ring matrices here are sparse
        term = (xj[g, h].astype(np.int64)[:, None, None] * base[j].astype(np.int64)[None]) % p
        cur = out[g, :, h, :].astype(np.int64)
        out[g, :, h, :] = ((cur + term) % p).astype(out.dtype)
    return out.reshape(rows * k, cols * k)


def ring_matrix_transpose(X: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(X).transpose(1, 0, 2))


def ring_identity(A: Algebra, n: int) -> np.ndarray:
    X = gfp.zeros((n, n, A.d), A.p)
    X[np.arange(n), np.arange(n), 0] = 1
    return X


def ring_matrix_has_unit(X: np.ndarray) -> bool:
    return bool(np.asarray(X)[..., 0].any()) if np.asarray(X).size else False
