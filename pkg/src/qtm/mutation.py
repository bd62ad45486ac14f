"""Balanced quantum coordinate change for a single flip.

``Theta_k = Theta#_k o Theta'_k``.  The monomial part ``C_k`` is a lattice
map, and ``Theta#`` multiplies ``Z_w`` on the right by ``F^q(X_k; alpha_w)``
with ``X_k = Z_{2 v_k}``.  For negative ``alpha`` this factor is a
denominator.  Instead of dividing, everything is multiplied on the right by
one common polynomial ``P = prod_{r=1}^{M} (1 + q^{-(2r-1)} X_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import LatticeMismatch, LatticeVec, OmegaPoly, QTorusElement, SkewLattice
from .surface import UnsupportedFlip, mutate_exchange

ALPHA_CONVENTIONS = ("literal", "half")
EPS_SIDES = ("target", "flipped")
FACTOR_SIDES = ("right", "left")


@dataclass(frozen=True)
class FlipConvention:
    """How the flip formula is read.

    ``alpha``: ``"literal"`` takes ``alpha_w = <v_k, w>``, ``"half"`` takes
    half of it.  ``eps_side``: which triangulation's matrix feeds ``C_k``
    and ``alpha`` (``"target"`` is the one the map lands in).
    ``factor_side``: whether ``F^q(X_k; alpha)`` multiplies ``Z_w`` on the
    right or on the left.  The common denominator sits on the same side.
    """

    alpha: str = "half"
    eps_side: str = "flipped"
    factor_side: str = "left"

    def __post_init__(self):
        if self.alpha not in ALPHA_CONVENTIONS:
            raise ValueError(f"unknown alpha convention {self.alpha!r}")
        if self.eps_side not in EPS_SIDES:
            raise ValueError(f"unknown eps side {self.eps_side!r}")
        if self.factor_side not in FACTOR_SIDES:
            raise ValueError(f"unknown factor side {self.factor_side!r}")


# Formula taken word for word: fails naturality on the trace conventions used here.
LITERAL = FlipConvention("literal", "target", "right")
# The reading under which flip naturality holds for the catalog traces.
CALIBRATED = FlipConvention()


def _check_arc(eps: SkewLattice, k: str) -> None:
    if k not in eps:
        raise KeyError(f"unknown arc {k!r}")
    if k in eps.frozen:
        raise UnsupportedFlip(f"arc {k!r} is a boundary arc")
    if k in eps.self_folded:
        raise UnsupportedFlip(f"arc {k!r} is self-folded")


def Ck_map(eps: SkewLattice, k: str, v: LatticeVec) -> LatticeVec:
    """``v'_k -> -v_k`` and ``v'_i -> v_i + [eps_ik]_+ v_k``, extended linearly."""
    _check_arc(eps, k)
    out: dict[str, int] = {}
    for i, c in v.items():
        if i == k:
            out[k] = out.get(k, 0) - c
        else:
            out[i] = out.get(i, 0) + c
            e = eps.eps(i, k)
            if e > 0:
                out[k] = out.get(k, 0) + c * e
    return LatticeVec(out)


# Polynomials in X_k are kept as coefficient lists; they commute with each other.
_Poly = list[OmegaPoly]


def _pmul(a: _Poly, b: _Poly) -> _Poly:
    out = [OmegaPoly() for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _linear(qexp: int) -> _Poly:
    """``1 + q^qexp X``."""
    return [OmegaPoly.const(1), OmegaPoly.q(qexp)]


def fq_poly(alpha: int, M: int) -> _Poly:
    """Coefficients of ``F^q(X; alpha) * prod_{r=1}^{M} (1 + q^{-(2r-1)} X)``."""
    if M < max(0, -alpha):
        raise ValueError(f"denominator degree {M} too small for alpha = {alpha}")
    poly: _Poly = [OmegaPoly.const(1)]
    if alpha > 0:
        for r in range(1, alpha + 1):
            poly = _pmul(poly, _linear(2 * r - 1))
        start = 1
    else:
        # F^q(X; alpha) cancels the first |alpha| factors of P
        start = -alpha + 1
    for r in range(start, M + 1):
        poly = _pmul(poly, _linear(-(2 * r - 1)))
    return poly


def _poly_element(lattice: SkewLattice, k: str, poly: _Poly) -> QTorusElement:
    vk = LatticeVec.basis(k)
    # <v_k, v_k> = 0, so X_k^n = Z_{2n v_k}
    return QTorusElement(lattice, {vk * (2 * n): c for n, c in enumerate(poly) if not c.is_zero()})


def Fq_times_P(lattice: SkewLattice, alpha: int, M: int, k: str) -> QTorusElement:
    return _poly_element(lattice, k, fq_poly(alpha, M))


def P_element(lattice: SkewLattice, M: int, k: str) -> QTorusElement:
    return Fq_times_P(lattice, 0, M, k)


def X_k(lattice: SkewLattice, k: str) -> QTorusElement:
    return QTorusElement(lattice, {LatticeVec.basis(k, 2): 1})


@dataclass(frozen=True)
class LocalizedElement:
    """``numerator * P^{-1}`` (or ``P^{-1} * numerator`` when ``side`` is left).

    ``P`` has degree ``M`` in ``X_k``.
    """

    numerator: QTorusElement
    M: int
    k: str
    side: str = "right"

    @property
    def lattice(self) -> SkewLattice:
        return self.numerator.lattice

    def denominator(self) -> QTorusElement:
        return P_element(self.lattice, self.M, self.k)

    def is_laurent(self) -> bool:
        return self.M == 0

    def equals(self, x: QTorusElement) -> bool:
        """``numerator P^{-1} == x`` iff ``numerator == x P`` (mirrored on the left)."""
        p = self.denominator()
        return self.numerator == (x * p if self.side == "right" else p * x)

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_json(), "M": self.M, "k": self.k, "side": self.side}


def _alpha(eps: SkewLattice, k: str, w: LatticeVec, convention: str) -> int:
    a = eps.pair(LatticeVec.basis(k), w)
    if convention == "literal":
        return a
    if a % 2:
        raise ValueError(f"<v_k, w> = {a} is odd; half convention needs a balanced input")
    return a // 2


def theta_apply(
    eps: SkewLattice,
    k: str,
    f_prime: QTorusElement,
    convention: FlipConvention = CALIBRATED,
) -> LocalizedElement:
    """Image of ``f_prime`` (flipped lattice) in the fraction field over ``eps``.

    Products are always taken in the torus over ``eps``; the convention only
    picks the matrix read by ``C_k`` and ``alpha`` and the side of the factor.
    """
    _check_arc(eps, k)
    rule = eps if convention.eps_side == "target" else mutate_exchange(eps, k)
    parts = []
    for v, c in f_prime.items():
        w = Ck_map(rule, k, v)
        parts.append((w, c, _alpha(rule, k, w, convention.alpha)))
    M = max((max(0, -a) for _, _, a in parts), default=0)
    num = QTorusElement.zero(eps)
    for w, c, a in parts:
        z, fp = QTorusElement(eps, {w: c}), Fq_times_P(eps, a, M, k)
        num = num + (z * fp if convention.factor_side == "right" else fp * z)
    return LocalizedElement(num, M, k, convention.factor_side)


def verify_flip_naturality(
    f_target: QTorusElement,
    f_source: QTorusElement,
    eps: SkewLattice,
    k: str,
    convention: FlipConvention = CALIBRATED,
) -> bool:
    """``Theta_k(f_source) == f_target``, checked after clearing denominators.

    ``f_target`` lives over ``eps`` and ``f_source`` over the lattice mutated
    at ``k``.
    """
    _check_arc(eps, k)
    if f_target.lattice != eps:
        raise LatticeMismatch("f_target is not on the given lattice")
    if f_source.lattice != mutate_exchange(eps, k):
        raise LatticeMismatch("f_source is not on the lattice mutated at k")
    return theta_apply(eps, k, f_source, convention).equals(f_target)
