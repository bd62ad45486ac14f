"""Exact arithmetic for Z[omega^{+-1}], skew lattices and quantum tori.

All objects here are immutable.  A quantum torus element is a finite sum
``sum_v c_v(omega) Z_v`` with the twisted product
``Z_v Z_w = omega^{<v,w>} Z_{v+w}``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import Union

import sympy

IntLike = Union[int, "OmegaPoly"]


class LatticeMismatch(ValueError):
    """Raised when elements of two different lattices are combined."""


# ---------------------------------------------------------------------------
# Z[omega^{+-1}]


class OmegaPoly:
    """Laurent polynomial in omega with integer coefficients.

    Stored as a map ``exponent -> coefficient`` with no zero coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = int(c)
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def const(cls, c: int) -> "OmegaPoly":
        return cls({0: c})

    @classmethod
    def omega(cls, e: int = 1, c: int = 1) -> "OmegaPoly":
        """The monomial ``c * omega^e``."""
        return cls({e: c})

    @classmethod
    def q(cls, e: int = 1) -> "OmegaPoly":
        """``q^e`` with ``q = omega^4``."""
        return cls({4 * e: 1})

    @staticmethod
    def coerce(x: IntLike) -> "OmegaPoly":
        if isinstance(x, OmegaPoly):
            return x
        if isinstance(x, int):
            return OmegaPoly.const(x)
        raise TypeError(f"cannot interpret {x!r} as a Laurent polynomial in omega")

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = OmegaPoly.const(other)
        if not isinstance(other, OmegaPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __add__(self, other: IntLike) -> "OmegaPoly":
        other = OmegaPoly.coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return OmegaPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "OmegaPoly":
        return OmegaPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: IntLike) -> "OmegaPoly":
        return self + (-OmegaPoly.coerce(other))

    def __rsub__(self, other: IntLike) -> "OmegaPoly":
        return OmegaPoly.coerce(other) - self

    def __mul__(self, other: IntLike) -> "OmegaPoly":
        other = OmegaPoly.coerce(other)
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return OmegaPoly(out)

    __rmul__ = __mul__

    def shift(self, e: int) -> "OmegaPoly":
        """Multiply by ``omega^e``."""
        if e == 0:
            return self
        return OmegaPoly({k + e: c for k, c in self._terms.items()})

    def star(self) -> "OmegaPoly":
        """The bar involution ``omega -> omega^{-1}``."""
        return OmegaPoly({-e: c for e, c in self._terms.items()})

    def at_one(self) -> int:
        return sum(self._terms.values())

    def to_json(self) -> dict[str, int]:
        return {str(e): c for e, c in self._terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> "OmegaPoly":
        return cls({int(e): int(c) for e, c in data.items()})

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            if e == 0:
                parts.append(str(c))
            else:
                mono = "w" if e == 1 else f"w^{e}"
                parts.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(parts)


ONE = OmegaPoly.const(1)


# ---------------------------------------------------------------------------
# lattice vectors


class LatticeVec(Mapping):
    """Sparse integer vector indexed by arc labels.

    Zero entries are never stored, so equal vectors compare equal regardless
    of how they were built.
    """

    __slots__ = ("_c", "_key")

    def __init__(self, coords: Mapping[str, int] | Iterable[tuple[str, int]] | None = None):
        acc: dict[str, int] = {}
        if coords is not None:
            items = coords.items() if isinstance(coords, Mapping) else coords
            for k, v in items:
                iv = int(v)
                if iv != v:
                    raise ValueError("lattice coordinates must be integers")
                acc[str(k)] = acc.get(str(k), 0) + iv
        self._c = {k: v for k, v in sorted(acc.items()) if v}
        self._key = tuple(self._c.items())

    @classmethod
    def basis(cls, label: str, coeff: int = 1) -> "LatticeVec":
        return cls({label: coeff})

    @classmethod
    def parse(cls, text: str) -> "LatticeVec":
        """Parse ``"a:1,b:-2"``; the empty string gives the zero vector."""
        coords: list[tuple[str, int]] = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            label, sep, coeff = chunk.rpartition(":")
            if not sep or not label:
                raise ValueError(f"bad vector entry {chunk!r}; expected arc:coeff")
            coords.append((label.strip(), int(coeff)))
        return cls(coords)

    def __getitem__(self, k: str) -> int:
        return self._c.get(k, 0)

    def __iter__(self) -> Iterator[str]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __contains__(self, k) -> bool:
        return k in self._c

    def __eq__(self, other) -> bool:
        if isinstance(other, LatticeVec):
            return self._key == other._key
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key)

    def sort_key(self) -> tuple:
        return self._key

    def __lt__(self, other: "LatticeVec") -> bool:
        return self._key < other._key

    def is_zero(self) -> bool:
        return not self._c

    def __add__(self, other: "LatticeVec") -> "LatticeVec":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, 0) + v
        return LatticeVec(out)

    def __neg__(self) -> "LatticeVec":
        return LatticeVec({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "LatticeVec") -> "LatticeVec":
        return self + (-other)

    def __mul__(self, n: int) -> "LatticeVec":
        return LatticeVec({k: n * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def halve(self) -> "LatticeVec | None":
        """Return ``self / 2`` if every coordinate is even, else ``None``."""
        if any(v % 2 for v in self._c.values()):
            return None
        return LatticeVec({k: v // 2 for k, v in self._c.items()})

    def to_json(self) -> dict[str, int]:
        return dict(self._c)

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for k, v in self._c.items():
            if v == 1:
                parts.append(f"+{k}")
            elif v == -1:
                parts.append(f"-{k}")
            else:
                parts.append(f"{v:+d}*{k}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


ZERO_VEC = LatticeVec()


def vec(**coords: int) -> LatticeVec:
    """Convenience constructor: ``vec(a=1, b=2)``."""
    return LatticeVec(coords)


# ---------------------------------------------------------------------------
# skew lattices


class SkewLattice:
    """Lattice with basis indexed by arcs and skew form ``<v_i, v_j> = eps_ij``.

    ``frozen`` marks basis labels that may not be mutated (boundary arcs) and
    ``self_folded`` marks self-folded arcs; both are optional metadata used by
    matrix mutation.
    """

    def __init__(
        self,
        labels: Iterable[str],
        pairing: Mapping[tuple[str, str], int] | Mapping[str, Mapping[str, int]],
        frozen: Iterable[str] = (),
        self_folded: Iterable[str] = (),
    ):
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self._index = {k: n for n, k in enumerate(self.labels)}
        rows: dict[str, dict[str, int]] = {k: {} for k in self.labels}
        entries: Iterable[tuple[tuple[str, str], int]]
        if pairing and isinstance(next(iter(pairing.values())), Mapping):
            entries = (((i, j), e) for i, row in pairing.items() for j, e in row.items())
        else:
            entries = pairing.items()
        for (i, j), e in entries:
            if i not in self._index or j not in self._index:
                raise KeyError(f"pairing entry ({i}, {j}) outside the basis")
            if not e:
                continue
            if i == j:
                raise ValueError(f"nonzero diagonal pairing at {i}")
            prev = rows[i].get(j)
            if prev is not None and prev != e:
                raise ValueError(f"inconsistent pairing entry ({i}, {j})")
            rows[i][j] = int(e)
            back = rows[j].get(i)
            if back is not None and back != -e:
                raise ValueError(f"pairing is not antisymmetric at ({i}, {j})")
            rows[j][i] = -int(e)
        self._rows = rows
        self.frozen = frozenset(frozen)
        self.self_folded = frozenset(self_folded)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def eps(self, i: str, j: str) -> int:
        if i not in self._index or j not in self._index:
            raise KeyError(f"unknown basis label {i if i not in self._index else j!r}")
        return self._rows[i].get(j, 0)

    def row(self, i: str) -> dict[str, int]:
        return dict(self._rows[i])

    def check(self, v: LatticeVec) -> None:
        for k in v:
            if k not in self._index:
                raise KeyError(f"unknown basis label {k!r}")

    def pair(self, v: LatticeVec, w: LatticeVec) -> int:
        total = 0
        for i, a in v.items():
            row = self._rows.get(i)
            if row is None:
                raise KeyError(f"unknown basis label {i!r}")
            for j, b in w.items():
                if j not in self._index:
                    raise KeyError(f"unknown basis label {j!r}")
                e = row.get(j)
                if e:
                    total += a * b * e
        return total

    def in_radical(self, v: LatticeVec) -> bool:
        return all(self.pair(v, LatticeVec.basis(k)) == 0 for k in self.labels)

    def matrix(self) -> list[list[int]]:
        return [[self.eps(i, j) for j in self.labels] for i in self.labels]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewLattice):
            return NotImplemented
        return set(self.labels) == set(other.labels) and all(
            self._rows[k] == other._rows[k] for k in self.labels
        )

    def __hash__(self) -> int:
        return hash(tuple(sorted((k, tuple(sorted(r.items()))) for k, r in self._rows.items())))

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "eps": {i: dict(sorted(r.items())) for i, r in self._rows.items() if r}}

    def __repr__(self) -> str:
        return f"SkewLattice({len(self.labels)} arcs)"


def pair(lattice: SkewLattice, v: LatticeVec, w: LatticeVec) -> int:
    """``<v, w> = sum_ij v_i w_j eps_ij``."""
    return lattice.pair(v, w)


# ---------------------------------------------------------------------------
# quantum torus


class QTorusElement:
    """Finite sum ``sum_v c_v(omega) Z_v`` in the quantum torus of a lattice."""

    __slots__ = ("lattice", "_terms")

    def __init__(self, lattice: SkewLattice, terms: Mapping[LatticeVec, IntLike] | None = None):
        self.lattice = lattice
        clean: dict[LatticeVec, OmegaPoly] = {}
        if terms:
            for v, c in terms.items():
                c = OmegaPoly.coerce(c)
                if c:
                    lattice.check(v)
                    clean[v] = c
        self._terms = dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def _raw(cls, lattice: SkewLattice, acc: dict[LatticeVec, OmegaPoly]) -> "QTorusElement":
        obj = cls.__new__(cls)
        obj.lattice = lattice
        obj._terms = dict(sorted(((v, c) for v, c in acc.items() if c), key=lambda kv: kv[0].sort_key()))
        return obj

    @classmethod
    def zero(cls, lattice: SkewLattice) -> "QTorusElement":
        return cls(lattice)

    @classmethod
    def one(cls, lattice: SkewLattice) -> "QTorusElement":
        return cls(lattice, {ZERO_VEC: ONE})

    @property
    def terms(self) -> dict[LatticeVec, OmegaPoly]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list[LatticeVec]:
        return list(self._terms)

    def coeff(self, v: LatticeVec) -> OmegaPoly:
        return self._terms.get(v, OmegaPoly())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other: "QTorusElement") -> None:
        if other.lattice is not self.lattice and other.lattice != self.lattice:
            raise LatticeMismatch("quantum torus elements live on different lattices")

    def __eq__(self, other) -> bool:
        if not isinstance(other, QTorusElement):
            return NotImplemented
        return self.lattice == other.lattice and self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __add__(self, other: "QTorusElement") -> "QTorusElement":
        self._same(other)
        acc = dict(self._terms)
        for v, c in other._terms.items():
            acc[v] = acc[v] + c if v in acc else c
        return QTorusElement._raw(self.lattice, acc)

    def __neg__(self) -> "QTorusElement":
        return QTorusElement._raw(self.lattice, {v: -c for v, c in self._terms.items()})

    def __sub__(self, other: "QTorusElement") -> "QTorusElement":
        return self + (-other)

    def scale(self, c: IntLike) -> "QTorusElement":
        c = OmegaPoly.coerce(c)
        return QTorusElement._raw(self.lattice, {v: c * a for v, a in self._terms.items()})

    def __mul__(self, other: "QTorusElement") -> "QTorusElement":
        if isinstance(other, (int, OmegaPoly)):
            return self.scale(other)
        self._same(other)
        lat = self.lattice
        acc: dict[LatticeVec, OmegaPoly] = {}
        for v, c in self._terms.items():
            for w, d in other._terms.items():
                u = v + w
                term = (c * d).shift(lat.pair(v, w))
                acc[u] = acc[u] + term if u in acc else term
        return QTorusElement._raw(lat, acc)

    def __rmul__(self, other: IntLike) -> "QTorusElement":
        return self.scale(other)

    def star(self) -> "QTorusElement":
        # Z_v is fixed and omega is inverted; on a single monomial this is an
        # anti-automorphism because Z_v Z_w and Z_w Z_v differ by omega^{2<v,w>}.
        return QTorusElement._raw(self.lattice, {v: c.star() for v, c in self._terms.items()})

    def specialize_omega1(self) -> dict[LatticeVec, int]:
        out = {}
        for v, c in self._terms.items():
            n = c.at_one()
            if n:
                out[v] = n
        return out

    def to_json(self) -> list[dict]:
        return [{"v": v.to_json(), "c": c.to_json()} for v, c in self._terms.items()]

    @classmethod
    def from_json(cls, lattice: SkewLattice, data: Iterable[Mapping]) -> "QTorusElement":
        acc: dict[LatticeVec, OmegaPoly] = {}
        for entry in data:
            v = LatticeVec(entry.get("v", {}))
            c = OmegaPoly.from_json(entry.get("c", {"0": 1}))
            acc[v] = acc[v] + c if v in acc else c
        return cls(lattice, acc)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for v, c in self._terms.items():
            coeff = "" if c == ONE else f"({c})"
            parts.append(f"{coeff}Z[{v!r}]")
        return " + ".join(parts)


def monomial(lattice: SkewLattice, v: LatticeVec, coeff: IntLike = 1) -> QTorusElement:
    """The element ``coeff * Z_v``."""
    return QTorusElement(lattice, {v: coeff})


def mul(x: QTorusElement, y: QTorusElement) -> QTorusElement:
    return x * y


def star(x: QTorusElement) -> QTorusElement:
    return x.star()


def weyl_order(lattice: SkewLattice, word: Iterable[tuple[LatticeVec, int]]) -> QTorusElement:
    """Weyl-ordered monomial ``[Z_{u_1}^{a_1} ... Z_{u_n}^{a_n}]``.

    This is ``omega^{-sum_{j<k} a_j a_k <u_j, u_k>}`` times the left-to-right
    product, which always equals ``Z_{sum a_j u_j}``.
    """
    total = ZERO_VEC
    for u, a in word:
        lattice.check(u)
        total = total + u * a
    return monomial(lattice, total)


def specialize_omega1(x: QTorusElement) -> dict[LatticeVec, int]:
    return x.specialize_omega1()


# ---------------------------------------------------------------------------
# exact linear algebra


def _matrix(labels: list[str], gens: Iterable[LatticeVec]) -> sympy.Matrix:
    cols = [[g[k] for k in labels] for g in gens]
    if not cols:
        return sympy.zeros(len(labels), 0)
    return sympy.Matrix(cols).T


def span_intersection_basis(
    gens1: Iterable[LatticeVec], gens2: Iterable[LatticeVec]
) -> list[dict[str, Fraction]]:
    """Basis of ``span_Q(gens1) ∩ span_Q(gens2)`` as rational coordinate maps."""
    g1, g2 = list(gens1), list(gens2)
    labels = sorted({k for g in g1 + g2 for k in g})
    if not g1 or not g2 or not labels:
        return []
    a = _matrix(labels, g1)
    b = _matrix(labels, g2)
    # x in both spans  <=>  x = A s = B t  <=>  [A | -B] (s, t) = 0
    kernel = a.row_join(-b).nullspace()
    vecs = [a * k[: a.shape[1], :] for k in kernel]
    if not vecs:
        return []
    basis = sympy.Matrix.hstack(*vecs).columnspace()
    out = []
    for col in basis:
        out.append({lab: Fraction(int(x.p), int(x.q)) for lab, x in zip(labels, col) if x != 0})
    return out


def span_intersection_in_radical(
    lattice: SkewLattice, gens1: Iterable[LatticeVec], gens2: Iterable[LatticeVec]
) -> bool:
    """True iff every vector in ``span(gens1) ∩ span(gens2)`` is in the radical."""
    for b in span_intersection_basis(gens1, gens2):
        for k in lattice.labels:
            s = Fraction(0)
            for i, x in b.items():
                s += x * lattice.eps(i, k)
            if s != 0:
                return False
    return True
