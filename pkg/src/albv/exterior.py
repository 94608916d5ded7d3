"""Graded exterior algebra over a fixed global frame, with Poly coefficients.

Elements live on one of two mutually dual sides: side ``"A"`` (frame
``e_1..e_n``, multivector-like) or side ``"A*"`` (coframe ``eps_1..eps_n``,
form-like).  Components are stored densely on strictly increasing 0-based
index tuples.

Sign conventions, pinned once and used everywhere downstream:

* wedge picks up the parity of the merge that sorts the concatenated index
  tuples;
* the pairing of basis monomials is the determinant of the degree-1 pairings,
  which on increasing tuples reduces to a Kronecker delta:
  ``<eps_I, e_J> = delta_IJ``;
* contraction is the adjoint of left wedge multiplication:
  ``pairing(omega, contract(theta, v)) = pairing(wedge(theta, omega), v)``
  for every test element ``omega``, and symmetrically when a multivector is
  contracted into a form;
* ``star(omega) = contract(omega, volume)`` and ``star_inv`` is its exact
  inverse.

Degree-0 elements are shared scalars; contraction by a degree-0 element is
multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .linalg import mat_inv, mat_transpose
from .poly import Poly

__all__ = [
    "A_SIDE",
    "DUAL_SIDE",
    "GradedElem",
    "Volume",
    "dual_side",
    "as_side",
    "wedge",
    "graded_sum",
    "pairing",
    "contract",
    "contract_or_zero",
    "star",
    "star_inv",
    "frame_change_elem",
    "frame_elem",
    "coframe_elem",
    "scalar_elem",
    "top_elem",
    "basis_tuples",
    "shuffle_sign",
    "sort_with_sign",
]

A_SIDE = "A"
DUAL_SIDE = "A*"


def dual_side(side):
    if side == A_SIDE:
        return DUAL_SIDE
    if side == DUAL_SIDE:
        return A_SIDE
    raise ValueError("unknown side %r" % (side,))


def shuffle_sign(left, right) -> int:
    """Sign of sorting the concatenation of two disjoint increasing tuples."""
    inversions = 0
    for a in left:
        for b in right:
            if a > b:
                inversions += 1
    return -1 if inversions % 2 else 1


def sort_with_sign(indices):
    """Sort an index tuple, returning (sorted tuple, sign); sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


def basis_tuples(rank, degree):
    """All strictly increasing index tuples of the given length, in lex order."""
    return list(combinations(range(rank), degree))


class GradedElem:
    """A homogeneous element of the exterior algebra on one side.

    ``components`` maps strictly increasing index tuples of length ``degree``
    to Poly coefficients; zero coefficients are dropped.
    """

    __slots__ = ("side", "degree", "rank", "variables", "components")

    def __init__(self, side, degree, rank, variables, components=None):
        if side not in (A_SIDE, DUAL_SIDE):
            raise ValueError("unknown side %r" % (side,))
        if degree < 0:
            raise ValueError("negative degree %d" % degree)
        self.side = side
        self.degree = int(degree)
        self.rank = int(rank)
        self.variables = tuple(variables)
        clean = {}
        if components:
            for idx, coeff in components.items():
                idx = tuple(int(i) for i in idx)
                if len(idx) != self.degree:
                    raise ValueError(
                        "index tuple %r has length %d, expected degree %d"
                        % (idx, len(idx), self.degree)
                    )
                if any(not 0 <= i < self.rank for i in idx):
                    raise ValueError("index tuple %r out of range" % (idx,))
                if any(a >= b for a, b in zip(idx, idx[1:])):
                    raise ValueError("index tuple %r is not strictly increasing" % (idx,))
                if not isinstance(coeff, Poly):
                    coeff = Poly.constant(coeff, self.variables)
                if coeff.variables != self.variables:
                    raise ValueError(
                        "variable-list mismatch: %r vs %r"
                        % (coeff.variables, self.variables)
                    )
                if not coeff.is_zero:
                    clean[idx] = clean.get(idx, Poly.zero(self.variables)) + coeff
                    if clean[idx].is_zero:
                        del clean[idx]
        self.components = dict(sorted(clean.items()))

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, side, degree, rank, variables):
        return cls(side, degree, rank, variables)

    @property
    def is_zero(self):
        return not self.components

    def coefficient(self, idx) -> Poly:
        return self.components.get(tuple(idx), Poly.zero(self.variables))

    def scalar(self) -> Poly:
        """The coefficient of a degree-0 element."""
        if self.degree != 0:
            raise ValueError("element has degree %d, not 0" % self.degree)
        return self.coefficient(())

    # -- linear structure --------------------------------------------------

    def _check_compatible(self, other):
        if (
            self.side != other.side
            or self.degree != other.degree
            or self.rank != other.rank
            or self.variables != other.variables
        ):
            raise ValueError(
                "incompatible elements: side %s deg %d vs side %s deg %d"
                % (self.side, self.degree, other.side, other.degree)
            )

    def __add__(self, other):
        if not isinstance(other, GradedElem):
            return NotImplemented
        self._check_compatible(other)
        comps = dict(self.components)
        for idx, coeff in other.components.items():
            comps[idx] = comps.get(idx, Poly.zero(self.variables)) + coeff
        return GradedElem(self.side, self.degree, self.rank, self.variables, comps)

    def __neg__(self):
        return GradedElem(
            self.side,
            self.degree,
            self.rank,
            self.variables,
            {i: -c for i, c in self.components.items()},
        )

    def __sub__(self, other):
        if not isinstance(other, GradedElem):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction, Poly)):
            return GradedElem(
                self.side,
                self.degree,
                self.rank,
                self.variables,
                {i: c * scalar for i, c in self.components.items()},
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, GradedElem):
            return NotImplemented
        return (
            self.side == other.side
            and self.degree == other.degree
            and self.rank == other.rank
            and self.variables == other.variables
            and self.components == other.components
        )

    def __bool__(self):
        return bool(self.components)

    def __repr__(self):
        return "GradedElem(%s, deg=%d, %s)" % (self.side, self.degree, str(self))

    def __str__(self):
        if not self.components:
            return "0"
        sym = "e" if self.side == A_SIDE else "eps"
        chunks = []
        for idx, coeff in self.components.items():
            body = "^".join("%s%d" % (sym, i + 1) for i in idx) or "1"
            chunks.append("(%s)%s" % (coeff, " " + body if idx else ""))
        return " + ".join(chunks)

    # -- weight grading ----------------------------------------------------

    def weight_parts(self):
        """Split by total coefficient degree, as {weight: GradedElem}."""
        buckets = {}
        for idx, coeff in self.components.items():
            for w, part in coeff.homogeneous_parts().items():
                buckets.setdefault(w, {})[idx] = part
        return {
            w: GradedElem(self.side, self.degree, self.rank, self.variables, comps)
            for w, comps in sorted(buckets.items())
        }

    def max_coeff_degree(self) -> int:
        if self.is_zero:
            return -1
        return max(c.degree() for c in self.components.values())


@dataclass(frozen=True)
class Volume:
    """A nowhere-zero top section ``coeff * e_1 ^ ... ^ e_n`` (constant coeff)."""

    coeff: Fraction
    rank: int
    variables: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.coeff == 0:
            raise ValueError("volume coefficient must be nonzero")

    def as_elem(self, side=A_SIDE) -> GradedElem:
        return GradedElem(
            side,
            self.rank,
            self.rank,
            self.variables,
            {tuple(range(self.rank)): Poly.constant(self.coeff, self.variables)},
        )


# -- basis helpers ---------------------------------------------------------


def frame_elem(i, rank, variables) -> GradedElem:
    return GradedElem(A_SIDE, 1, rank, variables, {(i,): Poly.constant(1, variables)})


def coframe_elem(i, rank, variables) -> GradedElem:
    return GradedElem(DUAL_SIDE, 1, rank, variables, {(i,): Poly.constant(1, variables)})


def scalar_elem(poly, side, rank) -> GradedElem:
    if not isinstance(poly, Poly):
        raise TypeError("scalar_elem expects a Poly")
    return GradedElem(side, 0, rank, poly.variables, {(): poly})


def top_elem(rank, variables, side=A_SIDE, coeff=1) -> GradedElem:
    return GradedElem(
        side, rank, rank, variables, {tuple(range(rank)): Poly.constant(coeff, variables)}
    )


def as_side(elem, side) -> GradedElem:
    """Reinterpret an element on the other side, keeping its components.

    Useful when an algebroid structure on the dual bundle is in play: the
    forms of the dual structure are exactly the multivectors of the original.
    """
    if side == elem.side:
        return elem
    return GradedElem(side, elem.degree, elem.rank, elem.variables, elem.components)


# -- multiplicative structure ---------------------------------------------


def graded_sum(*elems) -> GradedElem:
    """Sum that tolerates zero summands of the wrong degree.

    Operator chains that bottom out (a contraction overflowing, an operator
    hitting degree zero) return zero elements whose recorded degree may not
    match the other summands.  Such zeros are absorbed; nonzero summands must
    still agree in degree.
    """
    if not elems:
        raise ValueError("graded_sum needs at least one element")
    out = elems[0]
    for elem in elems[1:]:
        if out.is_zero and out.degree != elem.degree:
            out = elem
        elif elem.is_zero and elem.degree != out.degree:
            continue
        else:
            out = out + elem
    return out


def wedge(u, v) -> GradedElem:
    """Exterior product of two elements on the same side."""
    if u.side != v.side:
        raise ValueError("wedge requires elements on the same side")
    if u.rank != v.rank or u.variables != v.variables:
        raise ValueError("wedge requires a shared frame")
    out = {}
    for iu, cu in u.components.items():
        for iv, cv in v.components.items():
            if set(iu) & set(iv):
                continue
            sign = shuffle_sign(iu, iv)
            target = tuple(sorted(iu + iv))
            coeff = cu * cv * sign
            out[target] = out.get(target, Poly.zero(u.variables)) + coeff
    return GradedElem(u.side, u.degree + v.degree, u.rank, u.variables, out)


def pairing(theta, u) -> Poly:
    """Determinant pairing of equal-degree elements on opposite sides."""
    if theta.side == u.side:
        raise ValueError("pairing requires elements on opposite sides")
    if theta.degree != u.degree:
        raise ValueError(
            "pairing requires equal degrees, got %d and %d" % (theta.degree, u.degree)
        )
    if theta.rank != u.rank or theta.variables != u.variables:
        raise ValueError("pairing requires a shared frame")
    total = Poly.zero(u.variables)
    for idx, coeff in theta.components.items():
        other = u.components.get(idx)
        if other is not None:
            total = total + coeff * other
    return total


def contract(theta, v) -> GradedElem:
    """Contraction of ``theta`` into ``v`` (opposite sides, deg theta <= deg v).

    Defined by adjointness against the wedge:
    ``pairing(omega, contract(theta, v)) = pairing(wedge(theta, omega), v)``.
    On basis monomials this sends ``e_J`` to ``sign * e_{J minus I}`` where the
    sign sorts the concatenation of ``I`` and ``J minus I`` into ``J``.
    """
    if theta.side == v.side:
        raise ValueError("contraction requires elements on opposite sides")
    if theta.rank != v.rank or theta.variables != v.variables:
        raise ValueError("contraction requires a shared frame")
    if theta.degree > v.degree:
        raise ValueError(
            "degree overflow: cannot contract degree %d into degree %d"
            % (theta.degree, v.degree)
        )
    out = {}
    for it, ct in theta.components.items():
        wanted = set(it)
        for iv, cv in v.components.items():
            if not wanted <= set(iv):
                continue
            rest = tuple(i for i in iv if i not in wanted)
            sign = shuffle_sign(it, rest)
            coeff = ct * cv * sign
            out[rest] = out.get(rest, Poly.zero(v.variables)) + coeff
    return GradedElem(v.side, v.degree - theta.degree, v.rank, v.variables, out)


def contract_or_zero(theta, v) -> GradedElem:
    """Like contract, but a degree overflow yields zero instead of an error."""
    if theta.degree > v.degree:
        return GradedElem.zero(v.side, 0, v.rank, v.variables)
    return contract(theta, v)


def star(omega, vol: Volume) -> GradedElem:
    """Contraction into the volume: an iso from degree k to codegree k."""
    if omega.rank != vol.rank or omega.variables != vol.variables:
        raise ValueError("star requires a shared frame")
    return contract(omega, vol.as_elem(dual_side(omega.side)))


def star_inv(u, vol: Volume) -> GradedElem:
    """Exact inverse of ``star``: the unique omega with star(omega) == u."""
    if u.rank != vol.rank or u.variables != vol.variables:
        raise ValueError("star_inv requires a shared frame")
    n = vol.rank
    out = {}
    full = set(range(n))
    for idx, coeff in u.components.items():
        pre = tuple(sorted(full - set(idx)))
        sign = shuffle_sign(pre, idx)
        out[pre] = coeff * Fraction(sign) / vol.coeff
    return GradedElem(
        dual_side(u.side), n - u.degree, n, u.variables, out
    )


# -- frame changes ---------------------------------------------------------


def _minor_det(mat, rows, cols):
    k = len(rows)
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(mat[rows[0]][cols[0]])
    total = Fraction(0)
    for pos, r in enumerate(rows):
        entry = mat[r][cols[0]]
        if entry == 0:
            continue
        sub_rows = rows[:pos] + rows[pos + 1 :]
        sign = -1 if pos % 2 else 1
        total += sign * Fraction(entry) * _minor_det(mat, sub_rows, cols[1:])
    return total


def frame_change_elem(g, elem) -> GradedElem:
    """Transform components under the constant frame automorphism ``g``.

    Degree-1 components on side A map by ``g``; side A* components map by the
    inverse transpose, so that every pairing is preserved.  Higher degrees use
    the induced exterior-power action (minor determinants of the matrix).
    """
    n = elem.rank
    if len(g) != n or any(len(row) != n for row in g):
        raise ValueError("frame matrix must be %d x %d" % (n, n))
    mat = [[Fraction(x) for x in row] for row in g]
    if elem.side == DUAL_SIDE:
        mat = mat_transpose(mat_inv(mat))
    out = {}
    for target in basis_tuples(n, elem.degree):
        total = Poly.zero(elem.variables)
        for idx, coeff in elem.components.items():
            minor = _minor_det(mat, target, idx)
            if minor != 0:
                total = total + coeff * minor
        if not total.is_zero:
            out[target] = total
    return GradedElem(elem.side, elem.degree, n, elem.variables, out)
