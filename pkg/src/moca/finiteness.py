"""Invertibility certificates over finite monoids via the regular action.

A d x d matrix over the monoid algebra acts on tuples indexed by (element,
component); for a finite monoid of order n that action is an ordinary
nd x nd scalar matrix.  Basis order is element-major: slot (m, i) sits at
row n_index(m)*d + i.  Row vectors act on the left, so the flattening of a
product is the product of the flattenings in the same order.

Over a finite monoid a one-sided inverse is always two-sided; certify_two_sided
checks a claimed pair both directly and through the rank of the flattening.
The two-generator monoid with pq = 1 is the stock counterexample once the
finiteness hypothesis is dropped, and bicyclic_witness packages it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgMatrix, alg_from_terms, mat_from_entries, mat_identity
from .errors import CarrierMismatch, NotFinite, ValidationError
from .fields import Scalar
from .monoids import bicyclic

__all__ = [
    "FlatMatrix",
    "flatten",
    "unflatten",
    "flat_identity",
    "flat_zero",
    "flat_mul",
    "gauss_rank",
    "CertifyReport",
    "certify_two_sided",
    "BicyclicWitness",
    "bicyclic_witness",
]


@dataclass(frozen=True)
class FlatMatrix:
    field: object
    size: int
    rows: tuple  # row-major, raw field values

    def __post_init__(self):
        if len(self.rows) != self.size or any(len(r) != self.size for r in self.rows):
            raise ValidationError("flat matrix is not square of the stated size")

    def entry(self, i, j):
        return Scalar(self.field, self.rows[i][j])

    def is_identity(self):
        f = self.field
        return all(self.rows[i][j] == (f.one_v if i == j else f.zero_v)
                   for i in range(self.size) for j in range(self.size))


def flatten(mat):
    """Scalar matrix of v -> v*A on the free module over a finite monoid."""
    monoid = mat.monoid
    if not monoid.is_finite():
        raise NotFinite(f"{monoid.spec_string()} is infinite")
    els = monoid.elements()
    idx = {e: i for i, e in enumerate(els)}
    field, d = mat.field, mat.d
    size = len(els) * d
    rows = [[field.zero_v] * size for _ in range(size)]
    for i in range(d):
        for j in range(d):
            for s, coeff in mat.entries[i][j].terms.items():
                for mp in els:
                    r = idx[s * mp] * d + i
                    c = idx[mp] * d + j
                    rows[r][c] = field.add_v(rows[r][c], coeff.v)
    return FlatMatrix(field, size, tuple(tuple(r) for r in rows))


def unflatten(flat, monoid, d):
    """Recover the algebra matrix from its flattening (identity column block)."""
    els = monoid.elements()
    field = flat.field
    if flat.size != len(els) * d:
        raise ValidationError("flat matrix size does not match monoid order and dimension")
    entries = []
    for i in range(d):
        row = []
        for j in range(d):
            pairs = [(s, Scalar(field, flat.rows[si * d + i][j]))
                     for si, s in enumerate(els)]
            row.append(alg_from_terms(field, monoid, pairs))
        entries.append(row)
    return mat_from_entries(field, monoid, entries)


def flat_identity(field, size):
    rows = tuple(tuple(field.one_v if i == j else field.zero_v for j in range(size))
                 for i in range(size))
    return FlatMatrix(field, size, rows)


def flat_zero(field, size):
    z = field.zero_v
    return FlatMatrix(field, size, tuple(tuple(z for _ in range(size))
                                         for _ in range(size)))


def flat_mul(a, b):
    if a.field != b.field:
        raise CarrierMismatch("flat matrices over different fields")
    if a.size != b.size:
        raise ValidationError("flat matrix sizes differ")
    f = a.field
    n = a.size
    bt = list(zip(*b.rows))
    out = []
    for i in range(n):
        arow = a.rows[i]
        orow = []
        for j in range(n):
            acc = f.zero_v
            bcol = bt[j]
            for k in range(n):
                acc = f.add_v(acc, f.mul_v(arow[k], bcol[k]))
            orow.append(acc)
        out.append(tuple(orow))
    return FlatMatrix(f, n, tuple(out))


def gauss_rank(flat):
    """Exact row-echelon rank; no pivot tolerance, any exact field."""
    f = flat.field
    n = flat.size
    rows = [list(r) for r in flat.rows]
    rank = 0
    for col in range(n):
        pivot = None
        for r in range(rank, n):
            if rows[r][col] != f.zero_v:
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = f.inv_v(rows[rank][col])
        rows[rank] = [f.mul_v(inv, x) for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][col] != f.zero_v:
                factor = rows[r][col]
                rows[r] = [f.sub_v(x, f.mul_v(factor, y))
                           for x, y in zip(rows[r], rows[rank])]
        rank += 1
        if rank == n:
            break
    return rank


@dataclass(frozen=True)
class CertifyReport:
    ok: bool
    right_product_identity: bool  # B*A == I, the claim being certified
    flat_rank: int
    flat_size: int
    flat_full_rank: bool
    witness: tuple | None  # (i, j, literal) of the first off entry of B*A

    def __bool__(self):
        return self.ok


def certify_two_sided(a, b):
    """Given A*B = I over a finite monoid, confirm B*A = I two ways.

    The direct route multiplies the matrices; the independent route checks
    that the flattening of A has full rank.  A*B != I or an infinite monoid
    is an input error, not a negative verdict.
    """
    if a.monoid != b.monoid or a.field != b.field:
        raise CarrierMismatch("matrices over different carriers")
    if a.d != b.d:
        raise ValidationError("matrix dimensions differ")
    if not a.monoid.is_finite():
        raise NotFinite("certification runs the regular action; the monoid must be finite")
    ident = mat_identity(a.field, a.monoid, a.d)
    if a * b != ident:
        raise ValidationError("A*B is not the identity", witness=(a * b))
    ba = b * a
    direct = ba == ident
    witness = None
    if not direct:
        for i in range(a.d):
            for j in range(a.d):
                want = ident.entries[i][j]
                if ba.entries[i][j] != want:
                    witness = (i, j, str(ba.entries[i][j]))
                    break
            if witness:
                break
    fa = flatten(a)
    rank = gauss_rank(fa)
    full = rank == fa.size
    return CertifyReport(direct and full, direct, rank, fa.size, full, witness)


@dataclass(frozen=True)
class BicyclicWitness:
    a: AlgMatrix
    b: AlgMatrix
    left_identity: bool   # A*B == I
    right_identity: bool  # B*A == I
    residual: str         # literal of (B*A)[0][0]

    def __bool__(self):
        return self.left_identity and not self.right_identity


def bicyclic_witness(field):
    """One-sided inverse pair A=[p], B=[q]: A*B = I but B*A != I."""
    m = bicyclic()
    one = field.one
    a = mat_from_entries(field, m, [[alg_from_terms(field, m, [(m.p, one)])]])
    b = mat_from_entries(field, m, [[alg_from_terms(field, m, [(m.q, one)])]])
    ab = a * b
    ba = b * a
    ident = mat_identity(field, m, 1)
    return BicyclicWitness(a, b, ab == ident, ba == ident, str(ba.entries[0][0]))
