"""One-sided invertibility as a polynomial system, plus a brute-force solver.

Given a monoid, an ordered support list S, and a dimension d, the system
asks for d x d matrices A (variables x[i,j,s]) and B (variables y[i,j,s])
with entries supported on S such that A*B = I while B*A != I.  Expanding
the convolution, A*B = I becomes one equation per (i, j, m) with m ranging
over the product set S*S:

    sum_k sum_{s*t = m} x[i,k,s] * y[k,j,t]  =  (1 if i = j and m = 1 else 0)

The negated block is the same family with the roles of X and Y swapped,
and a model must falsify at least one of its equations.  Everything is
determined by d, |S|, and the partial multiplication table on S; the
monoid beyond that never enters.

If the identity is not a product of two support elements the diagonal
equations have an empty left side and can never equal 1; they are kept,
flagged, so the inevitable UNSAT is visibly structural rather than an
artifact of search.

The solver enumerates all assignments in lexicographic order of the rank
sequence (first variable most significant) and returns the least model.
Chunked multi-process scans return the same model and the same statistics
as the sequential scan.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .algebra import mat_from_entries, mat_identity, alg_from_terms
from .errors import BudgetExceeded, NotFinite, ParseError, ValidationError
from .fields import Scalar
from .monoids import canonical_sorted

__all__ = [
    "Equation",
    "SentenceSpec",
    "PolySystem",
    "build_sentence",
    "SolveResult",
    "find_model",
    "decode_witness",
    "CheckReport",
    "check_model",
    "emit_text",
    "emit_json",
    "parse_system_json",
    "with_field",
    "DEFAULT_SENTENCE_BUDGET",
]

DEFAULT_SENTENCE_BUDGET = 2**24

# below this assignment-space size a worker pool costs more than it saves
_PARALLEL_MIN = 4096


@dataclass(frozen=True)
class Equation:
    label: tuple      # (i, j, element name)
    monomials: tuple  # pairs (x variable index, y variable index)
    rhs: int          # 0 or 1, as a scalar rank
    impossible: bool = False


@dataclass(frozen=True)
class SentenceSpec:
    d: int
    support_names: tuple
    x_names: tuple
    y_names: tuple
    diagonal: tuple  # labels (i, i, identity name)


@dataclass(frozen=True)
class PolySystem:
    var_names: tuple
    equations: tuple
    negated: tuple
    meta: dict

    @property
    def nvars(self):
        return len(self.var_names)


def build_sentence(monoid, support, d):
    """Compile the system for matrices supported on the given ordered set."""
    support = tuple(support)
    if not support:
        raise ValidationError("support must be nonempty")
    if d < 1:
        raise ValidationError("dimension must be at least 1")
    if len({s.key for s in support}) != len(support):
        raise ValidationError("support has repeated elements")
    for s in support:
        if s.monoid != monoid:
            raise ValidationError("support element from a different monoid")
    ns = len(support)
    names = [str(s) for s in support]
    nx = d * d * ns

    def xv(i, j, si):
        return (i * d + j) * ns + si

    def yv(i, j, si):
        return nx + (i * d + j) * ns + si

    x_names = tuple(f"x[{i},{j},{names[si]}]"
                    for i in range(d) for j in range(d) for si in range(ns))
    y_names = tuple(f"y[{i},{j},{names[si]}]"
                    for i in range(d) for j in range(d) for si in range(ns))

    pairs_by_m = {}
    for si in range(ns):
        for ti in range(ns):
            m = support[si] * support[ti]
            pairs_by_m.setdefault(m, []).append((si, ti))
    s_square = canonical_sorted(pairs_by_m.keys())
    ident = monoid.identity
    has_ident = ident in pairs_by_m

    equations = []
    negated = []
    for i in range(d):
        for j in range(d):
            if i == j and not has_ident:
                label = (i, j, str(ident))
                equations.append(Equation(label, (), 1, True))
                negated.append(Equation(label, (), 1, True))
            for m in s_square:
                label = (i, j, str(m))
                rhs = 1 if (i == j and m == ident) else 0
                pos = []
                neg = []
                for k in range(d):
                    for si, ti in pairs_by_m[m]:
                        pos.append((xv(i, k, si), yv(k, j, ti)))
                        neg.append((xv(k, j, ti), yv(i, k, si)))
                equations.append(Equation(label, tuple(pos), rhs))
                negated.append(Equation(label, tuple(neg), rhs))

    spec = SentenceSpec(d, tuple(names), x_names, y_names,
                        tuple((i, i, str(ident)) for i in range(d)))
    system = PolySystem(x_names + y_names, tuple(equations), tuple(negated),
                        {"d": d, "support": list(names), "field": None})
    return spec, system


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    witness_index: int | None
    assignment: tuple | None  # variable ranks, in var_names order
    matrix_a: object | None
    matrix_b: object | None
    space: int
    reason: str | None = None


def _eval_blocks(digits, pos_eqs, neg_eqs, add_t, mul_t):
    for mono, rhs in pos_eqs:
        acc = 0
        for xi, yi in mono:
            acc = add_t[acc][mul_t[digits[xi]][digits[yi]]]
        if acc != rhs:
            return False
    for mono, rhs in neg_eqs:
        acc = 0
        for xi, yi in mono:
            acc = add_t[acc][mul_t[digits[xi]][digits[yi]]]
        if acc != rhs:
            return True
    return False


def _scan_range(args):
    pos_eqs, neg_eqs, add_t, mul_t, q, nvars, start, end = args
    digits = [0] * nvars
    idx = start
    for pos in range(nvars - 1, -1, -1):
        digits[pos] = idx % q
        idx //= q
    for i in range(start, end):
        if _eval_blocks(digits, pos_eqs, neg_eqs, add_t, mul_t):
            return i
        for pos in range(nvars - 1, -1, -1):
            digits[pos] += 1
            if digits[pos] < q:
                break
            digits[pos] = 0
    return None


def find_model(system, field, context=None, budget=DEFAULT_SENTENCE_BUDGET,
               workers=1):
    """Exhaustive search for the least model of the system over a finite field.

    `context`, when given, is a pair (monoid, support elements) matching the
    system; the witness is then decoded into matrices and re-verified by
    matrix arithmetic before being returned.
    """
    if not field.is_finite():
        raise NotFinite("model search needs a finite field")
    nvars = system.nvars
    q = field.order
    space = q ** nvars
    if space > budget:
        raise BudgetExceeded(space, budget, "assignment space")
    if any(eq.impossible for eq in system.equations):
        return SolveResult(False, None, None, None, None, space,
                           reason="identity is not a product of two support elements")
    add_t, mul_t = field.rank_tables()
    pos_eqs = tuple((eq.monomials, eq.rhs) for eq in system.equations)
    neg_eqs = tuple((eq.monomials, eq.rhs) for eq in system.negated)

    hit = None
    if workers <= 1 or space < _PARALLEL_MIN:
        hit = _scan_range((pos_eqs, neg_eqs, add_t, mul_t, q, nvars, 0, space))
    else:
        workers = max(1, min(int(workers), 16))
        bounds = [space * k // workers for k in range(workers + 1)]
        jobs = [(pos_eqs, neg_eqs, add_t, mul_t, q, nvars, bounds[k], bounds[k + 1])
                for k in range(workers) if bounds[k] < bounds[k + 1]]
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            for result in pool.map(_scan_range, jobs):
                if result is not None:
                    hit = result
                    break

    if hit is None:
        return SolveResult(False, None, None, None, None, space)
    digits = [0] * nvars
    idx = hit
    for pos in range(nvars - 1, -1, -1):
        digits[pos] = idx % q
        idx //= q
    assignment = tuple(digits)
    mat_a = mat_b = None
    if context is not None:
        monoid, support = context
        mat_a, mat_b = decode_witness(system, field, assignment, monoid, support)
        ident = mat_identity(field, monoid, system.meta["d"])
        if mat_a * mat_b != ident or mat_b * mat_a == ident:
            raise ValidationError("witness failed matrix re-verification",
                                  witness=(mat_a, mat_b))
    return SolveResult(True, hit, assignment, mat_a, mat_b, space)


def decode_witness(system, field, assignment, monoid, support):
    """Assignment ranks -> the matrix pair (A from x block, B from y block)."""
    support = tuple(support)
    d = system.meta["d"]
    ns = len(support)
    if system.nvars != 2 * d * d * ns:
        raise ValidationError("support does not match the system's variables")
    nx = d * d * ns

    def entry(base, i, j):
        pairs = [(support[si], field.unrank(assignment[base + (i * d + j) * ns + si]))
                 for si in range(ns)]
        return alg_from_terms(field, monoid, pairs)

    a = mat_from_entries(field, monoid, [[entry(0, i, j) for j in range(d)]
                                         for i in range(d)])
    b = mat_from_entries(field, monoid, [[entry(nx, i, j) for j in range(d)]
                                         for i in range(d)])
    return a, b


@dataclass(frozen=True)
class CheckReport:
    positive_ok: bool
    failed_positive: tuple | None   # first equality that fails, if any
    negation_ok: bool               # some swapped equation fails
    negation_witness: tuple | None  # label of that failing equation
    satisfied: bool


def check_model(system, field, assignment):
    """Evaluate both blocks with plain scalar arithmetic.

    `assignment` maps variable names to scalars; shares no code with the
    rank-table scanner.
    """
    missing = [n for n in system.var_names if n not in assignment]
    if missing:
        raise ValidationError(f"assignment misses variables: {', '.join(missing)}")
    vals = [assignment[n] for n in system.var_names]

    def eval_eq(eq):
        acc = field.zero
        for xi, yi in eq.monomials:
            acc = acc + vals[xi] * vals[yi]
        want = field.one if eq.rhs == 1 else field.zero
        return acc == want

    failed_positive = None
    for eq in system.equations:
        if not eval_eq(eq):
            failed_positive = eq.label
            break
    negation_witness = None
    for eq in system.negated:
        if not eval_eq(eq):
            negation_witness = eq.label
            break
    positive_ok = failed_positive is None
    negation_ok = negation_witness is not None
    return CheckReport(positive_ok, failed_positive, negation_ok,
                       negation_witness, positive_ok and negation_ok)


def _render_eq(system, eq, swapped):
    if eq.monomials:
        if swapped:
            terms = " + ".join(f"{system.var_names[yi]}*{system.var_names[xi]}"
                               for xi, yi in eq.monomials)
        else:
            terms = " + ".join(f"{system.var_names[xi]}*{system.var_names[yi]}"
                               for xi, yi in eq.monomials)
    else:
        terms = "0"
    i, j, m = eq.label
    line = f"  {terms} = {eq.rhs}   [{i},{j},{m}]"
    if eq.impossible:
        line += "   (unsatisfiable: empty sum)"
    return line


def emit_text(system):
    lines = ["∃ " + " ".join(system.var_names) + " :"]
    lines.append("P(X,Y):")
    for eq in system.equations:
        lines.append(_render_eq(system, eq, swapped=False))
    lines.append("∧ ¬P(Y,X):")
    for eq in system.negated:
        lines.append(_render_eq(system, eq, swapped=True))
    return "\n".join(lines) + "\n"


def _eq_to_obj(eq):
    obj = {
        "label": list(eq.label),
        "monomials": [[1, xi, yi] for xi, yi in eq.monomials],
        "rhs": eq.rhs,
    }
    if eq.impossible:
        obj["impossible"] = True
    return obj


def emit_json(system):
    obj = {
        "variables": list(system.var_names),
        "equations": [_eq_to_obj(eq) for eq in system.equations],
        "negated_block": [_eq_to_obj(eq) for eq in system.negated],
        "meta": system.meta,
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def with_field(system, field_spec):
    meta = dict(system.meta)
    meta["field"] = field_spec
    return replace(system, meta=meta)


def _eq_from_obj(obj):
    try:
        label = tuple(obj["label"])
        if len(label) != 3:
            raise ParseError("equation label must have three parts")
        monomials = []
        for mono in obj["monomials"]:
            coeff, xi, yi = mono
            if coeff != 1:
                raise ParseError("monomial coefficients must be 1")
            monomials.append((int(xi), int(yi)))
        rhs = int(obj["rhs"])
        if rhs not in (0, 1):
            raise ParseError("equation right side must be 0 or 1")
        return Equation((int(label[0]), int(label[1]), str(label[2])),
                        tuple(monomials), rhs, bool(obj.get("impossible", False)))
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed equation object: {e}") from None


def parse_system_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}") from None
    try:
        var_names = tuple(str(n) for n in obj["variables"])
        equations = tuple(_eq_from_obj(e) for e in obj["equations"])
        negated = tuple(_eq_from_obj(e) for e in obj["negated_block"])
        meta = dict(obj["meta"])
    except (KeyError, TypeError) as e:
        raise ParseError(f"missing or malformed field: {e}") from None
    if "d" not in meta or "support" not in meta:
        raise ParseError("meta must carry d and support")
    meta.setdefault("field", None)
    system = PolySystem(var_names, equations, negated, meta)
    for eq in equations + negated:
        for xi, yi in eq.monomials:
            if not (0 <= xi < system.nvars and 0 <= yi < system.nvars):
                raise ParseError("monomial variable index out of range")
    return system
