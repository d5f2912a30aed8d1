"""Centralizer algebras in the diagram basis: structure constants by
stacking and normalizing, the Brauer-algebra comparison for the
3-dimensional cases, and the faithfulness checks of the matrix model.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import CaseTag, CrossAlgebra
from .basis import enumerate_catalan, enumerate_webs
from .linalg import sparse_rank
from .oracle import DerivationAlgebra, derivations, equivariance_check
from .planar import planar_to_word
from .rewrite import eval_diagram, normalize
from .tangle import Generator, TangleWord, compose_tangles
from .tensor import compose, zero_map


class BudgetError(ValueError):
    pass


def centralizer_basis(alg: CrossAlgebra, n: int):
    """Basis diagrams of End(V^(x)n), ordered by canonical encoding."""
    if alg.case is CaseTag.DIM7:
        return enumerate_webs(n, n, budget=max(7, 2 * n))
    return [t.diagram for t in enumerate_catalan(n, n)]


class StructureTable:
    """Multiplication table basis_i o basis_j = sum_k t[i][j][k] basis_k."""

    __slots__ = ("case", "n", "basis", "index", "table")

    def __init__(self, case, n, basis, table):
        self.case = case
        self.n = n
        self.basis = basis
        self.index = {d.canonical_encoding(): k for k, d in enumerate(basis)}
        self.table = table      # dict (i, j) -> dict k -> Fraction

    def coeff(self, i, j, k):
        return self.table[(i, j)].get(k, Fraction(0))

    def identity_index(self):
        for k, d in enumerate(self.basis):
            if d.vertex_count() == 0 and all(
                    _strand_to_same_bottom(d, h) for h in d.top):
                return k
        raise ValueError("identity diagram not in basis")

    def check_identity(self):
        e = self.identity_index()
        for i in range(len(self.basis)):
            if self.table[(e, i)] != {i: Fraction(1)}:
                return False
            if self.table[(i, e)] != {i: Fraction(1)}:
                return False
        return True

    def check_associative(self):
        nb = len(self.basis)
        for i in range(nb):
            for j in range(nb):
                for k in range(nb):
                    left = {}
                    for l, c in self.table[(i, j)].items():
                        for mth, c2 in self.table[(l, k)].items():
                            left[mth] = left.get(mth, Fraction(0)) + c * c2
                    right = {}
                    for l, c in self.table[(j, k)].items():
                        for mth, c2 in self.table[(i, l)].items():
                            right[mth] = right.get(mth, Fraction(0)) + c * c2
                    if ({a: b for a, b in left.items() if b}
                            != {a: b for a, b in right.items() if b}):
                        return False
        return True

    def to_json_obj(self):
        def fr(f):
            return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)

        return {
            "case": self.case.value,
            "n": self.n,
            "basis_size": len(self.basis),
            "basis": [d.canonical_encoding().decode() for d in self.basis],
            "products": [{"i": i, "j": j, "coeffs": {str(k): fr(c) for k, c in row.items()}}
                         for (i, j), row in sorted(self.table.items())],
        }


def _strand_to_same_bottom(d, h):
    p = d.pairing[h]
    return d.loc[p][0] == "b" and d.loc[h][1] == d.loc[p][1]


def structure_constants(alg: CrossAlgebra, n: int) -> StructureTable:
    """Multiply basis diagrams by stacking and normalizing; exact."""
    if alg.case is CaseTag.DIM7 and n > 3:
        raise BudgetError("7-dimensional case budgeted to n <= 3")
    if alg.case is not CaseTag.DIM7 and n > 4:
        raise BudgetError("3-dimensional cases budgeted to n <= 4")
    basis = centralizer_basis(alg, n)
    words = [planar_to_word(d) for d in basis]
    index = {d.canonical_encoding(): k for k, d in enumerate(basis)}
    table = {}
    for i, wi in enumerate(words):
        for j, wj in enumerate(words):
            stacked = compose_tangles(wi, wj)   # first wj, then wi
            out = normalize(stacked, alg)
            row = {}
            for diag, c in out:
                k = index.get(diag.canonical_encoding())
                if k is None:
                    raise RuntimeError("product left the basis; normalization bug")
                row[k] = c
            table[(i, j)] = row
    return StructureTable(alg.case, n, basis, table)


# ------------------------------------------------------------------ Brauer

def brauer_diagrams(n: int):
    """Perfect matchings of {t0..t(n-1), b0..b(n-1)} as frozensets of pairs."""
    points = [("t", i) for i in range(n)] + [("b", i) for i in range(n)]

    def rec(left):
        if not left:
            yield frozenset()
            return
        a = left[0]
        for i in range(1, len(left)):
            b = left[i]
            rest = left[1:i] + left[i + 1:]
            for sub in rec(rest):
                yield sub | {frozenset((a, b))}

    return list(rec(points))


def brauer_identity(n):
    return frozenset(frozenset((("t", i), ("b", i))) for i in range(n))


def brauer_sigma(n, i):
    """The transposition diagram swapping strands i, i+1."""
    pairs = {frozenset((("t", i), ("b", i + 1))), frozenset((("t", i + 1), ("b", i)))}
    for k in range(n):
        if k not in (i, i + 1):
            pairs.add(frozenset((("t", k), ("b", k))))
    return frozenset(pairs)


def brauer_e(n, i):
    """The cap-cup diagram on strands i, i+1."""
    pairs = {frozenset((("t", i), ("t", i + 1))), frozenset((("b", i), ("b", i + 1)))}
    for k in range(n):
        if k not in (i, i + 1):
            pairs.add(frozenset((("t", k), ("b", k))))
    return frozenset(pairs)


def brauer_compose(d1, d2, n):
    """d1 after d2 (d2 on top); returns (diagram, closed loop count)."""
    # rename: top of the product = top of d2; bottom = bottom of d1;
    # middles glue d2's bottom to d1's top
    adj = {}

    def add(a, b):
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)

    for p in d2:
        a, b = tuple(p)
        add(("u",) + a, ("u",) + b)
    for p in d1:
        a, b = tuple(p)
        add(("l",) + a, ("l",) + b)
    for i in range(n):
        add(("u", "b", i), ("l", "t", i))

    ends = [("u", "t", i) for i in range(n)] + [("l", "b", i) for i in range(n)]
    seen = set()
    pairs = set()
    for e in ends:
        if e in seen:
            continue
        prev = None
        cur = e
        while True:
            seen.add(cur)
            nxts = [x for x in adj[cur] if x != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            if cur in ends:
                seen.add(cur)
                break
        a = ("t", e[2]) if e[0] == "u" else ("b", e[2])
        b = ("t", cur[2]) if cur[0] == "u" else ("b", cur[2])
        pairs.add(frozenset((a, b)))
    loops = 0
    left = {("u", "b", i) for i in range(n)} - seen
    while left:
        start = left.pop()
        prev = None
        cur = start
        count = {start}
        while True:
            nxts = [x for x in adj[cur] if x != prev]
            prev, cur = cur, nxts[0]
            if cur == start:
                break
            count.add(cur)
            left.discard(cur)
        loops += 1
    return frozenset(pairs), loops


def matching_word(n: int, diagram) -> TangleWord:
    """Realize a Brauer diagram as a tangle word (crossings allowed)."""
    cap_partner = {}
    target = {}
    cups = []
    for p in diagram:
        a, b = sorted(p)
        if a[0] == "t" and b[0] == "t":
            cap_partner[a[1]] = b[1]
            cap_partner[b[1]] = a[1]
        elif a[0] == "b" and b[0] == "b":
            cups.append((a[1], b[1]))
        else:
            bot, top = (a, b) if a[0] == "b" else (b, a)
            target[top[1]] = bot[1]

    slices = []
    # labels travel with the strands
    strands = [("cap", cap_partner[i]) if i in cap_partner else ("bot", target[i])
               for i in range(n)]
    # rename cap labels to shared pair ids
    pair_id = {}
    for i in sorted(cap_partner):
        j = cap_partner[i]
        if (j, i) in pair_id:
            pair_id[(i, j)] = pair_id[(j, i)]
        else:
            pair_id[(i, j)] = len(pair_id)
    strands = [("cap", pair_id[(i, cap_partner[i])]) if i in cap_partner
               else ("bot", target[i]) for i in range(n)]

    def emit_swap(pos):
        slices.append([Generator.ID] * pos + [Generator.CROSS]
                      + [Generator.ID] * (len(strands) - pos - 2))
        strands[pos], strands[pos + 1] = strands[pos + 1], strands[pos]

    # phase 1: cap away top-top pairs
    while any(lab[0] == "cap" for lab in strands):
        hit = None
        for i in range(len(strands) - 1):
            if strands[i][0] == "cap" and strands[i] == strands[i + 1]:
                hit = i
                break
        if hit is not None:
            slices.append([Generator.ID] * hit + [Generator.CAP]
                          + [Generator.ID] * (len(strands) - hit - 2))
            del strands[hit:hit + 2]
            continue
        # bring the leftmost cap pair together by one swap
        first = next(i for i, lab in enumerate(strands) if lab[0] == "cap")
        mate = next(i for i in range(first + 1, len(strands))
                    if strands[i] == strands[first])
        emit_swap(mate - 1)
    # phase 2: open cups (anywhere), then sort everything to target order
    for a, b in cups:
        slices.append([Generator.CUP] + [Generator.ID] * len(strands))
        strands[0:0] = [("bot", a), ("bot", b)]
    # bubble sort by bottom target
    changed = True
    while changed:
        changed = False
        for i in range(len(strands) - 1):
            if strands[i][1] > strands[i + 1][1]:
                emit_swap(i)
                changed = True
    word = TangleWord(n, n, slices)
    return word


def brauer_map(alg: CrossAlgebra, n: int):
    """The algebra map from Brauer diagrams into the normalized basis.

    Returns (diagrams, images, delta, report) where images[i] is the LinComb
    of basis diagrams for diagrams[i], delta the loop parameter, and report
    a dict of homomorphism/bijectivity facts.
    """
    if alg.case is CaseTag.DIM7:
        raise ValueError("the Brauer comparison applies to the 3-dimensional cases")
    if n > 4:
        raise BudgetError("Brauer comparison budgeted to n <= 4")
    delta = Fraction(3) if alg.case is CaseTag.DIM3 else Fraction(-1)
    diagrams = sorted(brauer_diagrams(n), key=sorted_key)
    images = {d: normalize(matching_word(n, d), alg) for d in diagrams}

    gens = [brauer_sigma(n, i) for i in range(n - 1)] + \
           [brauer_e(n, i) for i in range(n - 1)]
    hom_ok = True
    for g in gens:
        for h in gens:
            prod, loops = brauer_compose(g, h, n)
            lhs = normalize(compose_tangles(matching_word(n, g),
                                            matching_word(n, h)), alg)
            rhs = images[prod].scale(delta ** loops)
            if lhs != rhs:
                hom_ok = False
    # loop closure on the e generators
    e_ok = True
    for i in range(n - 1):
        e = brauer_e(n, i)
        prod, loops = brauer_compose(e, e, n)
        if prod != e or loops != 1:
            e_ok = False

    basis = centralizer_basis(alg, n)
    index = {d.canonical_encoding(): k for k, d in enumerate(basis)}
    rows = []
    for d in diagrams:
        row = {}
        for diag, c in images[d]:
            row[index[diag.canonical_encoding()]] = c
        rows.append(row)
    rank = sparse_rank(rows, mod=None)
    report = {
        "delta": delta,
        "homomorphism": hom_ok,
        "e_squared": e_ok,
        "image_rank": rank,
        "brauer_dim": len(diagrams),
        "bijective": rank == len(diagrams) == len(basis),
    }
    return diagrams, images, delta, report


def sorted_key(d):
    return tuple(sorted(tuple(sorted(p)) for p in d))


# ------------------------------------------------------------------ model

def matrix_model(alg: CrossAlgebra, n: int, der: DerivationAlgebra | None = None):
    """Faithfulness of the diagram basis as concrete tensor maps."""
    table = structure_constants(alg, n)
    basis = table.basis
    maps = [eval_diagram(d, alg) for d in basis]
    rows = [{_flat_key(t, key): c for key, c in t.entries.items()} for t in maps]
    rank = sparse_rank(rows, mod=None)
    independent = rank == len(basis)

    consistent = True
    for (i, j), row in table.table.items():
        got = compose(maps[i], maps[j])
        want = zero_map(alg, n, n)
        for k, c in row.items():
            want = want.add(maps[k].scale(c))
        if got != want:
            consistent = False
            break

    if der is None:
        der = derivations(alg)
    equivariant = all(equivariance_check(t, der) for t in maps)
    return {
        "basis_size": len(basis),
        "independent": independent,
        "structure_match": consistent,
        "equivariant": equivariant,
        "identity": table.check_identity(),
        "associative": table.check_associative(),
        "table": table,
    }


def _flat_key(t, key):
    out, inn = key
    d = t.algebra.dim
    flat = 0
    for x in out:
        flat = flat * d + x
    for x in inn:
        flat = flat * d + x
    return flat
