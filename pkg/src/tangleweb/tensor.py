"""Exact sparse linear maps between tensor powers of the algebra's space,
and the evaluation functor sending tangle words to such maps.

A map V^(x)n -> V^(x)m is stored as {(out_index, in_index): Fraction} over
multi-indices; n_in = n_out = 0 encodes a scalar.  All Koszul signs are
produced by exactly two places: the switch generator's matrix and the
graded rule in tensor_product.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import CrossAlgebra
from .tangle import Generator, TangleWord


class ArityError(ValueError):
    pass


class TensorMap:
    __slots__ = ("algebra", "n_in", "n_out", "entries")

    def __init__(self, algebra, n_in, n_out, entries=None):
        self.algebra = algebra
        self.n_in = n_in
        self.n_out = n_out
        self.entries = {}
        if entries:
            for k, v in entries.items():
                v = Fraction(v)
                if v:
                    self.entries[k] = v

    def __eq__(self, other):
        return (isinstance(other, TensorMap)
                and self.algebra.case == other.algebra.case
                and self.n_in == other.n_in and self.n_out == other.n_out
                and self.entries == other.entries)

    def __hash__(self):
        raise TypeError("TensorMap is not hashable")

    def __repr__(self):
        return (f"TensorMap({self.algebra.case.value}, {self.n_in}->{self.n_out}, "
                f"{len(self.entries)} entries)")

    def is_zero(self):
        return not self.entries

    def scalar_value(self):
        if self.n_in or self.n_out:
            raise ArityError("not a scalar map")
        return self.entries.get(((), ()), Fraction(0))

    def copy(self):
        return TensorMap(self.algebra, self.n_in, self.n_out, dict(self.entries))

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return TensorMap(self.algebra, self.n_in, self.n_out)
        return TensorMap(self.algebra, self.n_in, self.n_out,
                         {k: v * c for k, v in self.entries.items()})

    def add(self, other):
        if (self.n_in, self.n_out) != (other.n_in, other.n_out):
            raise ArityError("arity mismatch in add")
        out = dict(self.entries)
        for k, v in other.entries.items():
            w = out.get(k, Fraction(0)) + v
            if w:
                out[k] = w
            elif k in out:
                del out[k]
        return TensorMap(self.algebra, self.n_in, self.n_out, out)

    def sub(self, other):
        return self.add(other.scale(-1))

    def apply(self, vec):
        """Apply to a sparse vector {in_index: coeff}; returns {out_index: coeff}."""
        out = {}
        for (o, i), c in self.entries.items():
            x = vec.get(i)
            if x:
                v = out.get(o, Fraction(0)) + c * x
                if v:
                    out[o] = v
                elif o in out:
                    del out[o]
        return out

    def index_parity(self, idx):
        par = self.algebra.parity
        return sum(par[i] for i in idx) & 1

    def to_json_obj(self):
        def fr(f):
            return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)

        items = sorted(self.entries.items())
        return {
            "case": self.algebra.case.value,
            "n_in": self.n_in,
            "n_out": self.n_out,
            "entries": [{"out": list(o), "in": list(i), "coeff": fr(c)}
                        for (o, i), c in items],
        }


def zero_map(algebra, n_in, n_out):
    return TensorMap(algebra, n_in, n_out)


def scalar_map(algebra, value):
    return TensorMap(algebra, 0, 0, {((), ()): Fraction(value)})


def identity_map(algebra, n):
    d = algebra.dim
    entries = {}
    idx = [()]
    for _ in range(n):
        idx = [t + (i,) for t in idx for i in range(d)]
    for t in idx:
        entries[(t, t)] = Fraction(1)
    return TensorMap(algebra, n, n, entries)


def compose(f: TensorMap, g: TensorMap) -> TensorMap:
    """f after g (first g, then f).  Plain matrix product; no signs."""
    if f.algebra.case != g.algebra.case:
        raise ArityError("algebra mismatch in compose")
    if f.n_in != g.n_out:
        raise ArityError(f"arity mismatch: composing {f.n_in}<-? with ?<-{g.n_out}")
    by_out = {}
    for (o, i), c in g.entries.items():
        by_out.setdefault(o, []).append((i, c))
    entries = {}
    for (o, mid), c in f.entries.items():
        hits = by_out.get(mid)
        if not hits:
            continue
        for i, c2 in hits:
            key = (o, i)
            v = entries.get(key, Fraction(0)) + c * c2
            if v:
                entries[key] = v
            elif key in entries:
                del entries[key]
    return TensorMap(f.algebra, g.n_in, f.n_out, entries)


def tensor_product(f: TensorMap, g: TensorMap) -> TensorMap:
    """Graded tensor product: (f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y).

    The sign is applied per homogeneous entry of g (|g| = parity flip of the
    entry) against the parity of f's input index.  For parity-preserving maps
    (every generator image) the sign is always +1.
    """
    if f.algebra.case != g.algebra.case:
        raise ArityError("algebra mismatch in tensor_product")
    alg = f.algebra
    par = alg.parity
    entries = {}
    g_items = []
    for (og, ig), cg in g.entries.items():
        gp = (sum(par[i] for i in og) + sum(par[i] for i in ig)) & 1
        g_items.append((og, ig, cg, gp))
    for (of, if_), cf in f.entries.items():
        xpar = sum(par[i] for i in if_) & 1
        for og, ig, cg, gp in g_items:
            c = cf * cg
            if gp and xpar:
                c = -c
            key = (of + og, if_ + ig)
            v = entries.get(key, Fraction(0)) + c
            if v:
                entries[key] = v
            elif key in entries:
                del entries[key]
    return TensorMap(alg, f.n_in + g.n_in, f.n_out + g.n_out, entries)


# ---------------------------------------------------------------- pairings

def _dual_matrix(alg):
    # column j of gram^-1 = coordinates of the dual vector v_j
    return alg.gram_inv


def cap_map(alg) -> TensorMap:
    entries = {}
    d = alg.dim
    for i in range(d):
        for j in range(d):
            c = alg.gram[i][j]
            if c:
                entries[((), (i, j))] = Fraction(c)
    return TensorMap(alg, 2, 0, entries)


def cup_map(alg) -> TensorMap:
    # b^t(1) = sum_i v_i (x) u_i
    entries = {}
    gi = _dual_matrix(alg)
    d = alg.dim
    for i in range(d):
        for a in range(d):
            c = gi[a][i]
            if c:
                entries[((a, i), ())] = Fraction(c)
    return TensorMap(alg, 0, 2, entries)


def mult_map(alg) -> TensorMap:
    entries = {}
    d = alg.dim
    for i in range(d):
        for j in range(d):
            for k, c in enumerate(alg.cross[i][j]):
                if c:
                    entries[((k,), (i, j))] = Fraction(c)
    return TensorMap(alg, 2, 1, entries)


def switch_map(alg) -> TensorMap:
    entries = {}
    d = alg.dim
    par = alg.parity
    for i in range(d):
        for j in range(d):
            sign = -1 if (par[i] and par[j]) else 1
            entries[((j, i), (i, j))] = Fraction(sign)
    return TensorMap(alg, 2, 2, entries)


def bn(alg, n: int) -> TensorMap:
    """Nested pairing V^(x)2n -> F, strand i against strand 2n+1-i.

    Built as the iterated composition of single caps applied innermost first,
    so that any grading signs come out of the generic machinery.
    """
    if n < 0:
        raise ArityError("n must be nonnegative")
    acc = scalar_map(alg, 1)
    cap = cap_map(alg)
    for k in range(n):
        # innermost cap of a 2(k+1)-strand pairing: id_1 (x) acc' (x) id_1
        acc = compose(acc, _middle(alg, cap, k))
    return acc


def _middle(alg, f, k):
    # id_k (x) f (x) id_k
    out = f
    if k:
        idk = identity_map(alg, k)
        out = tensor_product(idk, tensor_product(f, idk))
    return out


def bnt(alg, n: int) -> TensorMap:
    """The coevaluation F -> V^(x)2n dual to bn."""
    if n < 0:
        raise ArityError("n must be nonnegative")
    acc = scalar_map(alg, 1)
    cup = cup_map(alg)
    for k in range(n):
        acc = compose(_middle(alg, cup, k), acc)
    return acc


def transpose(f: TensorMap) -> TensorMap:
    """(id_n (x) b_m) o (id_n (x) f (x) id_m) o (b_n^t (x) id_m)."""
    alg = f.algebra
    n, m = f.n_in, f.n_out
    idn = identity_map(alg, n)
    idm = identity_map(alg, m)
    stage1 = tensor_product(bnt(alg, n), idm)
    stage2 = tensor_product(idn, tensor_product(f, idm))
    stage3 = tensor_product(idn, bn(alg, m))
    return compose(stage3, compose(stage2, stage1))


def comult_map(alg) -> TensorMap:
    return transpose(mult_map(alg))


def phi(f: TensorMap) -> TensorMap:
    """Bend outputs up: Hom(n, m) -> Hom(n+m, 0)."""
    alg = f.algebra
    m = f.n_out
    return compose(bn(alg, m), tensor_product(f, identity_map(alg, m)))


def psi(h: TensorMap, n: int, m: int) -> TensorMap:
    """Inverse bending with an explicit (n, m) split of h's inputs."""
    if h.n_out != 0 or h.n_in != n + m:
        raise ArityError("psi expects a functional on n+m strands")
    alg = h.algebra
    return compose(tensor_product(h, identity_map(alg, m)),
                   tensor_product(identity_map(alg, n), bnt(alg, m)))


# ---------------------------------------------------------------- evaluation

def generator_map(alg, gen: Generator) -> TensorMap:
    if gen is Generator.ID:
        return identity_map(alg, 1)
    if gen is Generator.CAP:
        return cap_map(alg)
    if gen is Generator.CUP:
        return cup_map(alg)
    if gen is Generator.MULT:
        return mult_map(alg)
    if gen is Generator.COMULT:
        return comult_map(alg)
    if gen is Generator.CROSS:
        return switch_map(alg)
    raise ValueError(f"unknown generator {gen!r}")


class _GenCache:
    """Per-case lookup tables for fast slice application."""

    def __init__(self):
        self.tables = {}

    def get(self, alg):
        key = alg.case
        t = self.tables.get(key)
        if t is None:
            t = self._build(alg)
            self.tables[key] = t
        return t

    @staticmethod
    def _build(alg):
        d = alg.dim
        cap = {}
        for i in range(d):
            for j in range(d):
                if alg.gram[i][j]:
                    cap[(i, j)] = Fraction(alg.gram[i][j])
        cup = [((a, i), Fraction(alg.gram_inv[a][i]))
               for i in range(d) for a in range(d) if alg.gram_inv[a][i]]
        mult = {}
        for i in range(d):
            for j in range(d):
                row = [(k, Fraction(c)) for k, c in enumerate(alg.cross[i][j]) if c]
                if row:
                    mult[(i, j)] = row
        com = comult_map(alg)
        comult = {}
        for (out, inn), c in com.entries.items():
            comult.setdefault(inn[0], []).append((out, c))
        cross = {}
        par = alg.parity
        for i in range(d):
            for j in range(d):
                cross[(i, j)] = ((j, i), Fraction(-1 if par[i] and par[j] else 1))
        return {"cap": cap, "cup": cup, "mult": mult, "comult": comult, "cross": cross}


_CACHE = _GenCache()


def _apply_slice(entries, slice_, tables):
    """Compose one slice of generators onto accumulated entries.

    Every generator image is parity-even, so no grading signs appear here;
    the switch generator's matrix carries its own signs.
    """
    cap, cup = tables["cap"], tables["cup"]
    mult, comult, cross = tables["mult"], tables["comult"], tables["cross"]
    out_entries = {}
    for (out, inn), coeff in entries.items():
        # branches: list of (new_out_prefix, coeff)
        branches = [((), coeff)]
        pos = 0
        for gen in slice_:
            if gen is Generator.ID:
                x = out[pos]
                branches = [(pre + (x,), c) for pre, c in branches]
                pos += 1
            elif gen is Generator.CAP:
                key = (out[pos], out[pos + 1])
                w = cap.get(key)
                branches = [(pre, c * w) for pre, c in branches] if w else []
                pos += 2
            elif gen is Generator.CUP:
                branches = [(pre + ab, c * w) for pre, c in branches for ab, w in cup]
            elif gen is Generator.MULT:
                row = mult.get((out[pos], out[pos + 1]))
                branches = ([(pre + (k,), c * w) for pre, c in branches for k, w in row]
                            if row else [])
                pos += 2
            elif gen is Generator.COMULT:
                row = comult.get(out[pos])
                branches = ([(pre + jk, c * w) for pre, c in branches for jk, w in row]
                            if row else [])
                pos += 1
            elif gen is Generator.CROSS:
                ji, sgn = cross[(out[pos], out[pos + 1])]
                branches = [(pre + ji, c * sgn) for pre, c in branches]
                pos += 2
            else:
                raise ValueError(f"unknown generator {gen!r}")
            if not branches:
                break
        for pre, c in branches:
            key = (pre, inn)
            v = out_entries.get(key, Fraction(0)) + c
            if v:
                out_entries[key] = v
            elif key in out_entries:
                del out_entries[key]
    return out_entries


def evaluate(word: TangleWord, alg: CrossAlgebra) -> TensorMap:
    """Evaluate a tangle word to an exact tensor map, slice by slice."""
    word.validate()
    tables = _CACHE.get(alg)
    acc = identity_map(alg, word.n_in).entries
    for slice_ in word.slices:
        acc = _apply_slice(acc, slice_, tables)
    return TensorMap(alg, word.n_in, word.n_out, acc)


def evaluate_lincomb(terms, alg) -> TensorMap:
    """Evaluate a list of (TangleWord, coeff) pairs into one map."""
    acc = None
    for word, coeff in terms:
        t = evaluate(word, alg).scale(coeff)
        acc = t if acc is None else acc.add(t)
    if acc is None:
        raise ValueError("empty linear combination has no defined arity")
    return acc
