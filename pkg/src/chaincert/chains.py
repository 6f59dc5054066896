"""Chains, boundary and augmentation, chain morphisms and homotopies.

Orientation convention: a simplex is keyed by its sorted vertex tuple and a
term given with vertices in some other order contributes the sign of the
sorting permutation.  The boundary of a 0-chain is the zero chain (the
augmentation is a separate operation), so homotopy identities in degree 0
carry no lower correction term.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import Simplex, SimplicialComplex, SimplicialMap
from .rings import CoefficientRing


class ChainError(ValueError):
    """Ill-formed chain, morphism, or homotopy."""


def _sort_with_sign(vertices) -> tuple[Simplex, int]:
    """Sorted tuple plus the permutation sign of the user-supplied order."""
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        raise ChainError(f"repeated vertex in oriented simplex {vs!r}")
    sign = 1
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if vs[i] > vs[j]:
                sign = -sign
    return tuple(sorted(vs)), sign


class Chain:
    """A sparse formal combination of same-dimension simplexes of one complex."""

    __slots__ = ("complex", "ring", "dimension", "terms")

    def __init__(self, complex: SimplicialComplex, ring: CoefficientRing, dimension: int, terms=None):
        if dimension < 0:
            raise ChainError("chain dimension must be >= 0")
        clean = {}
        for simplex, coeff in (terms or {}).items():
            s = tuple(simplex)
            if len(s) != dimension + 1:
                raise ChainError(f"simplex {s} has wrong dimension for a {dimension}-chain")
            if s not in complex.simplex_set:
                raise ChainError(f"simplex {s} not in the complex")
            c = ring.canon(coeff)
            if not ring.is_zero(c):
                clean[s] = c
        self.complex = complex
        self.ring = ring
        self.dimension = dimension
        self.terms = clean

    @classmethod
    def from_terms(cls, complex, ring, dimension, pairs) -> "Chain":
        """Build from (coefficient, ordered-vertex-list) pairs, applying signs."""
        acc: dict[Simplex, object] = {}
        for coeff, vertices in pairs:
            s, sign = _sort_with_sign(vertices)
            c = ring.canon(coeff)
            if sign < 0:
                c = ring.neg(c)
            acc[s] = ring.add(acc.get(s, ring.zero), c)
        return cls(complex, ring, dimension, acc)

    @classmethod
    def zero(cls, complex, ring, dimension) -> "Chain":
        return cls(complex, ring, dimension, {})

    @classmethod
    def unit(cls, complex, ring, vertices) -> "Chain":
        """e times the simplex given by (possibly unordered) vertices."""
        vs = tuple(vertices)
        return cls.from_terms(complex, ring, len(vs) - 1, [(ring.one, vs)])

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """Terms in canonical simplex order."""
        return sorted(self.terms.items())

    def add(self, other: "Chain") -> "Chain":
        self._check_compatible(other)
        acc = dict(self.terms)
        ring = self.ring
        for s, c in other.terms.items():
            acc[s] = ring.add(acc.get(s, ring.zero), c)
        return Chain(self.complex, ring, self.dimension, acc)

    def neg(self) -> "Chain":
        ring = self.ring
        return Chain(self.complex, ring, self.dimension,
                     {s: ring.neg(c) for s, c in self.terms.items()})

    def sub(self, other: "Chain") -> "Chain":
        return self.add(other.neg())

    def scale(self, coeff) -> "Chain":
        ring = self.ring
        c = ring.canon(coeff)
        return Chain(self.complex, ring, self.dimension,
                     {s: ring.mul(c, v) for s, v in self.terms.items()})

    def on_complex(self, other: SimplicialComplex) -> "Chain":
        """The same terms read as a chain of another complex."""
        return Chain(other, self.ring, self.dimension, dict(self.terms))

    def _check_compatible(self, other: "Chain"):
        if self.dimension != other.dimension or self.ring != other.ring:
            raise ChainError("incompatible chains")

    def __eq__(self, other) -> bool:
        """Term-wise equality (complex identity is not compared)."""
        return (
            isinstance(other, Chain)
            and self.ring == other.ring
            and self.dimension == other.dimension
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ring, self.dimension, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        if not self.terms:
            return f"Chain(0; dim {self.dimension})"
        parts = " + ".join(f"{self.ring.elt_to_str(c)}*{'|'.join(s)}" for s, c in self.items())
        return f"Chain({parts})"


def boundary(c: Chain) -> Chain:
    """Alternating-sign face sum; the zero 0-chain for 0-chains."""
    if c.dimension == 0:
        return Chain.zero(c.complex, c.ring, 0)
    ring = c.ring
    acc: dict[Simplex, object] = {}
    for s, coeff in c.terms.items():
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            term = coeff if i % 2 == 0 else ring.neg(coeff)
            acc[face] = ring.add(acc.get(face, ring.zero), term)
    return Chain(c.complex, ring, c.dimension - 1, acc)


def augmentation(c: Chain):
    """Sum of the coefficients of a 0-chain."""
    if c.dimension != 0:
        raise ChainError("augmentation applies to 0-chains")
    ring = c.ring
    total = ring.zero
    for coeff in c.terms.values():
        total = ring.add(total, coeff)
    return total


def carrier(c: Chain) -> tuple[frozenset, frozenset]:
    """(simplex set, vertex set) of the irreducible representation; empty for 0."""
    simplexes = frozenset(c.terms)
    return simplexes, frozenset(v for s in simplexes for v in s)


def carrier_vertices(c: Chain) -> frozenset:
    return carrier(c)[1]


class ChainMorphism:
    """Degree-0 per-generator assignment between chain complexes, up to a cap.

    The defining laws (boundary commutation, augmentation commutation in
    degree 0) are checked by verify_chain_morphism, not assumed.
    """

    __slots__ = ("source", "target", "ring", "degree_cap", "assignment")

    def __init__(self, source, target, ring, degree_cap, assignment):
        if degree_cap < 0:
            raise ChainError("degree cap must be >= 0")
        clean = {}
        for simplex, chain in assignment.items():
            s = tuple(simplex)
            if s not in source.simplex_set:
                raise ChainError(f"assignment keyed by foreign simplex {s}")
            k = len(s) - 1
            if k > degree_cap:
                raise ChainError(f"assignment above the degree cap at {s}")
            if not isinstance(chain, Chain) or chain.dimension != k or chain.ring != ring:
                raise ChainError(f"value for {s} must be a {k}-chain over the same ring")
            clean[s] = chain
        for k in range(min(degree_cap, source.dimension) + 1):
            for s in source.simplices(k):
                if s not in clean:
                    raise ChainError(f"assignment misses simplex {s}")
        self.source = source
        self.target = target
        self.ring = ring
        self.degree_cap = degree_cap
        self.assignment = clean

    def value(self, simplex) -> Chain:
        return self.assignment[tuple(sorted(simplex))]

    def apply(self, c: Chain) -> Chain:
        """Linear extension to chains of the source."""
        if c.dimension > self.degree_cap:
            raise ChainError("chain above the degree cap")
        out = Chain.zero(self.target, self.ring, c.dimension)
        for s, coeff in c.items():
            out = out.add(self.assignment[s].scale(coeff))
        return out

    def restrict(self, subcomplex: SimplicialComplex) -> "ChainMorphism":
        sub = {
            s: ch for s, ch in self.assignment.items()
            if s in subcomplex.simplex_set
        }
        return ChainMorphism(subcomplex, self.target, self.ring, self.degree_cap, sub)

    def compose(self, inner: "ChainMorphism") -> "ChainMorphism":
        """self after inner (inner's target chains are fed through self)."""
        cap = min(self.degree_cap, inner.degree_cap)
        assignment = {
            s: self.apply(ch)
            for s, ch in inner.assignment.items()
            if len(s) - 1 <= cap
        }
        return ChainMorphism(inner.source, self.target, self.ring, cap, assignment)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ChainMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.ring == other.ring
            and self.degree_cap == other.degree_cap
            and self.assignment == other.assignment
        )

    def __repr__(self) -> str:
        return f"ChainMorphism(cap {self.degree_cap}, {len(self.assignment)} generators)"


class ChainHomotopy:
    """Degree +1 per-generator assignment, verified against a morphism pair."""

    __slots__ = ("source", "target", "ring", "degree_cap", "assignment")

    def __init__(self, source, target, ring, degree_cap, assignment):
        if degree_cap < 0:
            raise ChainError("degree cap must be >= 0")
        clean = {}
        for simplex, chain in assignment.items():
            s = tuple(simplex)
            if s not in source.simplex_set:
                raise ChainError(f"assignment keyed by foreign simplex {s}")
            k = len(s) - 1
            if k > degree_cap:
                raise ChainError(f"assignment above the degree cap at {s}")
            if not isinstance(chain, Chain) or chain.dimension != k + 1 or chain.ring != ring:
                raise ChainError(f"value for {s} must be a {k + 1}-chain over the same ring")
            clean[s] = chain
        for k in range(min(degree_cap, source.dimension) + 1):
            for s in source.simplices(k):
                if s not in clean:
                    raise ChainError(f"assignment misses simplex {s}")
        self.source = source
        self.target = target
        self.ring = ring
        self.degree_cap = degree_cap
        self.assignment = clean

    def value(self, simplex) -> Chain:
        return self.assignment[tuple(sorted(simplex))]

    def apply(self, c: Chain) -> Chain:
        if c.dimension > self.degree_cap:
            raise ChainError("chain above the degree cap")
        out = Chain.zero(self.target, self.ring, c.dimension + 1)
        for s, coeff in c.items():
            out = out.add(self.assignment[s].scale(coeff))
        return out

    @classmethod
    def zero(cls, source, target, ring, degree_cap) -> "ChainHomotopy":
        assignment = {}
        for k in range(min(degree_cap, source.dimension) + 1):
            for s in source.simplices(k):
                assignment[s] = Chain.zero(target, ring, k + 1)
        return cls(source, target, ring, degree_cap, assignment)

    def __repr__(self) -> str:
        return f"ChainHomotopy(cap {self.degree_cap}, {len(self.assignment)} generators)"


# --- verification predicates -------------------------------------------------


@dataclass(frozen=True)
class Violation:
    simplex: Simplex
    law: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple[Violation, ...]


def verify_chain_morphism(phi: ChainMorphism) -> VerificationReport:
    """Boundary commutation on every generator plus augmentation in degree 0."""
    ring = phi.ring
    bad = []
    for s, chain in sorted(phi.assignment.items(), key=lambda kv: (len(kv[0]), kv[0])):
        k = len(s) - 1
        if k == 0:
            if augmentation(chain) != ring.one:
                bad.append(Violation(s, "augmentation", f"eps(phi({s})) != e"))
            continue
        lhs = boundary(chain)
        rhs = phi.apply(boundary(Chain.unit(phi.source, ring, s)))
        if lhs != rhs:
            bad.append(Violation(s, "boundary", f"d(phi({s})) != phi(d({s}))"))
    return VerificationReport(not bad, tuple(bad))


def is_correct(phi: ChainMorphism) -> bool:
    """Each vertex generator maps to a single vertex generator with coefficient e."""
    ring = phi.ring
    for v in phi.source.vertices:
        chain = phi.assignment[(v,)]
        items = chain.items()
        if len(items) != 1:
            return False
        (_s, coeff), = items
        if coeff != ring.one:
            return False
    return True


@dataclass(frozen=True)
class CloseReport:
    ok: bool
    assignment: dict | None       # source simplex -> cover member name
    counterexample: Simplex | None

    def member_for(self, simplex):
        return self.assignment[tuple(sorted(simplex))]


def _faces(s: Simplex):
    for mask in range(1, 1 << len(s)):
        yield tuple(v for k, v in enumerate(s) if mask >> k & 1)


def is_close(phi: ChainMorphism, psi: ChainMorphism, cover) -> CloseReport:
    """Per source simplex, one cover member holding both images of all faces."""
    if phi.source != psi.source or phi.target != psi.target:
        raise ChainError("closeness needs a shared source and target")
    if cover.complex != phi.target:
        raise ChainError("cover must be on the shared target")
    cap = min(phi.degree_cap, psi.degree_cap)
    assignment = {}
    for k in range(min(cap, phi.source.dimension) + 1):
        for s in phi.source.simplices(k):
            needed: set[str] = set()
            for tau in _faces(s):
                needed |= carrier_vertices(phi.assignment[tau])
                needed |= carrier_vertices(psi.assignment[tau])
            hit = next((name for name, sub in cover.members if needed <= sub), None)
            if hit is None:
                return CloseReport(False, None, s)
            assignment[s] = hit
    return CloseReport(True, assignment, None)


def is_small(phi: ChainMorphism, cover) -> CloseReport:
    """Smallness is closeness of a morphism to itself."""
    return is_close(phi, phi, cover)


@dataclass(frozen=True)
class HomotopyReport:
    ok: bool
    violations: tuple[Violation, ...]
    smallness: CloseReport | None


def verify_homotopy(D: ChainHomotopy, phi: ChainMorphism, psi: ChainMorphism,
                    cover=None) -> HomotopyReport:
    """Check d D(s) = phi(s) - psi(s) - D(d s) on every generator.

    In degree 0 the lower term is absent.  With a cover, also check that per
    simplex one member contains D of all faces and both morphisms' vertex
    images.
    """
    if phi.source != psi.source or phi.target != psi.target:
        raise ChainError("homotopy endpoints need a shared source and target")
    if D.source != phi.source or D.target != phi.target:
        raise ChainError("homotopy must share the morphisms' source and target")
    ring = D.ring
    bad = []
    for s, chain in sorted(D.assignment.items(), key=lambda kv: (len(kv[0]), kv[0])):
        k = len(s) - 1
        want = phi.assignment[s].sub(psi.assignment[s])
        if k > 0:
            want = want.sub(D.apply(boundary(Chain.unit(D.source, ring, s))))
        if boundary(chain) != want:
            bad.append(Violation(s, "homotopy", f"d D({s}) mismatch"))
    smallness = None
    if cover is not None:
        if cover.complex != D.target:
            raise ChainError("cover must be on the homotopy target")
        assignment = {}
        counter = None
        for k in range(min(D.degree_cap, D.source.dimension) + 1):
            for s in D.source.simplices(k):
                needed: set[str] = set()
                for tau in _faces(s):
                    needed |= carrier_vertices(D.assignment[tau])
                for v in s:
                    needed |= carrier_vertices(phi.assignment[(v,)])
                    needed |= carrier_vertices(psi.assignment[(v,)])
                hit = next((name for name, sub in cover.members if needed <= sub), None)
                if hit is None:
                    counter = s
                    break
                assignment[s] = hit
            if counter is not None:
                break
        smallness = (CloseReport(True, assignment, None) if counter is None
                     else CloseReport(False, None, counter))
    ok = not bad and (smallness is None or smallness.ok)
    return HomotopyReport(ok, tuple(bad), smallness)


# --- induced morphisms and standard constructions ----------------------------


def induced_morphism(f: SimplicialMap, ring: CoefficientRing, degree_cap: int) -> ChainMorphism:
    """Chains pushed along a simplicial map.

    A simplex maps to its image with the orientation sign of the vertex
    permutation, or to zero when the image is degenerate (the only
    convention under which this is a chain morphism).
    """
    assignment = {}
    for k in range(min(degree_cap, f.source.dimension) + 1):
        for s in f.source.simplices(k):
            imgs = [f.vertex_assignment[v] for v in s]
            if len(set(imgs)) != len(imgs):
                assignment[s] = Chain.zero(f.target, ring, k)
            else:
                assignment[s] = Chain.from_terms(f.target, ring, k, [(ring.one, imgs)])
    return ChainMorphism(f.source, f.target, ring, degree_cap, assignment)


def identity_morphism(complex: SimplicialComplex, ring: CoefficientRing,
                      degree_cap: int) -> ChainMorphism:
    return induced_morphism(SimplicialMap.identity(complex), ring, degree_cap)


def constant_morphism(complex: SimplicialComplex, ring: CoefficientRing,
                      degree_cap: int, vertex: str) -> ChainMorphism:
    """Everything to one vertex: vertices to e*[x], higher simplexes to zero."""
    f = SimplicialMap(complex, complex, {v: vertex for v in complex.vertices})
    return induced_morphism(f, ring, degree_cap)


def cone_homotopy(complex: SimplicialComplex, ring: CoefficientRing,
                  degree_cap: int, apex: str) -> ChainHomotopy:
    """The cone contraction joining each simplex to the apex.

    Requires apex * s to be a simplex whenever apex is not already a vertex
    of s; on a full simplex this homotopy connects the identity to the
    constant-apex morphism.
    """
    assignment = {}
    for k in range(min(degree_cap, complex.dimension) + 1):
        for s in complex.simplices(k):
            if apex in s:
                assignment[s] = Chain.zero(complex, ring, k + 1)
            else:
                joined = (apex,) + s
                if tuple(sorted(joined)) not in complex.simplex_set:
                    raise ChainError(f"cone over {s} missing from the complex")
                assignment[s] = Chain.from_terms(complex, ring, k + 1, [(ring.one, joined)])
    return ChainHomotopy(complex, complex, ring, degree_cap, assignment)
