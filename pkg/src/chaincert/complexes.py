"""Finite abstract simplicial complexes, maps, covers, stars, nerves, towers.

Vertex names are opaque strings and simplexes are stored as lexicographically
sorted tuples, so every iteration order in this module is deterministic.
"Neighborhoods" are modeled as full subcomplexes induced by vertex subsets;
nested families of covers with checked refinement witnesses play the role of
nested systems of neighborhoods.  All values are immutable after
construction and every operation is a pure function, so concurrent use is
unrestricted.
"""

from __future__ import annotations

from dataclasses import dataclass

Simplex = tuple[str, ...]


class ComplexError(ValueError):
    """Structurally invalid complex, map, cover, or tower input."""


class UnknownVertex(ComplexError):
    """A simplex or subset references a vertex the complex does not have."""


class EmptyPreimage(ComplexError):
    """A cover member whose preimage is empty; the map misses it entirely."""


def _as_simplex(vertices) -> Simplex:
    vs = tuple(vertices)
    if not vs:
        raise ComplexError("empty simplex")
    if any(not isinstance(v, str) for v in vs):
        raise ComplexError(f"vertex names must be strings: {vs!r}")
    if len(set(vs)) != len(vs):
        raise ComplexError(f"repeated vertex in simplex {vs!r}")
    return tuple(sorted(vs))


class SimplicialComplex:
    """A finite abstract simplicial complex, closed under faces.

    Every declared vertex is present as a singleton simplex.  Simplexes are
    sorted vertex tuples, graded by dimension.
    """

    __slots__ = ("vertices", "_by_dim", "simplex_set", "_hash")

    def __init__(self, simplexes, vertices=None):
        closure: set[Simplex] = set()
        for raw in simplexes:
            s = _as_simplex(raw)
            for mask in range(1, 1 << len(s)):
                face = tuple(v for k, v in enumerate(s) if mask >> k & 1)
                closure.add(face)
        seen = {v for s in closure for v in s}
        if vertices is None:
            verts = sorted(seen)
        else:
            verts = sorted(set(vertices))
            if any(not isinstance(v, str) for v in verts):
                raise ComplexError("vertex names must be strings")
            unknown = seen - set(verts)
            if unknown:
                raise UnknownVertex(f"simplexes use undeclared vertices {sorted(unknown)}")
        for v in verts:
            closure.add((v,))
        by_dim: dict[int, list[Simplex]] = {}
        for s in closure:
            by_dim.setdefault(len(s) - 1, []).append(s)
        self.vertices = tuple(verts)
        self._by_dim = {k: tuple(sorted(v)) for k, v in sorted(by_dim.items())}
        self.simplex_set = frozenset(closure)
        self._hash = None

    @property
    def dimension(self) -> int:
        """-1 for the empty complex."""
        return max(self._by_dim, default=-1)

    def simplices(self, k: int) -> tuple[Simplex, ...]:
        """All k-simplexes in canonical (lexicographic) order."""
        return self._by_dim.get(k, ())

    def all_simplices(self):
        """Every simplex, ordered by dimension then lexicographically."""
        for k in sorted(self._by_dim):
            yield from self._by_dim[k]

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self.simplex_set

    def facets(self) -> tuple[Simplex, ...]:
        """Maximal simplexes; regenerating the complex from them is the identity."""
        out = []
        for s in self.all_simplices():
            if not any(
                set(s) < set(t)
                for k in range(len(s), self.dimension + 1)
                for t in self._by_dim.get(k, ())
            ):
                out.append(s)
        return tuple(sorted(out, key=lambda s: (len(s), s)))

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.simplex_set <= other.simplex_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and self.simplex_set == other.simplex_set
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vertices, self.simplex_set))
        return self._hash

    def __repr__(self) -> str:
        counts = ",".join(f"{len(self._by_dim[k])}x{k}" for k in sorted(self._by_dim))
        return f"SimplicialComplex({len(self.vertices)} vertices; {counts or 'empty'})"


def validate_complex(simplexes, vertices=None) -> SimplicialComplex:
    """Face-close a raw simplex list into a canonical complex."""
    return SimplicialComplex(simplexes, vertices)


def full_subcomplex(complex: SimplicialComplex, subset) -> SimplicialComplex:
    """All simplexes with every vertex in the subset."""
    sub = set(subset)
    unknown = sub - set(complex.vertices)
    if unknown:
        raise UnknownVertex(f"subset uses unknown vertices {sorted(unknown)}")
    kept = [s for s in complex.all_simplices() if set(s) <= sub]
    return SimplicialComplex(kept, vertices=sorted(sub))


class SimplicialMap:
    """A vertex assignment whose image of every simplex is again a simplex."""

    __slots__ = ("source", "target", "vertex_assignment", "_surjective")

    def __init__(self, source: SimplicialComplex, target: SimplicialComplex, vertex_assignment):
        missing = set(source.vertices) - set(vertex_assignment)
        if missing:
            raise ComplexError(f"vertex assignment misses {sorted(missing)}")
        bad = {v: w for v, w in vertex_assignment.items()
               if v in source.vertices and w not in set(target.vertices)}
        if bad:
            raise ComplexError(f"assignment targets unknown vertices: {bad}")
        self.source = source
        self.target = target
        self.vertex_assignment = {v: vertex_assignment[v] for v in source.vertices}
        for s in source.all_simplices():
            img = tuple(sorted({self.vertex_assignment[v] for v in s}))
            if img not in target.simplex_set:
                raise ComplexError(f"image of simplex {s} is not a simplex: {img}")
        self._surjective = None

    def image_simplex(self, simplex) -> Simplex:
        """Sorted image vertex set (possibly lower-dimensional)."""
        return tuple(sorted({self.vertex_assignment[v] for v in simplex}))

    @property
    def is_surjective(self) -> bool:
        """Recomputed, never trusted: every target simplex is hit by a source simplex."""
        if self._surjective is None:
            hit = {self.image_simplex(s) for s in self.source.all_simplices()}
            covered = set()
            for s in hit:
                for mask in range(1, 1 << len(s)):
                    covered.add(tuple(v for k, v in enumerate(s) if mask >> k & 1))
            self._surjective = covered >= self.target.simplex_set
        return self._surjective

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """self after inner."""
        if inner.target is not self.source and inner.target != self.source:
            raise ComplexError("composition targets do not match")
        assignment = {v: self.vertex_assignment[w] for v, w in inner.vertex_assignment.items()}
        return SimplicialMap(inner.source, self.target, assignment)

    @staticmethod
    def identity(complex: SimplicialComplex) -> "SimplicialMap":
        return SimplicialMap(complex, complex, {v: v for v in complex.vertices})

    def __repr__(self) -> str:
        return f"SimplicialMap({len(self.source.vertices)} -> {len(self.target.vertices)} vertices)"


class Cover:
    """Named vertex subsets whose union is the whole vertex set.

    Members are kept in lexicographic name order; that order is the
    canonical scan order everywhere ("first member" always means first in
    this order).
    """

    __slots__ = ("complex", "members")

    def __init__(self, complex: SimplicialComplex, members):
        items = sorted(members.items()) if isinstance(members, dict) else sorted(members)
        clean = []
        seen_names = set()
        union: set[str] = set()
        for name, subset in items:
            if not isinstance(name, str):
                raise ComplexError("cover member names must be strings")
            if name in seen_names:
                raise ComplexError(f"duplicate cover member name {name!r}")
            seen_names.add(name)
            sub = frozenset(subset)
            if not sub:
                raise ComplexError(f"cover member {name!r} is empty")
            unknown = sub - set(complex.vertices)
            if unknown:
                raise UnknownVertex(f"member {name!r} uses unknown vertices {sorted(unknown)}")
            clean.append((name, sub))
            union |= sub
        if union != set(complex.vertices):
            raise ComplexError(
                f"cover misses vertices {sorted(set(complex.vertices) - union)}"
            )
        self.complex = complex
        self.members = tuple(clean)

    def names(self):
        return tuple(name for name, _ in self.members)

    def get(self, name: str) -> frozenset:
        for n, sub in self.members:
            if n == name:
                return sub
        raise KeyError(name)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cover)
            and self.complex == other.complex
            and self.members == other.members
        )

    def __repr__(self) -> str:
        return f"Cover({len(self.members)} members of {len(self.complex.vertices)} vertices)"


def star(member, cover: Cover) -> frozenset:
    """Union of all cover members meeting the given vertex subset.

    Meeting means sharing a vertex, which for full subcomplexes coincides
    with sharing a simplex.  Empty only when the subset meets nothing.
    """
    sub = frozenset(member)
    unknown = sub - set(cover.complex.vertices)
    if unknown:
        raise UnknownVertex(f"star of subset with unknown vertices {sorted(unknown)}")
    out: set[str] = set()
    for _, m in cover.members:
        if m & sub:
            out |= m
    return frozenset(out)


@dataclass(frozen=True)
class StarRefinementReport:
    ok: bool
    witness: dict | None          # fine member name -> coarse member name
    counterexample: tuple | None  # (fine member name, star vertex set)


def check_star_refinement(fine: Cover, coarse: Cover) -> StarRefinementReport:
    """Does every St(F, fine) fit inside a single coarse member?

    On success the witness maps each fine member to the first coarse member
    containing its star; on failure the first offending member is reported.
    """
    if fine.complex != coarse.complex:
        raise ComplexError("star refinement check needs covers of one complex")
    witness = {}
    for name, sub in fine.members:
        st = star(sub, fine)
        hit = next((cn for cn, cm in coarse.members if st <= cm), None)
        if hit is None:
            return StarRefinementReport(False, None, (name, st))
        witness[name] = hit
    return StarRefinementReport(True, witness, None)


def nerve(cover: Cover, dim_cap: int) -> tuple[SimplicialComplex, dict]:
    """Skeleton of the nerve: members spanning simplexes via joint intersection.

    Returns the complex (vertices are member names) and the vertex-to-member
    correspondence.
    """
    if dim_cap < 0:
        raise ComplexError("nerve dimension cap must be >= 0")
    names = cover.names()
    sets = dict(cover.members)
    simplexes: list[tuple[str, ...]] = [(n,) for n in names]
    frontier = [((n,), sets[n]) for n in names]
    for _dim in range(1, dim_cap + 1):
        nxt = []
        for simplex, inter in frontier:
            last = simplex[-1]
            for n in names:
                if n <= last:
                    continue
                joint = inter & sets[n]
                if joint:
                    ext = simplex + (n,)
                    nxt.append((ext, joint))
                    simplexes.append(ext)
        if not nxt:
            break
        frontier = nxt
    complex = SimplicialComplex(simplexes, vertices=names)
    return complex, {n: n for n in names}


def preimage_cover(f: SimplicialMap, cover: Cover) -> Cover:
    """Member-wise vertex preimages, names inherited.

    Raises EmptyPreimage when the map misses a member entirely, since the
    maps considered here are meant to be surjective.
    """
    if cover.complex != f.target:
        raise ComplexError("cover is not on the map's target")
    members = {}
    for name, sub in cover.members:
        pre = frozenset(v for v in f.source.vertices if f.vertex_assignment[v] in sub)
        if not pre:
            raise EmptyPreimage(f"member {name!r} has empty preimage")
        members[name] = pre
    return Cover(f.source, members)


def open_star_cover(complex: SimplicialComplex) -> Cover:
    """One member per vertex: everything sharing a simplex with it."""
    if not complex.vertices:
        raise ComplexError("cannot cover an empty complex")
    members = {}
    for v in complex.vertices:
        members[v] = {w for s in complex.all_simplices() if v in s for w in s}
    return Cover(complex, members)


@dataclass(frozen=True)
class TowerDefect:
    kind: str      # "witness-star", "pair-not-nested", "missing-level"
    level: int
    member: str
    detail: str


class FiltrationTower:
    """Nested covers U_0 .. U_top with recorded refinement and pair data.

    ``refinement_witnesses[k]`` names, for each member V of level k, a member
    of level k+1 meant to contain St(V, U_k); ``pair_assignments[k]`` names
    the member of level k+1 against which V's inclusion is meant to kill
    homology in degree k.  Both claims are inputs: ``validate`` checks the
    star containments and the pair nestings and reports defects instead of
    assuming them.
    """

    __slots__ = ("complex", "levels", "refinement_witnesses", "pair_assignments")

    def __init__(self, complex: SimplicialComplex, levels, refinement_witnesses, pair_assignments):
        levels = tuple(levels)
        if not levels:
            raise ComplexError("tower needs at least one level")
        for i, cov in enumerate(levels):
            if cov.complex != complex:
                raise ComplexError(f"level {i} covers a different complex")
        witnesses = tuple(dict(w) for w in refinement_witnesses)
        pairs = tuple(dict(p) for p in pair_assignments)
        if len(witnesses) != len(levels) - 1 or len(pairs) != len(levels) - 1:
            raise ComplexError("need one witness map and one pair map per consecutive level pair")
        for k in range(len(levels) - 1):
            lower = set(levels[k].names())
            upper = set(levels[k + 1].names())
            for mapping, label in ((witnesses[k], "witness"), (pairs[k], "pair")):
                if set(mapping) != lower:
                    raise ComplexError(f"{label} map at level {k} is not total on the level")
                bad = [u for u in mapping.values() if u not in upper]
                if bad:
                    raise ComplexError(f"{label} map at level {k} targets unknown members {bad}")
        self.complex = complex
        self.levels = levels
        self.refinement_witnesses = witnesses
        self.pair_assignments = pairs

    @property
    def height(self) -> int:
        """Index of the top level."""
        return len(self.levels) - 1

    def validate(self) -> list[TowerDefect]:
        """Check every recorded witness and pair nesting; return all defects."""
        defects = []
        for k in range(self.height):
            fine = self.levels[k]
            coarse = self.levels[k + 1]
            for name, sub in fine.members:
                st = star(sub, fine)
                target = coarse.get(self.refinement_witnesses[k][name])
                if not st <= target:
                    defects.append(TowerDefect(
                        "witness-star", k, name,
                        f"St({name}) not inside {self.refinement_witnesses[k][name]}",
                    ))
                pair_target = coarse.get(self.pair_assignments[k][name])
                if not sub <= pair_target:
                    defects.append(TowerDefect(
                        "pair-not-nested", k, name,
                        f"{name} not inside its pair member {self.pair_assignments[k][name]}",
                    ))
        return defects

    def __repr__(self) -> str:
        sizes = ",".join(str(len(c)) for c in self.levels)
        return f"FiltrationTower({len(self.levels)} levels; sizes {sizes})"


def trivial_tower(complex: SimplicialComplex, height: int, member_name: str = "whole") -> FiltrationTower:
    """The tower whose every level is the single whole-vertex-set member."""
    cov = Cover(complex, {member_name: set(complex.vertices)})
    ident = {member_name: member_name}
    return FiltrationTower(
        complex,
        [cov] * (height + 1),
        [dict(ident) for _ in range(height)],
        [dict(ident) for _ in range(height)],
    )
