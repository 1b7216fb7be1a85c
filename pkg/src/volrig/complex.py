"""Finite simplicial complexes on dense integer vertex sets."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Face = tuple[int, ...]


def make_face(vertices: Iterable[int]) -> Face:
    """Return the canonical (sorted, duplicate-free) form of a face."""
    vs = tuple(sorted(set(int(v) for v in vertices)))
    if not vs:
        raise ValueError("a face needs at least one vertex")
    if vs[0] < 0:
        raise ValueError(f"negative vertex in {vs}")
    return vs


def _closure(facets: Iterable[Face]) -> dict[int, set[Face]]:
    by_dim: dict[int, set[Face]] = {}
    for f in facets:
        for size in range(1, len(f) + 1):
            by_dim.setdefault(size - 1, set()).update(combinations(f, size))
    return by_dim


@dataclass(frozen=True)
class SimplicialComplex:
    """Downward-closed family of faces on the vertices ``0..n_vertices-1``.

    ``faces[i]`` holds the i-faces in lexicographic order. The vertex set
    ``X_0`` may be a proper subset of ``range(n_vertices)`` after a deletion;
    vertex identifiers are never renumbered.
    """

    n_vertices: int
    faces: tuple[tuple[Face, ...], ...]
    labels: dict[str, int] = field(default_factory=dict, compare=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    def faces_of_dim(self, i: int) -> tuple[Face, ...]:
        if 0 <= i < len(self.faces):
            return self.faces[i]
        return ()

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(f[0] for f in self.faces_of_dim(0))

    @property
    def edges(self) -> tuple[Face, ...]:
        return self.faces_of_dim(1)

    @property
    def top_faces(self) -> tuple[Face, ...]:
        return self.faces_of_dim(self.dim)

    def __contains__(self, face: object) -> bool:
        if not isinstance(face, tuple) or not face:
            return False
        return face in self._face_set

    @property
    def _face_set(self) -> frozenset[Face]:
        cached = self.__dict__.get("_fs")
        if cached is None:
            cached = frozenset(f for layer in self.faces for f in layer)
            object.__setattr__(self, "_fs", cached)
        return cached

    def facets(self) -> list[Face]:
        """Inclusion-maximal faces, sorted by dimension then lexicographically."""
        out = []
        for i, layer in enumerate(self.faces):
            higher = self.faces_of_dim(i + 1)
            covered = set()
            for g in higher:
                covered.update(combinations(g, i + 1))
            out.extend(f for f in layer if f not in covered)
        return out

    def is_pure(self) -> bool:
        return all(len(f) == self.dim + 1 for f in self.facets())

    def __repr__(self) -> str:
        counts = ", ".join(str(len(layer)) for layer in self.faces)
        return f"SimplicialComplex(n={self.n_vertices}, f=({counts}))"

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        return {
            "n": self.n_vertices,
            "dim": self.dim,
            "facets": [list(f) for f in self.facets()],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _build(n: int, by_dim: dict[int, set[Face]], labels=None) -> SimplicialComplex:
    if not by_dim:
        return SimplicialComplex(n, (), dict(labels or {}))
    top = max(by_dim)
    layers = tuple(tuple(sorted(by_dim.get(i, ()))) for i in range(top + 1))
    return SimplicialComplex(n, layers, dict(labels or {}))


def from_facets(n: int, facets: Iterable[Iterable[int]], labels=None) -> SimplicialComplex:
    """Downward closure of ``facets`` on the vertex range ``0..n-1``."""
    canon = [make_face(f) for f in facets]
    if not canon:
        raise ValueError("empty facet list")
    for f in canon:
        if f[-1] >= n:
            raise ValueError(f"vertex {f[-1]} out of range for n={n}")
    return _build(n, _closure(canon), labels)


def complete_complex(n: int, k: int) -> SimplicialComplex:
    """The complete k-dimensional complex on n vertices."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"need 0 <= k <= n-1, got n={n}, k={k}")
    layers = tuple(tuple(combinations(range(n), i + 1)) for i in range(k + 1))
    return SimplicialComplex(n, layers)


def complete_graph(n: int) -> SimplicialComplex:
    return complete_complex(n, 1)


def _require_vertex(X: SimplicialComplex, v: int) -> None:
    if (v,) not in X:
        raise ValueError(f"vertex {v} is not in the complex")


def link(X: SimplicialComplex, v: int) -> SimplicialComplex:
    """Faces ``sigma - {v}`` for every face sigma containing v."""
    _require_vertex(X, v)
    by_dim: dict[int, set[Face]] = {}
    for layer in X.faces[1:]:
        for f in layer:
            if v in f:
                g = tuple(u for u in f if u != v)
                by_dim.setdefault(len(g) - 1, set()).add(g)
    return _build(X.n_vertices, by_dim)


def delete_vertex(X: SimplicialComplex, v: int) -> SimplicialComplex:
    """All faces of X avoiding v."""
    _require_vertex(X, v)
    by_dim = {}
    for i, layer in enumerate(X.faces):
        kept = {f for f in layer if v not in f}
        if kept:
            by_dim[i] = kept
    labels = {name: u for name, u in X.labels.items() if u != v}
    return _build(X.n_vertices, by_dim, labels)


def restriction(X: SimplicialComplex, S: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Downward closure of a set of top-dimensional faces of X."""
    top = set(X.top_faces)
    chosen = []
    for f in S:
        f = make_face(f)
        if f not in top:
            raise ValueError(f"{f} is not a {X.dim}-face of the complex")
        chosen.append(f)
    if not chosen:
        return SimplicialComplex(X.n_vertices, ())
    return _build(X.n_vertices, _closure(chosen))


def one_skeleton(X: SimplicialComplex) -> tuple[tuple[int, ...], tuple[Face, ...]]:
    if X.dim < 1:
        raise ValueError("complex has no edges")
    return X.vertices, X.edges


def edges_of(faces: Iterable[Face]) -> set[Face]:
    """All 2-subsets of the given faces."""
    out: set[Face] = set()
    for f in faces:
        out.update(combinations(f, 2))
    return out


def parse_complex(data: str | dict) -> SimplicialComplex:
    """Read the ``{"n", "dim", "facets"}`` JSON format."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = int(data["n"])
        facets = data["facets"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed complex: {exc}") from exc
    X = from_facets(n, facets)
    if "dim" in data and int(data["dim"]) != X.dim:
        raise ValueError(f"declared dim {data['dim']} but facets give {X.dim}")
    return X


# Vertex layout of the glued example; see build_example_41.
EXAMPLE_41_BLOCKS = ((0, 1, 2, 3, 4), (3, 4, 5, 6, 7))
EXAMPLE_41_LABELS = {"a": 0, "b": 1, "c": 2, "a'": 5, "b'": 6, "c'": 7, "v": 8}


def build_example_41() -> tuple[SimplicialComplex, dict[str, int]]:
    """Two copies of (complete 2-complex on 5 vertices minus a triangle),
    glued along an edge, plus a cone vertex joined by three triangles.

    Copy one lives on {0..4} without {0,1,2}, copy two on {3..7} without
    {5,6,7}; the shared edge is {3,4} and the cone vertex is 8.
    """
    triangles = []
    for block, missing in zip(EXAMPLE_41_BLOCKS, ((0, 1, 2), (5, 6, 7))):
        triangles += [t for t in combinations(block, 3) if t != missing]
    lab = EXAMPLE_41_LABELS
    for x, y in (("a", "a'"), ("b", "b'"), ("c", "c'")):
        triangles.append((lab[x], lab[y], lab["v"]))
    X = from_facets(9, triangles, labels=lab)
    return X, dict(lab)


def example_41_z_triangles(X: SimplicialComplex, labels: dict[str, int]) -> list[Face]:
    """Triangles of the example complex that avoid the cone vertex."""
    v = labels["v"]
    return [t for t in X.top_faces if v not in t]
