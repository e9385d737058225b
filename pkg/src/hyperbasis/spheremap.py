"""Embedded multigraphs on the marked sphere.

A map is a rotation system: every arc contributes two darts, ``alpha``
swaps the darts of an arc, and each vertex carries its incident darts in
counterclockwise cyclic order.  Faces are the orbits of sigma o alpha;
the two faces along an arc are the orbits of its two darts, and the
corner swept counterclockwise from dart ``d`` to its rotation successor
lies in the face orbit containing sigma(d).

Rotation systems determine the embedding of each connected component,
but not how separate components nest inside one another's faces, so a
map additionally carries a region partition: the per-component faces
that bound one common complementary domain of the whole arrangement are
grouped together, and every degree-zero vertex is assigned to a region.
The partition is valid exactly when each component has genus zero and
the component/region incidence graph is a tree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

from .errors import EmbeddingError, InputError

__all__ = [
    "ComponentKind",
    "Arc",
    "Component",
    "SphereMap",
    "MapBuilder",
    "from_json",
    "classify_components",
    "classify_arcs",
    "RegionNode",
    "RegionTree",
    "region_tree",
    "region_units",
    "region_admits_odd_curve",
    "is_nonseparating",
]


class ComponentKind(Enum):
    ISOLATED_VERTEX = "isolated-vertex"
    LOOP = "loop"
    TREE = "tree"
    LOOPED_TREE = "looped-tree"
    INVALID = "invalid"


@dataclass(frozen=True)
class Arc:
    id: int
    kind: str                 # "edge" | "loop"
    u: int                    # vertex of darts[0]
    v: int                    # vertex of darts[1]
    darts: tuple[int, int]

    @property
    def base(self) -> int:
        if self.kind != "loop":
            raise InputError(f"arc {self.id} is not a loop")
        return self.u

    def endpoints(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Component:
    key: int                      # smallest vertex id
    vertices: tuple[int, ...]
    arcs: tuple[int, ...]


class _UnionFind:
    """Union-find over arbitrary hashable items, path halving."""

    def __init__(self, items=()):
        self.parent = {x: x for x in items}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def _orbits(perm: dict[int, int]) -> list[tuple[int, ...]]:
    """Cycles of a permutation given as a dict, each starting at its
    smallest element, sorted by that element."""
    seen = set()
    cycles = []
    for start in sorted(perm):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        d = perm[start]
        while d != start:
            cyc.append(d)
            seen.add(d)
            d = perm[d]
        m = cyc.index(min(cyc))
        cycles.append(tuple(cyc[m:] + cyc[:m]))
    cycles.sort(key=lambda c: c[0])
    return cycles


class SphereMap:
    """Immutable validated sphere arrangement of arcs on cone vertices."""

    def __init__(
        self,
        rotations: dict[int, list[int]],
        arcs: dict[int, Arc],
        cone: dict[int, bool],
        genus: int | None = None,
        regions: list[dict] | None = None,
    ):
        self.rotations = {v: list(r) for v, r in rotations.items()}
        self.arcs = dict(arcs)
        self.cone = dict(cone)
        self._build_permutations()
        self._build_faces()
        self._build_components()
        self.n_cone = sum(1 for v in self.cone if self.cone[v])
        if self.n_cone < 4 or self.n_cone % 2:
            raise EmbeddingError(
                f"need an even number >= 4 of cone vertices, got {self.n_cone}"
            )
        self.genus = (self.n_cone - 2) // 2
        if genus is not None and genus != self.genus:
            raise EmbeddingError(
                f"declared genus {genus} but {self.n_cone} cone vertices"
            )
        self._check_component_euler()
        self._build_regions(regions)

    # -- construction ------------------------------------------------

    def _build_permutations(self) -> None:
        self.sigma: dict[int, int] = {}
        self.dart_vertex: dict[int, int] = {}
        for v, rot in self.rotations.items():
            for i, d in enumerate(rot):
                if d in self.dart_vertex:
                    raise EmbeddingError(f"dart {d} listed twice in rotations")
                self.dart_vertex[d] = v
                self.sigma[d] = rot[(i + 1) % len(rot)]
        self.alpha: dict[int, int] = {}
        for a in self.arcs.values():
            d1, d2 = a.darts
            if d1 == d2:
                raise EmbeddingError(f"arc {a.id} pairs a dart with itself")
            for d in (d1, d2):
                if d not in self.dart_vertex:
                    raise EmbeddingError(f"arc {a.id} uses unknown dart {d}")
                if d in self.alpha:
                    raise EmbeddingError(f"dart {d} belongs to two arcs")
            self.alpha[d1] = d2
            self.alpha[d2] = d1
            if self.dart_vertex[d1] != a.u or self.dart_vertex[d2] != a.v:
                raise EmbeddingError(f"arc {a.id} endpoints disagree with rotations")
            if (a.kind == "loop") != (a.u == a.v):
                raise EmbeddingError(f"arc {a.id} kind/endpoint mismatch")
        if set(self.alpha) != set(self.dart_vertex):
            raise EmbeddingError("rotation darts and arc darts differ")
        self.isolated = {v for v, rot in self.rotations.items() if not rot}

    def _build_faces(self) -> None:
        phi = {d: self.sigma[self.alpha[d]] for d in self.alpha}
        self.faces = _orbits(phi)
        self.face_of = {d: i for i, f in enumerate(self.faces) for d in f}

    def _build_components(self) -> None:
        uf = _UnionFind(self.rotations)
        for a in self.arcs.values():
            uf.union(a.u, a.v)
        groups = uf.classes()
        comp_arcs: dict[int, list[int]] = {r: [] for r in groups}
        for a in self.arcs.values():
            comp_arcs[uf.find(a.u)].append(a.id)
        self.components = sorted(
            (
                Component(
                    key=min(vs),
                    vertices=tuple(sorted(vs)),
                    arcs=tuple(sorted(comp_arcs[r])),
                )
                for r, vs in groups.items()
            ),
            key=lambda c: c.key,
        )
        self.component_of = {
            v: c.key for c in self.components for v in c.vertices
        }

    def _check_component_euler(self) -> None:
        by_key = {c.key: c for c in self.components}
        nfaces = {k: 0 for k in by_key}
        for f in self.faces:
            nfaces[self.component_of[self.dart_vertex[f[0]]]] += 1
        for c in self.components:
            if not c.arcs:
                continue
            euler = len(c.vertices) - len(c.arcs) + nfaces[c.key]
            if euler != 2:
                raise EmbeddingError(
                    f"component at vertex {c.key} has Euler characteristic "
                    f"{euler}, not a sphere embedding"
                )

    def _build_regions(self, regions: list[dict] | None) -> None:
        nontrivial = [c for c in self.components if c.arcs]
        if regions is None:
            if not nontrivial:
                regions = [{"faces": [], "isolated": sorted(self.isolated)}]
            elif len(nontrivial) == 1 and not self.isolated:
                regions = [{"faces": [f[0]], "isolated": []} for f in self.faces]
            else:
                raise EmbeddingError(
                    "disconnected arrangement requires explicit regions"
                )
        face_by_min = {f[0]: i for i, f in enumerate(self.faces)}
        self.regions: list[dict] = []
        self.region_of_face: dict[int, int] = {}
        self.region_of_isolated: dict[int, int] = {}
        for ridx, r in enumerate(regions):
            keys = []
            for key in r.get("faces", []):
                if key not in face_by_min:
                    raise EmbeddingError(f"region lists unknown face key {key}")
                keys.append(key)
                fi = face_by_min[key]
                if fi in self.region_of_face:
                    raise EmbeddingError("face assigned to two regions")
                self.region_of_face[fi] = ridx
            for v in r.get("isolated", []):
                if v not in self.isolated:
                    raise EmbeddingError(f"vertex {v} is not isolated")
                if v in self.region_of_isolated:
                    raise EmbeddingError(f"isolated vertex {v} placed twice")
                self.region_of_isolated[v] = ridx
            self.regions.append(
                {"faces": sorted(keys), "isolated": sorted(r.get("isolated", []))}
            )
        if set(self.region_of_face) != set(range(len(self.faces))):
            raise EmbeddingError("every face must belong to exactly one region")
        if set(self.region_of_isolated) != self.isolated:
            raise EmbeddingError("every isolated vertex needs a region")
        self._check_region_tree(nontrivial)

    def _check_region_tree(self, nontrivial: list[Component]) -> None:
        """Components and regions must form a tree with one edge per face."""
        if not nontrivial:
            if len(self.regions) != 1:
                raise EmbeddingError("arc-free map must have a single region")
            return
        comp_of_face = {
            i: self.component_of[self.dart_vertex[f[0]]]
            for i, f in enumerate(self.faces)
        }
        seen_pairs = set()
        uf = _UnionFind()
        for c in nontrivial:
            uf.add(("c", c.key))
        for r in range(len(self.regions)):
            uf.add(("r", r))
        for fi, r in self.region_of_face.items():
            pair = (comp_of_face[fi], r)
            if pair in seen_pairs:
                raise EmbeddingError(
                    "two faces of one component bound the same region"
                )
            seen_pairs.add(pair)
            uf.union(("c", pair[0]), ("r", r))
        n_nodes = len(nontrivial) + len(self.regions)
        if len(self.faces) != n_nodes - 1:
            raise EmbeddingError("region incidence is not a tree (count)")
        roots = {uf.find(x) for x in uf.parent}
        if len(roots) != 1:
            raise EmbeddingError("region incidence is not connected")

    # -- queries -----------------------------------------------------

    @property
    def vertex_ids(self) -> list[int]:
        return sorted(self.rotations)

    def arc_ids(self) -> list[int]:
        return sorted(self.arcs)

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def side_regions(self, arc_id: int) -> tuple[int, int]:
        """Regions on the two sides of an arc (region of each dart's face)."""
        a = self.arcs[arc_id]
        return (
            self.region_of_face[self.face_of[a.darts[0]]],
            self.region_of_face[self.face_of[a.darts[1]]],
        )

    def corner_region(self, dart: int) -> int:
        """Region of the corner swept from ``dart`` to its successor.

        That corner lies in the face orbit containing sigma(dart).
        """
        return self.region_of_face[self.face_of[self.sigma[dart]]]

    def euler_summary(self) -> tuple[int, int, int, int]:
        """(V, E, F, C) with F counted as arrangement regions."""
        return (
            len(self.rotations),
            len(self.arcs),
            len(self.regions),
            len(self.components),
        )

    def without_arcs(self, removed: set[int]) -> "SphereMap":
        """The arrangement with the given arcs erased from the sphere."""
        removed = set(removed)
        for aid in removed:
            if aid not in self.arcs:
                raise InputError(f"unknown arc id {aid}")
        kept_arcs = {a: self.arcs[a] for a in self.arcs if a not in removed}
        dead_darts = {d for a in removed for d in self.arcs[a].darts}
        rotations = {
            v: [d for d in rot if d not in dead_darts]
            for v, rot in self.rotations.items()
        }
        uf = _UnionFind(range(len(self.regions)))
        for aid in removed:
            r1, r2 = self.side_regions(aid)
            uf.union(r1, r2)
        # regroup: old region class -> new region index
        classes = sorted(uf.classes())
        new_idx = {root: i for i, root in enumerate(classes)}
        groups: list[dict] = [{"faces": [], "isolated": []} for _ in classes]
        sub = SphereMap.__new__(SphereMap)
        sub.rotations = rotations
        sub.arcs = kept_arcs
        sub.cone = dict(self.cone)
        sub._build_permutations()
        sub._build_faces()
        sub._build_components()
        sub.n_cone = self.n_cone
        sub.genus = self.genus
        sub._check_component_euler()
        for i, f in enumerate(sub.faces):
            old_region = self.region_of_face[self.face_of[f[0]]]
            groups[new_idx[uf.find(old_region)]]["faces"].append(f[0])
        for v in sub.isolated:
            if v in self.isolated:
                old_region = self.region_of_isolated[v]
            else:
                old_region = self.region_of_face[self.face_of[self.rotations[v][0]]]
            groups[new_idx[uf.find(old_region)]]["isolated"].append(v)
        sub._build_regions(groups)
        return sub

    # -- serialization -----------------------------------------------

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "vertices": [
                {
                    "id": v,
                    "cone": bool(self.cone[v]),
                    "rotation": list(self.rotations[v]),
                }
                for v in sorted(self.rotations)
            ],
            "arcs": [
                {
                    "id": a.id,
                    "darts": list(a.darts),
                    "kind": a.kind,
                }
                for a in sorted(self.arcs.values(), key=lambda a: a.id)
            ],
            "regions": [
                {"faces": r["faces"], "isolated": r["isolated"]}
                for r in self.regions
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def from_json(data) -> SphereMap:
    """Build and validate a SphereMap from its JSON description."""
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise InputError(f"bad JSON: {e}") from e
    if not isinstance(data, dict):
        raise InputError("map description must be an object")
    try:
        rotations = {}
        cone = {}
        for v in data["vertices"]:
            rotations[int(v["id"])] = [int(d) for d in v["rotation"]]
            cone[int(v["id"])] = bool(v.get("cone", True))
        arcs = {}
        for a in data["arcs"]:
            d1, d2 = (int(x) for x in a["darts"])
            u = next(v for v, rot in rotations.items() if d1 in rot)
            w = next(v for v, rot in rotations.items() if d2 in rot)
            aid = int(a["id"])
            arcs[aid] = Arc(id=aid, kind=str(a["kind"]), u=u, v=w, darts=(d1, d2))
    except (KeyError, TypeError, ValueError, StopIteration) as e:
        raise InputError(f"malformed map description: {e}") from e
    regions = data.get("regions")
    return SphereMap(
        rotations,
        arcs,
        cone,
        genus=data.get("genus"),
        regions=regions,
    )


# -- component classification ----------------------------------------


def classify_arcs(smap: SphereMap, arc_ids) -> dict[int, ComponentKind]:
    """Kind of every connected component of the subgraph on the given arcs,
    keyed by smallest vertex id (all map vertices participate)."""
    arc_ids = set(arc_ids)
    uf = _UnionFind(smap.rotations)
    for aid in arc_ids:
        a = smap.arcs[aid]
        uf.union(a.u, a.v)
    loops: dict[int, int] = {}
    edges: dict[int, int] = {}
    for aid in arc_ids:
        a = smap.arcs[aid]
        root = uf.find(a.u)
        if a.kind == "loop":
            loops[root] = loops.get(root, 0) + 1
        else:
            edges[root] = edges.get(root, 0) + 1
    out = {}
    for root, vs in uf.classes().items():
        key = min(vs)
        nl = loops.get(root, 0)
        ne = edges.get(root, 0)
        nv = len(vs)
        if nl == 0 and ne == 0:
            kind = ComponentKind.ISOLATED_VERTEX
        elif nl == 1 and ne == 0 and nv == 1:
            kind = ComponentKind.LOOP
        elif nl == 0 and ne == nv - 1:
            kind = ComponentKind.TREE
        elif nl == 1 and ne == nv - 1 and ne >= 1:
            kind = ComponentKind.LOOPED_TREE
        else:
            kind = ComponentKind.INVALID
        out[key] = kind
    return out


def classify_components(smap: SphereMap) -> list[ComponentKind]:
    """Kinds of the map's own components, ordered by smallest vertex id."""
    kinds = classify_arcs(smap, smap.arcs)
    return [kinds[k] for k in sorted(kinds)]


# -- regions of the sphere minus the loop arcs of a subgraph ---------


@dataclass
class _Piece:
    """Maximal connected chunk of the subgraph's non-loop arcs after
    removing loop base vertices; hangs off at most one loop base."""

    vertices: tuple[int, ...]
    arcs: tuple[int, ...]
    attach_base: int | None
    node: int


@dataclass
class RegionNode:
    id: int
    level: int = 0
    boundary: list[int] = field(default_factory=list)    # loop arc ids
    isolated: list[int] = field(default_factory=list)    # subgraph-isolated cone vertices
    pieces: list[_Piece] = field(default_factory=list)


@dataclass
class RegionTree:
    smap: SphereMap
    subgraph: frozenset[int]
    nodes: dict[int, RegionNode]
    loop_sides: dict[int, tuple[int, int]]   # loop arc -> (far node, near node)
    root: int
    levels: dict[int, int]

    def units(self, node_id: int) -> list[tuple[str, int]]:
        """Cone counts a simple closed curve inside the region can cut off.

        One unit per boundary loop (its base, everything strictly beyond,
        and any subgraph branches hanging off the base into this region:
        a branch cannot be separated from its loop, since the curve would
        have to cross the stem), one per free-standing interior piece,
        one per isolated vertex.
        """
        node = self.nodes[node_id]
        units: list[tuple[str, int]] = []
        for lam in node.boundary:
            count = 1 + self._beyond(lam, node_id)
            for p in node.pieces:
                if p.attach_base is not None and p.attach_base == self.smap.arcs[lam].base:
                    count += len(p.vertices)
            units.append((f"loop:{lam}", count))
        for p in node.pieces:
            if p.attach_base is None:
                units.append((f"piece:{min(p.vertices)}", len(p.vertices)))
        for v in node.isolated:
            units.append((f"vertex:{v}", 1))
        return units

    def census(self, node_id: int) -> int:
        """Every cone point counted once from this region's viewpoint."""
        node = self.nodes[node_id]
        total = sum(1 + self._beyond(lam, node_id) for lam in node.boundary)
        total += sum(len(p.vertices) for p in node.pieces)
        total += len(node.isolated)
        return total

    def _half(self, lam: int, node_id: int) -> set[int]:
        """Node ids on the far side of boundary loop ``lam`` of ``node_id``."""
        a, b = self.loop_sides[lam]
        far = b if a == node_id else a
        seen = {far}
        stack = [far]
        while stack:
            n = stack.pop()
            for mu in self.nodes[n].boundary:
                if mu == lam:
                    continue
                x, y = self.loop_sides[mu]
                other = y if x == n else x
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
        return seen

    def _beyond(self, lam: int, node_id: int) -> int:
        """Cone points strictly on the far side of ``lam`` seen from the node."""
        far = self._half(lam, node_id)
        count = 0
        for n in far:
            node = self.nodes[n]
            count += len(node.isolated)
            count += sum(len(p.vertices) for p in node.pieces)
        for mu, (x, y) in self.loop_sides.items():
            if mu != lam and x in far and y in far:
                count += 1
        # bases of loops between two far nodes counted above; bases of loops
        # bordering the cut loop's far node from inside the far half:
        for mu, (x, y) in self.loop_sides.items():
            if mu == lam:
                continue
            if (x in far) != (y in far):
                raise EmbeddingError("region tree split is inconsistent")
        return count


def region_tree(smap: SphereMap, subgraph) -> RegionTree:
    """Regions of the sphere minus the loop arcs of ``subgraph``, with
    their nesting levels and interior contents.

    The subgraph's components must classify as loops, trees, looped
    trees, or isolated vertices.
    """
    sub = frozenset(int(a) for a in subgraph)
    for aid in sub:
        if aid not in smap.arcs:
            raise InputError(f"unknown arc id {aid}")
    kinds = classify_arcs(smap, sub)
    if any(k is ComponentKind.INVALID for k in kinds.values()):
        raise InputError("subgraph has a component outside the growth shapes")
    loop_arcs = sorted(a for a in sub if smap.arcs[a].kind == "loop")
    bases = {smap.arcs[a].base for a in loop_arcs}
    if len(bases) != len(loop_arcs):
        raise InputError("two subgraph loops share a base vertex")

    # merge map regions across every arc that is not a subgraph loop
    uf = _UnionFind(range(len(smap.regions)))
    for aid in smap.arcs:
        if aid not in loop_arcs:
            r1, r2 = smap.side_regions(aid)
            uf.union(r1, r2)
    roots = sorted({uf.find(r) for r in range(len(smap.regions))})
    node_of_class = {root: i for i, root in enumerate(roots)}
    nodes = {i: RegionNode(id=i) for i in range(len(roots))}

    def node_of_region(r: int) -> int:
        return node_of_class[uf.find(r)]

    loop_sides = {}
    for lam in loop_arcs:
        r1, r2 = smap.side_regions(lam)
        n1, n2 = node_of_region(r1), node_of_region(r2)
        if n1 == n2:
            raise EmbeddingError(f"loop {lam} does not separate the sphere")
        loop_sides[lam] = (n1, n2)
        nodes[n1].boundary.append(lam)
        nodes[n2].boundary.append(lam)
    if len(nodes) != len(loop_arcs) + 1:
        raise EmbeddingError("regions and loops do not form a tree")

    # isolated-in-subgraph cone vertices
    sub_degree = {v: 0 for v in smap.rotations}
    for aid in sub:
        a = smap.arcs[aid]
        sub_degree[a.u] += 1
        sub_degree[a.v] += 1
    for v in sorted(smap.rotations):
        if sub_degree[v] == 0 and smap.cone.get(v, True):
            if smap.rotations[v]:
                r = smap.corner_region(smap.rotations[v][0])
            else:
                r = smap.region_of_isolated[v]
            nodes[node_of_region(r)].isolated.append(v)

    # pieces: components of the subgraph's non-loop arcs minus loop bases
    edge_arcs = [a for a in sub if smap.arcs[a].kind == "edge"]
    puf = _UnionFind()
    for aid in edge_arcs:
        a = smap.arcs[aid]
        for x in (a.u, a.v):
            if x not in bases:
                puf.add(x)
        if a.u not in bases and a.v not in bases:
            puf.union(a.u, a.v)
    piece_arcs: dict[int, list[int]] = {}
    piece_base: dict[int, int] = {}
    piece_node: dict[int, int] = {}
    for aid in sorted(edge_arcs):
        a = smap.arcs[aid]
        free = [x for x in (a.u, a.v) if x not in bases]
        root = puf.find(free[0])
        piece_arcs.setdefault(root, []).append(aid)
        for x in (a.u, a.v):
            if x in bases:
                if piece_base.get(root, x) != x:
                    raise InputError("piece hangs off two loop bases")
                piece_base[root] = x
                # the stem dart at the base determines the side of the loop
                stem = a.darts[0] if a.u == x else a.darts[1]
                piece_node[root] = node_of_region(smap.corner_region(stem))
    for root, arcs_ in piece_arcs.items():
        verts = tuple(sorted({x for x in puf.classes()[puf.find(root)]}))
        if root not in piece_node:
            d0 = smap.arcs[arcs_[0]].darts[0]
            piece_node[root] = node_of_region(smap.corner_region(d0))
        piece = _Piece(
            vertices=verts,
            arcs=tuple(sorted(arcs_)),
            attach_base=piece_base.get(root),
            node=piece_node[root],
        )
        nodes[piece.node].pieces.append(piece)

    for n in nodes.values():
        n.boundary.sort()
        n.isolated.sort()
        n.pieces.sort(key=lambda p: p.vertices[0])

    # root: disk region (one boundary loop) with smallest base vertex
    if loop_arcs:
        leaves = [n for n in nodes.values() if len(n.boundary) == 1]
        root = min(leaves, key=lambda n: smap.arcs[n.boundary[0]].base).id
    else:
        root = 0
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for n in frontier:
            for lam in nodes[n].boundary:
                x, y = loop_sides[lam]
                other = y if x == n else x
                if other not in dist:
                    dist[other] = dist[n] + 1
                    nxt.append(other)
        frontier = nxt
    if len(dist) != len(nodes):
        raise EmbeddingError("region adjacency is not connected")
    ecc = max(dist.values())
    levels = {n: ecc - d for n, d in dist.items()}
    for n, node in nodes.items():
        node.level = levels[n]
    return RegionTree(
        smap=smap,
        subgraph=sub,
        nodes=nodes,
        loop_sides=loop_sides,
        root=root,
        levels=levels,
    )


def region_units(smap: SphereMap, subgraph) -> dict[int, list[tuple[str, int]]]:
    tree = region_tree(smap, subgraph)
    return {n: tree.units(n) for n in tree.nodes}


def region_admits_odd_curve(smap: SphereMap, subgraph, node_id: int, tree: RegionTree | None = None) -> bool:
    """Whether the region contains a simple closed curve cutting the cone
    points into two odd halves: true iff some unit count is odd."""
    if tree is None:
        tree = region_tree(smap, subgraph)
    return any(count % 2 == 1 for _, count in tree.units(node_id))


def is_nonseparating(smap: SphereMap, subgraph) -> bool:
    """Parity test: the lifted curve system leaves the double connected
    iff every region admits an odd-separating curve."""
    tree = region_tree(smap, subgraph)
    return all(
        region_admits_odd_curve(smap, subgraph, n, tree) for n in tree.nodes
    )


# -- incremental construction in growth order ------------------------


class MapBuilder:
    """Builds an embedded arc arrangement the way disk growth creates it:
    every inserted arc has at least one endpoint that is still bare.

    Regions are tracked exactly; face identifiers stay stable because a
    face is named by its smallest dart and darts are allocated upward.
    """

    def __init__(self, vertex_ids, cone: dict[int, bool] | None = None):
        self.rotations: dict[int, list[int]] = {int(v): [] for v in vertex_ids}
        if len(self.rotations) < 2:
            raise InputError("need at least two vertices")
        self.cone = {v: True for v in self.rotations}
        if cone:
            self.cone.update(cone)
        self.alpha: dict[int, int] = {}
        self.dart_vertex: dict[int, int] = {}
        self.arcs: dict[int, Arc] = {}
        self._next_dart = 0
        # region -> {"faces": set of face keys, "isolated": set of vertices}
        self._regions: list[dict] = [
            {"faces": set(), "isolated": set(self.rotations)}
        ]
        self._face_region: dict[int, int] = {}
        self._comp_uf = _UnionFind(self.rotations)

    # face keys are the minimum dart of each sigma-alpha orbit
    def _faces(self) -> list[tuple[int, ...]]:
        sigma = {}
        for v, rot in self.rotations.items():
            for i, d in enumerate(rot):
                sigma[d] = rot[(i + 1) % len(rot)]
        phi = {d: sigma[self.alpha[d]] for d in self.alpha}
        return _orbits(phi)

    def _face_key_of_dart(self, d: int) -> int:
        for f in self._faces():
            if d in f:
                return f[0]
        raise EmbeddingError(f"dart {d} not on any face")

    def _corner_face_key(self, v: int, pos: int) -> int:
        """Face key of the corner after rotation position ``pos`` at ``v``,
        which is the face orbit containing the successor dart."""
        rot = self.rotations[v]
        return self._face_key_of_dart(rot[(pos + 1) % len(rot)])

    def _new_darts(self) -> tuple[int, int]:
        p, q = self._next_dart, self._next_dart + 1
        self._next_dart += 2
        return p, q

    def region_of_vertex(self, v: int) -> int:
        """Region of a currently isolated vertex."""
        for i, r in enumerate(self._regions):
            if v in r["isolated"]:
                return i
        raise InputError(f"vertex {v} is not isolated")

    def corners_on_region(self, w: int, region: int) -> list[int]:
        """Rotation positions at ``w`` whose corner borders the region."""
        out = []
        for pos in range(len(self.rotations[w])):
            if self._face_region.get(self._corner_face_key(w, pos)) == region:
                out.append(pos)
        return out

    def region_items(self, region: int) -> tuple[list[int], list[int]]:
        """(component keys with a face here, isolated vertices here)."""
        r = self._regions[region]
        comps = sorted(
            {
                self._comp_uf.find(self.dart_vertex[fk])
                for fk in r["faces"]
            }
        )
        return comps, sorted(r["isolated"])

    def region_item_contents(self, region: int) -> list[dict]:
        """Direct items of a region with their total nested vertex sets.

        Each entry is ``{"face": key or None, "vertices": frozenset}``;
        for a component the set includes everything nested behind its
        face, so enclosing the item means enclosing all of it.
        """
        faces = self._faces()
        face_keys = {f[0] for f in faces}
        region_of_face = dict(self._face_region)
        comp_of_face = {
            fk: self._comp_uf.find(self.dart_vertex[fk]) for fk in face_keys
        }
        comp_faces: dict[int, list[int]] = {}
        for fk, c in comp_of_face.items():
            comp_faces.setdefault(c, []).append(fk)
        comp_vertices: dict[int, set[int]] = {}
        for v in self.rotations:
            comp_vertices.setdefault(self._comp_uf.find(v), set()).add(v)

        def subtree(face_key: int, from_region: int) -> frozenset[int]:
            """All vertices behind ``face_key`` seen from ``from_region``."""
            out: set[int] = set()
            comp_stack = [(comp_of_face[face_key], from_region)]
            seen_regions = {from_region}
            while comp_stack:
                comp, via_region = comp_stack.pop()
                out |= comp_vertices[comp]
                for fk in comp_faces[comp]:
                    r = region_of_face[fk]
                    if r in seen_regions:
                        continue
                    seen_regions.add(r)
                    out |= self._regions[r]["isolated"]
                    for fk2 in self._regions[r]["faces"]:
                        c2 = comp_of_face[fk2]
                        if c2 != comp:
                            comp_stack.append((c2, r))
            return frozenset(out)

        items = []
        for fk in sorted(self._regions[region]["faces"]):
            items.append({"face": fk, "vertices": subtree(fk, region)})
        for v in sorted(self._regions[region]["isolated"]):
            items.append({"face": None, "vertices": frozenset({v})})
        return items

    def component_vertices(self, v: int) -> list[int]:
        root = self._comp_uf.find(v)
        return sorted(
            x for x in self.rotations if self._comp_uf.find(x) == root
        )

    def add_bone(self, arc_id: int, u: int, w: int) -> None:
        """Edge between two bare vertices lying in a common region."""
        ru, rw = self.region_of_vertex(u), self.region_of_vertex(w)
        if ru != rw:
            raise EmbeddingError(f"vertices {u} and {w} lie in different regions")
        if u == w:
            raise EmbeddingError("a bone needs distinct endpoints")
        p, q = self._new_darts()
        self.rotations[u] = [p]
        self.rotations[w] = [q]
        self.alpha[p] = q
        self.alpha[q] = p
        self.dart_vertex[p] = u
        self.dart_vertex[q] = w
        self._register(arc_id, "edge", u, w, (p, q))
        region = self._regions[ru]
        region["isolated"] -= {u, w}
        region["faces"].add(p)     # the bone's single face, key = min(p, q) = p
        self._face_region[p] = ru
        self._comp_uf.union(u, w)

    def attach_edge(self, arc_id: int, fresh: int, host: int, at: int = 0) -> None:
        """Edge from a bare vertex into the corner after rotation position
        ``at`` of an occupied vertex; the bare vertex must sit in the
        region that corner borders."""
        if not self.rotations[host]:
            raise EmbeddingError(f"host vertex {host} has no darts")
        if self.rotations[fresh]:
            raise EmbeddingError(f"vertex {fresh} is not bare")
        at %= len(self.rotations[host])
        fkey = self._corner_face_key(host, at)
        region = self._face_region[fkey]
        if self.region_of_vertex(fresh) != region:
            raise EmbeddingError(
                f"vertex {fresh} is not in the region behind that corner"
            )
        p, q = self._new_darts()
        self.rotations[host].insert(at + 1, p)
        self.rotations[fresh] = [q]
        self.alpha[p] = q
        self.alpha[q] = p
        self.dart_vertex[p] = host
        self.dart_vertex[q] = fresh
        self._register(arc_id, "edge", host, fresh, (p, q))
        self._regions[region]["isolated"].discard(fresh)
        self._comp_uf.union(host, fresh)
        # pendant insertion keeps the face key: new darts are larger

    def add_loop(self, arc_id: int, v: int, enclosed) -> None:
        """Loop at a bare vertex; ``enclosed`` lists the cone vertices that
        end up strictly inside.  It must be a union of whole region items
        (a nested component drags its entire contents along)."""
        region = self.region_of_vertex(v)
        enclosed = {int(x) for x in enclosed}
        if v in enclosed:
            raise EmbeddingError("a loop cannot enclose its own base")
        inside_faces = set()
        inside_isolated = set()
        covered: set[int] = set()
        for item in self.region_item_contents(region):
            vs = item["vertices"]
            if not vs & enclosed:
                continue
            if vs == {v}:
                continue
            if not vs <= enclosed:
                raise EmbeddingError(
                    f"item with vertices {sorted(vs)} straddles the new loop"
                )
            covered |= vs
            if item["face"] is None:
                inside_isolated.update(vs)
            else:
                inside_faces.add(item["face"])
        if covered != enclosed:
            raise EmbeddingError(
                f"vertices {sorted(enclosed - covered)} are not in this region"
            )
        p, q = self._new_darts()
        self.rotations[v] = [p, q]
        self.alpha[p] = q
        self.alpha[q] = p
        self.dart_vertex[p] = v
        self.dart_vertex[q] = v
        self._register(arc_id, "loop", v, v, (p, q))
        outer = self._regions[region]
        outer["isolated"].discard(v)
        outer["isolated"] -= inside_isolated
        outer["faces"] -= inside_faces
        outer["faces"].add(q)           # the q-side monogon stays outside
        self._face_region[q] = region
        new_region = {
            "faces": inside_faces | {p},
            "isolated": inside_isolated,
        }
        self._regions.append(new_region)
        ridx = len(self._regions) - 1
        self._face_region[p] = ridx
        for fk in inside_faces:
            self._face_region[fk] = ridx

    def _register(self, arc_id: int, kind: str, u: int, w: int, darts) -> None:
        if arc_id in self.arcs:
            raise InputError(f"duplicate arc id {arc_id}")
        self.arcs[arc_id] = Arc(id=arc_id, kind=kind, u=u, v=w, darts=tuple(darts))

    def finalize(self) -> SphereMap:
        regions = [
            {"faces": sorted(r["faces"]), "isolated": sorted(r["isolated"])}
            for r in self._regions
        ]
        return SphereMap(self.rotations, self.arcs, self.cone, regions=regions)
