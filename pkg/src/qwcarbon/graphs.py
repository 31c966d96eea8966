"""Port-labeled regular graphs: cycles, the C60 cage, and nanotube structures.

Every graph here is undirected, connected, simple and degree-regular.  At each
node the edge ends ("ports") are numbered 0..d-1 in the cyclic order of the
node's rotation system, so the port numbering *is* the combinatorial
embedding.  The edge-end pairing is exposed through ``PortGraph.edge_map``:
``edge_map(u, a) = (v, b)`` returns the node and port at the other end of the
a-th edge at node u.  The pairing is an involution, which is what makes the
flip-flop shift of the walk engine self-inverse.

Builders return immutable graphs; they are pure functions and safe to share
across concurrent runs.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PortGraph",
    "LevelMap",
    "build_cycle",
    "build_c60",
    "build_nanotube_loop",
    "build_capped_nanotube",
    "compute_levels",
    "antipodal_target",
    "trace_faces",
    "face_nodes",
    "validate",
    "format_graph",
    "format_levels",
]


@dataclass(frozen=True, eq=False)
class PortGraph:
    """A degree-regular graph with port labels and a rotation system.

    Attributes
    ----------
    n : int
        Number of nodes; nodes are labeled 0..n-1.
    d : int
        Degree of every node.
    nbr : (n, d) int array
        ``nbr[u, a]`` is the node at the other end of port a of node u.
    nbr_port : (n, d) int array
        ``nbr_port[u, a]`` is the matching port at ``nbr[u, a]``.
    rotation : (n, d) int array or None
        Ports at each node listed in cyclic (counterclockwise) order.
        Builders number ports in rotation order, so rows are simply
        ``0..d-1``; ``None`` marks a graph without an embedding, on which
        face tracing is unsupported.
    metadata : dict
        Structure kind and build parameters, plus canonical node sets
        (e.g. the initial ring of a nanotube loop or the apex face of a
        capped tube) used by the experiment runner.
    """

    n: int
    d: int
    nbr: np.ndarray
    nbr_port: np.ndarray
    rotation: np.ndarray | None
    metadata: dict

    def edge_map(self, u: int, a: int) -> tuple[int, int]:
        """The edge-label function: ordered (node, port) pair across edge a of u."""
        return int(self.nbr[u, a]), int(self.nbr_port[u, a])

    def neighbors(self, u: int) -> list[int]:
        return [int(v) for v in self.nbr[u]]

    @property
    def num_edges(self) -> int:
        return self.n * self.d // 2

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        kind = self.metadata.get("kind", "?")
        return f"<PortGraph {kind}: n={self.n} d={self.d}>"


@dataclass(frozen=True, eq=False)
class LevelMap:
    """Projection of nodes onto integer levels by distance from an initial set.

    ``level[v]`` is the breadth-first distance of v from ``initial_set``;
    ``target_set`` collects every node at the maximal level.
    """

    level: np.ndarray
    num_levels: int
    initial_set: tuple[int, ...]
    target_set: tuple[int, ...]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _graph_from_rotations(
    nbr_lists: Sequence[Sequence[int]], metadata: dict
) -> PortGraph:
    """Assemble a PortGraph from per-node neighbor lists given in rotation order."""
    n = len(nbr_lists)
    d = len(nbr_lists[0])
    nbr = np.array(nbr_lists, dtype=np.int64)
    if nbr.shape != (n, d):
        raise ValueError("all nodes must have the same degree")
    nbr_port = np.full((n, d), -1, dtype=np.int64)
    index_at: list[dict[int, int]] = [dict() for _ in range(n)]
    for u in range(n):
        for a, v in enumerate(nbr_lists[u]):
            if v == u:
                raise ValueError(f"self-loop at node {u}")
            if v in index_at[u]:
                raise ValueError(f"parallel edge {u}-{v}")
            index_at[u][v] = a
    for u in range(n):
        for a, v in enumerate(nbr_lists[u]):
            try:
                nbr_port[u, a] = index_at[v][u]
            except KeyError:
                raise ValueError(f"edge {u}->{v} has no matching end") from None
    rotation = np.tile(np.arange(d, dtype=np.int64), (n, 1))
    g = PortGraph(
        n=n,
        d=d,
        nbr=_freeze(nbr),
        nbr_port=_freeze(nbr_port),
        rotation=_freeze(rotation),
        metadata=metadata,
    )
    validate(g)
    return g


def validate(g: PortGraph) -> None:
    """Check the PortGraph invariants; raises ValueError on any violation.

    Verified: the edge map is an involution without fixed points, the graph
    is simple, degree-regular by construction, and connected.
    """
    n, d = g.n, g.d
    u_idx = np.repeat(np.arange(n), d)
    a_idx = np.tile(np.arange(d), n)
    v = g.nbr[u_idx, a_idx]
    b = g.nbr_port[u_idx, a_idx]
    if np.any(v == u_idx):
        raise ValueError("self-loop port detected")
    if not (np.all(g.nbr[v, b] == u_idx) and np.all(g.nbr_port[v, b] == a_idx)):
        raise ValueError("edge map is not an involution")
    for u in range(n):
        if len(set(g.nbr[u])) != d:
            raise ValueError(f"parallel edges at node {u}")
    # connectivity by breadth-first traversal
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = deque([0])
    while frontier:
        u = frontier.popleft()
        for v2 in g.nbr[u]:
            if not seen[v2]:
                seen[v2] = True
                frontier.append(int(v2))
    if not seen.all():
        raise ValueError("graph is not connected")


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def build_cycle(n: int) -> PortGraph:
    """Cycle graph C_n with the conventional labeling: port 1 of node j
    connects to port 0 of node j+1 (mod n)."""
    if n < 3:
        raise ValueError(f"cycle needs at least 3 nodes, got {n}")
    nbr_lists = [[(j - 1) % n, (j + 1) % n] for j in range(n)]
    return _graph_from_rotations(nbr_lists, {"kind": "cycle", "n": n})


# Golden-ratio icosahedron; edge length 2 for this embedding.
_PHI = (1.0 + math.sqrt(5.0)) / 2.0
_ICO_COORDS = np.array(
    [
        [-1.0, _PHI, 0.0],
        [1.0, _PHI, 0.0],
        [-1.0, -_PHI, 0.0],
        [1.0, -_PHI, 0.0],
        [0.0, -1.0, _PHI],
        [0.0, 1.0, _PHI],
        [0.0, -1.0, -_PHI],
        [0.0, 1.0, -_PHI],
        [_PHI, 0.0, -1.0],
        [_PHI, 0.0, 1.0],
        [-_PHI, 0.0, -1.0],
        [-_PHI, 0.0, 1.0],
    ]
)


def _ccw_order(center: np.ndarray, normal: np.ndarray, points: list[np.ndarray]) -> list[int]:
    """Indices of `points` sorted counterclockwise around `normal` at `center`."""
    nz = normal / np.linalg.norm(normal)
    ref = np.zeros(3)
    ref[int(np.argmin(np.abs(nz)))] = 1.0
    t1 = ref - np.dot(ref, nz) * nz
    t1 /= np.linalg.norm(t1)
    t2 = np.cross(nz, t1)
    ang = []
    for p in points:
        rel = p - center
        ang.append(math.atan2(float(np.dot(rel, t2)), float(np.dot(rel, t1))))
    return sorted(range(len(points)), key=lambda i: ang[i])


def build_c60() -> PortGraph:
    """The truncated-icosahedron cage: 60 nodes, 90 edges, 3-regular,
    12 pentagonal and 20 hexagonal faces.

    Construction: truncate the icosahedron.  Each cage node is an
    (icosahedron vertex, incident edge) pair; pentagon edges join rotation
    neighbors around a vertex and the remaining edges follow the original
    icosahedron edges.  The rotation system is inherited from the geometric
    embedding, so the face census is a real check, not an input.
    """
    coords = _ICO_COORDS
    nv = len(coords)
    adj = [
        [w for w in range(nv) if w != v and np.dot(coords[v] - coords[w], coords[v] - coords[w]) < 4.1]
        for v in range(nv)
    ]
    # cyclic neighbor order around each icosahedron vertex
    rot = []
    for v in range(nv):
        order = _ccw_order(coords[v], coords[v], [coords[w] for w in adj[v]])
        rot.append([adj[v][i] for i in order])

    node_id = {}
    pos = np.zeros((60, 3))
    for v in range(nv):
        for i, w in enumerate(rot[v]):
            node_id[(v, w)] = 5 * v + i
            pos[5 * v + i] = coords[v] + (coords[w] - coords[v]) / 3.0

    nbr_sets: list[list[int]] = [[] for _ in range(60)]
    for v in range(nv):
        for i, w in enumerate(rot[v]):
            u = node_id[(v, w)]
            nbr_sets[u].append(node_id[(v, rot[v][(i + 1) % 5])])
            nbr_sets[u].append(node_id[(v, rot[v][(i - 1) % 5])])
            nbr_sets[u].append(node_id[(w, v)])

    nbr_lists = []
    for u in range(60):
        pts = [pos[x] for x in nbr_sets[u]]
        order = _ccw_order(pos[u], pos[u], pts)
        nbr_lists.append([nbr_sets[u][i] for i in order])
    return _graph_from_rotations(nbr_lists, {"kind": "c60"})


def _torus_rotation_lists(rows: int, cols: int) -> list[list[int]]:
    """Honeycomb brick-wall lattice on a torus.

    Node (r, c) has horizontal bonds to (r, c+-1) and one vertical bond:
    up to (r+1, c) when r+c is even, else down to (r-1, c).  Rows and
    columns must both be even or the vertical-bond parity cannot close.
    Neighbor lists are in counterclockwise rotation order.
    """
    def nid(r: int, c: int) -> int:
        return (r % rows) * cols + (c % cols)

    lists = []
    for r in range(rows):
        for c in range(cols):
            left = nid(r, c - 1)
            right = nid(r, c + 1)
            if (r + c) % 2 == 0:
                lists.append([left, nid(r + 1, c), right])
            else:
                lists.append([nid(r - 1, c), left, right])
    return lists


def build_nanotube_loop(kind: str, circumference: int, repeats: int) -> PortGraph:
    """Nanotube joined end-to-end into a torus-topology graph.

    `kind` selects whether the zig-zag pattern runs around the tube
    ("zigzag") or along it ("armchair").  `circumference` is the number of
    atoms in one ring around the tube (even, at least 6); `repeats` counts
    the hexagon bands along the loop.  Level maps from the canonical ring
    (stored in ``metadata["ring"]``) have exactly ``repeats + 1`` levels.
    """
    if kind not in ("zigzag", "armchair"):
        raise ValueError(f"unknown nanotube kind {kind!r}")
    if circumference < 6 or circumference % 2 != 0:
        raise ValueError(
            f"circumference must be even and >= 6, got {circumference}"
        )
    if repeats < 2:
        raise ValueError(f"repeats must be >= 2, got {repeats}")
    if kind == "zigzag":
        if repeats % 2 != 0:
            raise ValueError(
                "zigzag loops need an even number of repeats to close the torus"
            )
        rows, cols = repeats, 2 * circumference
        # one atom ring: the up-atoms of row 0
        ring = tuple(c for c in range(0, cols, 2))
    else:
        rows, cols = circumference, 2 * repeats
        # one atom ring: column 0
        ring = tuple(r * cols for r in range(rows))
    lists = _torus_rotation_lists(rows, cols)
    meta = {
        "kind": f"{kind}-loop",
        "circumference": circumference,
        "repeats": repeats,
        "rows": rows,
        "cols": cols,
        "ring": ring,
    }
    return _graph_from_rotations(lists, meta)


def _cylinder_ccw(
    ring_of: np.ndarray, angle_of: np.ndarray, u: int, nbrs: list[int]
) -> list[int]:
    """Sort neighbors of a capped-tube atom counterclockwise as seen from
    outside the cylinder, using (ring index, angular position) coordinates."""
    ang = []
    for v in nbrs:
        dth = angle_of[v] - angle_of[u]
        dth = (dth + math.pi) % (2.0 * math.pi) - math.pi
        dz = ring_of[v] - ring_of[u]
        ang.append(math.atan2(dz, dth))
    return [nbrs[i] for i in sorted(range(len(nbrs)), key=lambda i: ang[i])]


def _capped_graph(
    ring_sizes: list[int],
    bonds: list[tuple[int, int]],
    ring_angle_offsets: list[float],
    metadata: dict,
) -> PortGraph:
    """Assemble a capped tube from ring sizes and explicit bonds.

    Atom ids are assigned ring-major; angular offsets give each ring its
    angular alignment so rotation systems can be read off the cylindrical
    embedding.
    """
    starts = np.cumsum([0] + ring_sizes)
    n = int(starts[-1])
    ring_of = np.zeros(n)
    angle_of = np.zeros(n)
    for s, size in enumerate(ring_sizes):
        for j in range(size):
            a = starts[s] + j
            ring_of[a] = s
            angle_of[a] = 2.0 * math.pi * (j + ring_angle_offsets[s]) / size
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in bonds:
        nbrs[u].append(v)
        nbrs[v].append(u)
    lists = [_cylinder_ccw(ring_of, angle_of, u, nbrs[u]) for u in range(n)]
    return _graph_from_rotations(lists, metadata)


def build_capped_nanotube(kind: str, length: int) -> PortGraph:
    """Closed tube with half-C60 caps; sphere topology, exactly 12 pentagons.

    `length` is the number of extra tube rings inserted between the two C60
    halves, so ``length == 0`` reproduces a C60-isomorphic cage and the
    level map from the apex face has ``8 + length`` levels.  The armchair
    variant has a pentagonal face at each apex and rings of 10 atoms; the
    zig-zag variant has hexagonal apices, rings of 9 atoms, and needs even
    `length` for the ring pattern to close.
    """
    if kind == "armchair":
        return _capped_armchair(length)
    if kind == "zigzag":
        return _capped_zigzag(length)
    raise ValueError(f"unknown nanotube kind {kind!r}")


def _capped_armchair(length: int) -> PortGraph:
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    m = 4 + length  # number of 10-atom tube rings; 4 reproduces C60
    sizes = [5, 5] + [10] * m + [5, 5]
    offsets = [0.25, 0.25] + [0.0] * m + [0.0, 0.0]
    S = np.cumsum([0] + sizes)
    P, B = S[0], S[1]
    T = [S[2 + s] for s in range(m)]
    B2, P2 = S[2 + m], S[3 + m]

    bonds: list[tuple[int, int]] = []
    for i in range(5):
        bonds.append((P + i, P + (i + 1) % 5))  # apex pentagon
        bonds.append((P + i, B + i))
        bonds.append((B + i, T[0] + 2 * i))
        bonds.append((B + i, T[0] + 2 * i + 1))
    for s in range(m):
        off = 1 if (s + 1) % 2 == 1 else 0  # ring pairing alternates
        for j in range(0, 10, 2):
            bonds.append((T[s] + (j + off) % 10, T[s] + (j + off + 1) % 10))
        if s + 1 < m:
            for j in range(10):
                bonds.append((T[s] + j, T[s + 1] + j))
    # bottom cap grabs the adjacent duo not paired inside the last ring
    delta = 1 if m % 2 == 0 else 0
    for i in range(5):
        bonds.append((B2 + i, T[m - 1] + (2 * i + delta) % 10))
        bonds.append((B2 + i, T[m - 1] + (2 * i + 1 + delta) % 10))
        bonds.append((B2 + i, P2 + i))
        bonds.append((P2 + i, P2 + (i + 1) % 5))
    offsets[2 + m] = (delta + 0.5) / 2.0
    offsets[3 + m] = (delta + 0.5) / 2.0
    meta = {
        "kind": "armchair-capped",
        "length": length,
        "apex": tuple(range(P, P + 5)),
        "far_apex": tuple(range(P2, P2 + 5)),
    }
    return _capped_graph(sizes, bonds, offsets, meta)


def _capped_zigzag(length: int) -> PortGraph:
    if length < 0 or length % 2 != 0:
        raise ValueError(
            f"zigzag caps need an even, non-negative length, got {length}"
        )
    M = 4 + length  # number of 9-atom tube rings; 4 reproduces C60
    sizes = [6, 6] + [9] * M + [6, 6]
    S = np.cumsum([0] + sizes)
    H, Sg = S[0], S[1]
    Z = [S[2 + s] for s in range(M)]
    S2, H2 = S[2 + M], S[3 + M]

    bonds: list[tuple[int, int]] = []
    for i in range(6):
        bonds.append((H + i, H + (i + 1) % 6))  # apex hexagon
        bonds.append((H + i, Sg + i))
    for gidx in range(3):
        a = Z[0] + 3 * gidx
        bonds.append((Sg + 2 * gidx, a))
        bonds.append((Sg + 2 * gidx, Z[0] + (3 * gidx - 1) % 9))
        bonds.append((Sg + 2 * gidx + 1, a))
        bonds.append((Sg + 2 * gidx + 1, Z[0] + 3 * gidx + 1))
        bonds.append((Z[0] + 3 * gidx + 1, Z[0] + 3 * gidx + 2))  # cap-edge pair
    for s in range(M - 1):
        if (s + 1) % 2 == 1:  # vertical boundary
            for j in range(9):
                bonds.append((Z[s] + j, Z[s + 1] + j))
        else:  # zig-zag boundary
            for j in range(9):
                bonds.append((Z[s] + j, Z[s + 1] + j))
                bonds.append((Z[s] + j, Z[s + 1] + (j + 1) % 9))
    # mirrored bottom cap; angular alignment fixed by the C60-isomorphism check
    sgn, delta = _ZIGZAG_BOTTOM_ALIGNMENT
    last = Z[M - 1]

    def zb(j: int) -> int:
        return last + (sgn * j + delta) % 9

    for gidx in range(3):
        bonds.append((zb(3 * gidx + 1), zb(3 * gidx + 2)))  # cap-edge pair
        bonds.append((S2 + 2 * gidx, zb(3 * gidx)))
        bonds.append((S2 + 2 * gidx, zb(3 * gidx - 1)))
        bonds.append((S2 + 2 * gidx + 1, zb(3 * gidx)))
        bonds.append((S2 + 2 * gidx + 1, zb(3 * gidx + 1)))
    for i in range(6):
        bonds.append((S2 + i, H2 + i))
        bonds.append((H2 + i, H2 + (i + 1) % 6))

    # angular offsets: cap rings sit between the tube positions they bond to
    offsets = [0.0] * len(sizes)
    offsets[0] = offsets[1] = 0.0
    zoff = 0.75
    for s in range(M):
        offsets[2 + s] = zoff
        if s + 1 < M and (s + 1) % 2 == 0:
            zoff -= 0.5  # zig-zag boundaries shift the angular grid
    # bottom S/H rings follow the mirrored attachment pattern
    offsets[2 + M] = offsets[3 + M] = 0.0
    meta = {
        "kind": "zigzag-capped",
        "length": length,
        "apex": tuple(range(H, H + 6)),
        "far_apex": tuple(range(H2, H2 + 6)),
    }
    sizes_f = sizes
    g = _capped_zigzag_with_angles(sizes_f, bonds, offsets, meta)
    return g


def _capped_zigzag_with_angles(sizes, bonds, offsets, meta) -> PortGraph:
    """Like _capped_graph, but derives the bottom-cap angular positions from
    the atoms they bond to, since the mirrored attachment pattern fixes them."""
    starts = np.cumsum([0] + sizes)
    n = int(starts[-1])
    ring_of = np.zeros(n)
    angle_of = np.zeros(n)
    for s, size in enumerate(sizes):
        for j in range(size):
            a = starts[s] + j
            ring_of[a] = s
            angle_of[a] = 2.0 * math.pi * (j + offsets[s]) / size
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in bonds:
        nbrs[u].append(v)
        nbrs[v].append(u)
    # bottom cap rings: angular position = circular mean of lower-ring bonds
    nrings = len(sizes)
    for s in (nrings - 2, nrings - 1):
        for j in range(sizes[s]):
            a = starts[s] + j
            below = [v for v in nbrs[a] if ring_of[v] == s - 1]
            if below:
                vecs = [np.exp(1j * angle_of[v]) for v in below]
                angle_of[a] = float(np.angle(np.mean(vecs)))
    lists = [_cylinder_ccw(ring_of, angle_of, u, nbrs[u]) for u in range(n)]
    return _graph_from_rotations(lists, meta)


# Bottom-cap alignment of the zig-zag capped tube: (sign, offset) applied to
# the angular index of the last tube ring.  Offsets not congruent to 2 mod 3
# still pass the face census but build a twisted cage that is not C60;
# verified by isomorphism of the length-0 tube against build_c60().
_ZIGZAG_BOTTOM_ALIGNMENT = (1, 2)


# ---------------------------------------------------------------------------
# level maps, faces, export
# ---------------------------------------------------------------------------


def compute_levels(g: PortGraph, initial_set: Iterable[int]) -> LevelMap:
    """Breadth-first level map from `initial_set`; the target set collects
    all nodes at the maximal distance."""
    init = sorted(set(int(v) for v in initial_set))
    if not init:
        raise ValueError("initial set must not be empty")
    for v in init:
        if not 0 <= v < g.n:
            raise ValueError(f"node {v} outside graph")
    level = np.full(g.n, -1, dtype=np.int64)
    frontier = deque(init)
    for v in init:
        level[v] = 0
    while frontier:
        u = frontier.popleft()
        for v in g.nbr[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                frontier.append(int(v))
    num_levels = int(level.max()) + 1
    target = tuple(int(v) for v in np.flatnonzero(level == num_levels - 1))
    return LevelMap(
        level=_freeze(level),
        num_levels=num_levels,
        initial_set=tuple(init),
        target_set=target,
    )


def antipodal_target(g: PortGraph, initial_set: Iterable[int]) -> tuple[int, ...]:
    """Nodes at maximal breadth-first distance from the initial set."""
    return compute_levels(g, initial_set).target_set


def trace_faces(g: PortGraph) -> list[list[tuple[int, int]]]:
    """Faces of the embedding as orbits of next-port-after-crossing.

    Each directed (node, port) dart lies on exactly one face; the returned
    faces partition the 2E darts.  Requires the rotation system.
    """
    if g.rotation is None:
        raise ValueError("graph carries no rotation system; cannot trace faces")
    rot_next = np.empty((g.n, g.d), dtype=np.int64)
    for u in range(g.n):
        order = g.rotation[u]
        for k in range(g.d):
            rot_next[u, order[k]] = order[(k + 1) % g.d]
    seen = np.zeros((g.n, g.d), dtype=bool)
    faces = []
    for u0 in range(g.n):
        for a0 in range(g.d):
            if seen[u0, a0]:
                continue
            face = []
            u, a = u0, a0
            while not seen[u, a]:
                seen[u, a] = True
                face.append((u, a))
                v, b = g.edge_map(u, a)
                u, a = v, int(rot_next[v, b])
            faces.append(face)
    return faces


def face_nodes(g: PortGraph, size: int) -> tuple[int, ...]:
    """Nodes of the first traced face with `size` sides (deterministic)."""
    for face in trace_faces(g):
        if len(face) == size:
            return tuple(u for u, _ in face)
    raise ValueError(f"graph has no face of size {size}")


def format_graph(g: PortGraph) -> str:
    """Plain-text adjacency-with-ports export, one line per node:
    ``node: (v0,b0) (v1,b1) ...``"""
    lines = []
    for u in range(g.n):
        ends = " ".join(
            f"({int(g.nbr[u, a])},{int(g.nbr_port[u, a])})" for a in range(g.d)
        )
        lines.append(f"{u}: {ends}")
    return "\n".join(lines) + "\n"


def format_levels(lm: LevelMap) -> str:
    """Level-map export as ``node,level`` CSV."""
    lines = ["node,level"]
    for v, lv in enumerate(lm.level):
        lines.append(f"{v},{int(lv)}")
    return "\n".join(lines) + "\n"
