"""Dart-based embedded multigraphs.

An embedding is a rotation system: every edge e owns two darts 2e and 2e+1
(dart 2e leaves the first endpoint, 2e+1 the second), and each vertex holds
its incident darts in cyclic order.  Edge signatures in {+1,-1} support
non-orientable surfaces; all +1 means the rotation alone defines the surface.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import ContractViolation, DomainError, FormatError


class EmbeddedMultigraph:
    """Multigraph embedded in a surface, given by rotations and signatures.

    Loops and parallel edges are allowed.  A loop contributes both of its
    darts to the rotation of its vertex.
    """

    __slots__ = ("n", "edges", "rot", "root", "_tail", "_pos")

    def __init__(self, n, edges, rot, root=None, validate=True):
        self.n = n
        self.edges = [(u, v, s) for (u, v, s) in edges]
        self.rot = [list(r) for r in rot]
        self.root = root
        self._tail = None
        self._pos = None
        if validate:
            self.validate()

    @property
    def m(self):
        return len(self.edges)

    @property
    def num_darts(self):
        return 2 * len(self.edges)

    def dart_tail(self, d):
        e, side = d >> 1, d & 1
        u, v, _ = self.edges[e]
        return v if side else u

    def dart_head(self, d):
        return self.dart_tail(d ^ 1)

    def tails(self):
        """Array mapping dart -> tail vertex."""
        if self._tail is None:
            t = [0] * self.num_darts
            for e, (u, v, _) in enumerate(self.edges):
                t[2 * e] = u
                t[2 * e + 1] = v
            self._tail = t
        return self._tail

    def positions(self):
        """Array mapping dart -> index within its vertex rotation."""
        if self._pos is None:
            p = [-1] * self.num_darts
            for v in range(self.n):
                for i, d in enumerate(self.rot[v]):
                    p[d] = i
            self._pos = p
        return self._pos

    def degree(self, v):
        return len(self.rot[v])

    def validate(self):
        nd = self.num_darts
        if self.n < 1:
            raise FormatError("graph needs at least one vertex")
        if len(self.rot) != self.n:
            raise FormatError("rotation table size != vertex count")
        for u, v, s in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FormatError("edge endpoint out of range")
            if s not in (1, -1):
                raise FormatError("edge signature must be +1 or -1")
        seen = [False] * nd
        tails = self.tails()
        for v in range(self.n):
            for d in self.rot[v]:
                if not (0 <= d < nd):
                    raise FormatError(f"unknown dart {d} at vertex {v}")
                if seen[d]:
                    raise FormatError(f"dart {d} appears twice in rotations")
                if tails[d] != v:
                    raise FormatError(f"dart {d} listed at vertex {v}, "
                                      f"but its edge ends at {tails[d]}")
                seen[d] = True
        if not all(seen):
            missing = seen.index(False)
            raise FormatError(f"dart {missing} missing from rotations")
        if self.root is not None and not (0 <= self.root < self.n):
            raise FormatError("root vertex out of range")

    def is_connected(self):
        if self.n == 1:
            return True
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        tails = self.tails()
        while stack:
            v = stack.pop()
            for d in self.rot[v]:
                w = tails[d ^ 1]
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)

    def simple_adjacency(self):
        """Neighbour sets of the underlying simple graph (loops dropped)."""
        adj = [set() for _ in range(self.n)]
        for u, v, _ in self.edges:
            if u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj


@dataclass
class FaceSet:
    """Face partition produced by tracing an embedding scheme.

    Each face is a closed dart walk.  For orientable inputs every dart lies
    in exactly one walk; with negative signatures a walk may repeat a dart
    (once per traversal sense), and the total length is still 2m.
    """

    faces: list = field(default_factory=list)        # list of dart walks
    slot_face: list = field(default_factory=list)    # 2m entries: side-slot -> face id
    face_of_state: list = field(default_factory=list)  # 4m signed-dart states
    _vertex_walks: list = None

    @property
    def f(self):
        return len(self.faces)

    def vertex_walks(self, E):
        if self._vertex_walks is None:
            tails = E.tails()
            self._vertex_walks = [[tails[d] for d in walk] for walk in self.faces]
        return self._vertex_walks

    def is_disk_cycle(self, E, i):
        """True iff face i is bounded by a cycle: length >= 3, no repeats."""
        w = self.vertex_walks(E)[i]
        return len(w) >= 3 and len(set(w)) == len(w)

    def edge_slot_faces(self, e):
        """The two faces incident with edge e (equal for bridges' sides)."""
        return self.slot_face[2 * e], self.slot_face[2 * e + 1]


def trace_faces(E: EmbeddedMultigraph) -> FaceSet:
    """Trace the faces of an embedding scheme.

    Works on signed dart states: traversing an edge with signature -1 flips
    the local sense, so the rotation is then read backwards.  Each face is
    one orbit; the mirror orbit (same face, opposite sense) is suppressed.
    """
    m = E.m
    if m == 0:
        fs = FaceSet(faces=[], slot_face=[], face_of_state=[])
        return fs
    tails = E.tails()
    pos = E.positions()
    rot = E.rot
    signs = [0 if s == 1 else 1 for (_, _, s) in E.edges]

    nstates = 4 * m
    face_of_state = [-1] * nstates
    faces = []
    # plus-side states first: orientable faces then partition the darts
    starts = [2 * d for d in range(2 * m)] + [2 * d + 1 for d in range(2 * m)]
    for start in starts:
        if face_of_state[start] != -1:
            continue
        fid = len(faces)
        walk = []
        orbit = []
        s = start
        while True:
            face_of_state[s] = fid
            orbit.append(s)
            d, sb = s >> 1, s & 1
            walk.append(d)
            sb2 = sb ^ signs[d >> 1]
            t = d ^ 1
            v = tails[t]
            i = pos[t]
            deg = len(rot[v])
            if sb2 == 0:
                nd = rot[v][(i + 1) % deg]
            else:
                nd = rot[v][(i - 1) % deg]
            s = 2 * nd + sb2
            if s == start:
                break
            if face_of_state[s] != -1:
                raise ContractViolation("face walk closed away from its start")
        # the mirror orbit traverses the same face the other way
        for s in orbit:
            d, sb = s >> 1, s & 1
            ms = 2 * (d ^ 1) + (sb ^ 1 ^ signs[d >> 1])
            if face_of_state[ms] == -1:
                face_of_state[ms] = fid
            elif face_of_state[ms] != fid:
                raise ContractViolation("mirror orbit already claimed")
        faces.append(walk)

    slot_face = [0] * (2 * m)
    for e in range(m):
        slot_face[2 * e] = face_of_state[4 * e]          # state (dart 2e, +1)
        slot_face[2 * e + 1] = face_of_state[4 * e + 1]  # state (dart 2e, -1)
    fs = FaceSet(faces=faces, slot_face=slot_face,
                 face_of_state=face_of_state)
    if sum(len(w) for w in faces) != 2 * m:
        raise ContractViolation("face lengths do not sum to 2m")
    return fs


def euler_genus(E: EmbeddedMultigraph, faces: FaceSet = None) -> int:
    """Euler genus of the embedding: 2 - n + m - f for connected graphs."""
    if not E.is_connected():
        raise DomainError("Euler genus needs a connected graph")
    if faces is None:
        faces = trace_faces(E)
    g = 2 - E.n + E.m - faces.f
    if g < 0:
        raise ContractViolation(f"negative genus {g} from face count {faces.f}")
    return g


@dataclass
class BfsStructure:
    """BFS tree with depths and the layering V_0, V_1, ... by distance."""

    root: int
    parent: list          # parent vertex, -1 at root
    parent_edge: list     # edge id to parent, -1 at root
    depth: list
    layers: list          # layers[i] = vertices at distance i, ascending ids

    def tree_edge_set(self):
        return {e for e in self.parent_edge if e >= 0}


def bfs_structure(E: EmbeddedMultigraph, root: int) -> BfsStructure:
    """Breadth-first tree from root; neighbours explored in dart-id order."""
    if not (0 <= root < E.n):
        raise DomainError(f"root {root} is not a vertex")
    if not E.is_connected():
        raise DomainError("BFS layering needs a connected graph")
    tails = E.tails()
    parent = [-1] * E.n
    parent_edge = [-1] * E.n
    depth = [-1] * E.n
    depth[root] = 0
    q = deque([root])
    sorted_rot = [sorted(r) for r in E.rot]
    while q:
        v = q.popleft()
        dv = depth[v]
        for d in sorted_rot[v]:
            w = tails[d ^ 1]
            if depth[w] == -1:
                depth[w] = dv + 1
                parent[w] = v
                parent_edge[w] = d >> 1
                q.append(w)
    layers = []
    for v in range(E.n):
        dv = depth[v]
        while len(layers) <= dv:
            layers.append([])
        layers[dv].append(v)
    return BfsStructure(root=root, parent=parent, parent_edge=parent_edge,
                        depth=depth, layers=layers)


@dataclass
class DualGraph:
    """Non-tree dual: one vertex per face, one edge per non-tree primal edge."""

    num_faces: int
    edges: list           # (face1, face2, primal edge id)

    @property
    def num_edges(self):
        return len(self.edges)

    def is_connected(self):
        if self.num_faces <= 1:
            return True
        adj = [[] for _ in range(self.num_faces)]
        for a, b, _ in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = [False] * self.num_faces
        seen[0] = True
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        return all(seen)


def nontree_dual(E: EmbeddedMultigraph, T: BfsStructure,
                 faces: FaceSet = None) -> DualGraph:
    """Dual restricted to edges not crossed by the spanning tree."""
    if faces is None:
        faces = trace_faces(E)
    tree_edges = T.tree_edge_set()
    dedges = []
    for e in range(E.m):
        if e in tree_edges:
            continue
        f1, f2 = faces.edge_slot_faces(e)
        dedges.append((f1, f2, e))
    D = DualGraph(num_faces=faces.f, edges=dedges)
    if D.num_edges != E.m - (E.n - 1):
        raise ContractViolation("dual edge count != m - (n-1)")
    if not D.is_connected():
        raise ContractViolation("non-tree dual is disconnected")
    return D


def from_face_list(face_walks, n=None) -> EmbeddedMultigraph:
    """Build an orientable embedding from faces given as vertex cycles.

    Every undirected edge must be traversed exactly twice, in opposite
    directions, across all walks.
    """
    if n is None:
        n = 1 + max(v for w in face_walks for v in w)
    darts_of = {}       # (u, v, occurrence) bookkeeping via multimap
    edges = []
    pending = {}        # (v, u) -> list of dart ids awaiting their twin
    walk_darts = []
    for walk in face_walks:
        k = len(walk)
        ds = []
        for i in range(k):
            u, v = walk[i], walk[(i + 1) % k]
            key = (v, u)
            if pending.get(key):
                d = pending[key].pop() ^ 1
            else:
                e = len(edges)
                edges.append((u, v, 1))
                d = 2 * e
                pending.setdefault((u, v), []).append(d)
            ds.append(d)
        walk_darts.append(ds)
    if any(lst for lst in pending.values()):
        raise FormatError("face list does not traverse each edge twice")
    # successor-in-rotation: for consecutive face darts a -> d at vertex
    # tail(d), rotation successor of twin(a) is d
    succ = {}
    for ds in walk_darts:
        k = len(ds)
        for i in range(k):
            a, d = ds[i], ds[(i + 1) % k]
            if (a ^ 1) in succ:
                raise FormatError("inconsistent face list (not an embedding)")
            succ[a ^ 1] = d
    tails = [0] * (2 * len(edges))
    for e, (u, v, _) in enumerate(edges):
        tails[2 * e] = u
        tails[2 * e + 1] = v
    rot = [[] for _ in range(n)]
    placed = [False] * (2 * len(edges))
    for d0 in range(2 * len(edges)):
        if placed[d0]:
            continue
        v = tails[d0]
        cyc = []
        d = d0
        while not placed[d]:
            placed[d] = True
            cyc.append(d)
            d = succ[d]
            if tails[d] != v:
                raise FormatError("rotation cycle leaves its vertex")
        if rot[v]:
            raise FormatError(f"vertex {v} has a disconnected rotation")
        rot[v] = cyc
    E = EmbeddedMultigraph(n, edges, rot)
    return E


def parse_embedding(text: str) -> EmbeddedMultigraph:
    """Parse the embedding text format.

    Line 1: ``emg <n> <m>``; then ``e <id> <u> <v> <sign>`` per edge and
    ``v <id>: <edge>.<0|1> ...`` per vertex, rotation in cyclic order.
    '#' starts a comment.
    """
    try:
        return _parse_embedding(text)
    except (ValueError, IndexError) as ex:
        if isinstance(ex, FormatError):
            raise
        raise FormatError(f"malformed embedding: {ex}") from None


def _parse_embedding(text: str) -> EmbeddedMultigraph:
    lines = []
    for raw in text.splitlines():
        s = raw.split("#", 1)[0].strip()
        if s:
            lines.append(s)
    if not lines:
        raise FormatError("empty embedding file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "emg":
        raise FormatError("first line must be 'emg <n> <m>'")
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError("bad counts in header") from None
    edges = [None] * m
    rot = [None] * n
    root = None
    for ln in lines[1:]:
        parts = ln.replace(":", " : ").split()
        if parts[0] == "e":
            if len(parts) != 5:
                raise FormatError(f"bad edge line: {ln}")
            eid, u, v, s = (int(parts[1]), int(parts[2]),
                            int(parts[3]), int(parts[4]))
            if not (0 <= eid < m):
                raise FormatError(f"unknown edge id {eid}")
            if edges[eid] is not None:
                raise FormatError(f"duplicate edge id {eid}")
            edges[eid] = (u, v, s)
        elif parts[0] == "v":
            if ":" not in parts:
                raise FormatError(f"bad vertex line: {ln}")
            ci = parts.index(":")
            vid = int(parts[1])
            if not (0 <= vid < n):
                raise FormatError(f"unknown vertex id {vid}")
            if rot[vid] is not None:
                raise FormatError(f"duplicate vertex id {vid}")
            darts = []
            for tok in parts[ci + 1:]:
                if "." not in tok:
                    raise FormatError(f"bad dart token {tok}")
                es, ss = tok.split(".", 1)
                e, side = int(es), int(ss)
                if not (0 <= e < m) or side not in (0, 1):
                    raise FormatError(f"unknown dart {tok}")
                darts.append(2 * e + side)
            rot[vid] = darts
        elif parts[0] == "root":
            root = int(parts[1])
        else:
            raise FormatError(f"unknown line: {ln}")
    if any(e is None for e in edges):
        raise FormatError("missing edge line")
    for v in range(n):
        if rot[v] is None:
            rot[v] = []
    return EmbeddedMultigraph(n, edges, rot, root=root)


def serialize_embedding(E: EmbeddedMultigraph) -> str:
    out = [f"emg {E.n} {E.m}"]
    if E.root is not None:
        out.append(f"root {E.root}")
    for eid, (u, v, s) in enumerate(E.edges):
        out.append(f"e {eid} {u} {v} {s}")
    for v in range(E.n):
        toks = " ".join(f"{d >> 1}.{d & 1}" for d in E.rot[v])
        out.append(f"v {v}: {toks}")
    return "\n".join(out) + "\n"
