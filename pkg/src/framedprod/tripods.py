"""Partition a plane framed graph into boundary-anchored tripods.

The working graph is a plane multigraph whose faces all have length in
{3..d} after fanning longer faces with auxiliary chords.  Faces are kept as
polygonal cells; a step consumes one cell: up to three tree chains climb
from its corners until they hit assigned territory, the cell's leftover
corners are absorbed alongside (at most d-3 of them), and the remaining
cells fall apart into pockets that each see at most three parts.  Every
part therefore splits into at most three vertical tree paths plus a small
absorbed set, the quotient stays planar, and the bag of a step (the new
part plus the region's parts) witnesses treewidth at most 3.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .cut import RootedTree
from .embedding import EmbeddedMultigraph, FaceSet, trace_faces
from .errors import ContractViolation, DomainError

UNASSIGNED = -1
BLOCKED = -2          # apex vertices: walls for the flood, never in a part


@dataclass
class TriWorld:
    """Cell complex of the triangulated working graph."""

    nv: int
    d: int
    cells: list                 # vertex cycles, each of length 3..d
    cell_nbrs: list             # per cell: neighbour cell id per boundary edge
    cells_at: list              # per vertex: incident cell ids
    aux_chords: list            # fan chords added inside long faces
    source_face: list           # per cell: index of the original face

    @property
    def num_cells(self):
        return len(self.cells)


def triangulate_long_faces(E: EmbeddedMultigraph, d: int,
                           faces: FaceSet = None) -> TriWorld:
    """Fan every face longer than d from its smallest vertex.

    Faces of length at most d survive as whole polygonal cells; the fan
    chords are auxiliary and never enter the closure.
    """
    if faces is None:
        faces = trace_faces(E)
    walks = faces.vertex_walks(E)
    for i, w in enumerate(walks):
        if len(w) < 3 or len(set(w)) != len(w):
            raise DomainError(f"face {i} is not bounded by a cycle")

    cells = []
    aux_chords = []
    source_face = []
    # where each (face, walk position) lands: (cell id, edge position in cell)
    landing = {}
    fan_pairs = []               # (cell a, cell b) adjacent through a chord
    for fi, walk in enumerate(walks):
        k = len(walk)
        if k <= d:
            ci = len(cells)
            cells.append(list(walk))
            source_face.append(fi)
            for i in range(k):
                landing[(fi, i)] = (ci, i)
            continue
        a = min(range(k), key=lambda i: walk[i])
        rw = walk[a:] + walk[:a]           # rw[0] is the fan apex
        base = len(cells)
        for j in range(1, k - 1):
            cells.append([rw[0], rw[j], rw[j + 1]])
            source_face.append(fi)
            if j > 1:
                aux_chords.append((rw[0], rw[j]))
                fan_pairs.append((base + j - 2, base + j - 1))
        # walk position i joins rw positions: i' = (i - a) mod k
        for i in range(k):
            ip = (i - a) % k
            if ip == 0:
                landing[(fi, i)] = (base, 0)                  # edge rw0-rw1
            elif ip == k - 1:
                landing[(fi, i)] = (base + k - 3, 2)          # edge rw_{k-1}-rw0
            else:
                landing[(fi, i)] = (base + ip - 1, 1)         # rw_i - rw_{i+1}

    cell_nbrs = [[-1] * len(c) for c in cells]
    # real edges: pair the two slots of each edge through the face walks
    pos_in_face = {}
    for fi, walk in enumerate(faces.faces):
        for i, dart in enumerate(walk):
            key = (fi, dart >> 1)
            if key in pos_in_face:
                raise ContractViolation("edge repeats inside one disk face")
            pos_in_face[key] = i
    for e in range(E.m):
        f1, f2 = faces.edge_slot_faces(e)
        c1, p1 = landing[(f1, pos_in_face[(f1, e)])]
        c2, p2 = landing[(f2, pos_in_face[(f2, e)])]
        cell_nbrs[c1][p1] = c2
        cell_nbrs[c2][p2] = c1
    # aux chords: fan triangle j shares its closing chord with triangle j+1
    for a, b in fan_pairs:
        cell_nbrs[a][2] = b
        cell_nbrs[b][0] = a
    for c, nb in enumerate(cell_nbrs):
        if any(x == -1 for x in nb):
            raise ContractViolation(f"cell {c} has an unmatched boundary edge")

    cells_at = [[] for _ in range(E.n)]
    for ci, cyc in enumerate(cells):
        for v in cyc:
            cells_at[v].append(ci)
    return TriWorld(nv=E.n, d=d, cells=cells, cell_nbrs=cell_nbrs,
                    cells_at=cells_at, aux_chords=aux_chords,
                    source_face=source_face)


@dataclass
class Part:
    pid: int
    kind: str                   # "boundary" or "tripod"
    legs: list                  # vertical paths, topmost vertex first
    absorbed: list              # the small leftover set (size <= d-3)

    def vertices(self):
        out = []
        for leg in self.legs:
            out.extend(leg)
        out.extend(self.absorbed)
        return out


@dataclass
class HPartitionResult:
    parts: list
    part_of: list               # per vertex; BLOCKED for the apex
    h_edges: list               # sorted pairs of part ids
    bags: list                  # one bag per creation event, part id lists
    bag_parent: list
    boundary_part: int          # id of the distinguished part, or -1
    fallback_steps: int = 0


def tripod_partition(world: TriWorld, tree: RootedTree,
                     boundary: list = None, blocked: tuple = ()) -> HPartitionResult:
    """Partition the working graph; every region sees at most 3 parts.

    ``boundary``: optional vertex path pre-assigned as the distinguished
    part (the cut boundary).  ``blocked`` vertices (the apex) belong to no
    part and fence the flood.
    """
    nv = world.nv
    cells = world.cells
    parent = tree.parent

    part_of = [UNASSIGNED] * nv
    for v in blocked:
        part_of[v] = BLOCKED
    parts = []
    h_edges = []
    bags = []
    bag_parent = []
    boundary_part = -1
    fallback_steps = 0

    if boundary is not None:
        parts.append(Part(pid=0, kind="boundary", legs=[list(boundary)],
                          absorbed=[]))
        for v in boundary:
            part_of[v] = 0
        boundary_part = 0
        bags.append([0])
        bag_parent.append(-1)

    stamp = [0] * world.num_cells
    cur = 0

    # region work-stack: (seed cell, creator bag id)
    root_bag = 0 if boundary is not None else -1
    stack = [(c, root_bag) for c in range(world.num_cells - 1, -1, -1)]

    while stack:
        seed, creator = stack.pop()
        if all(part_of[v] != UNASSIGNED for v in cells[seed]):
            continue
        cur += 1
        rparts, candidates = _flood(world, part_of, stamp, cur, seed)
        if len(rparts) > 3:
            raise ContractViolation(
                f"region sees {len(rparts)} parts: {sorted(rparts)}")

        colors = {}

        def color_of(v):
            got = colors.get(v)
            if got is not None:
                return got
            chain = []
            x = v
            while part_of[x] == UNASSIGNED:
                got = colors.get(x)
                if got is not None:
                    break
                chain.append(x)
                x = parent[x]
                if x < 0:
                    raise ContractViolation("ancestor chain left the graph")
            if part_of[x] == BLOCKED:
                raise ContractViolation("ancestor chain reached the apex")
            c = got if got is not None else part_of[x]
            for y in chain:
                colors[y] = c
            return c

        tau = None
        if len(rparts) <= 1:
            tau = candidates[0]
        elif len(rparts) == 2:
            a, b = sorted(rparts)
            for c in candidates:
                cyc = cells[c]
                k = len(cyc)
                ps = [part_of[v] for v in cyc]
                if any({ps[i], ps[(i + 1) % k]} == {a, b} for i in range(k)):
                    tau = c
                    break
            if tau is None:
                tau = candidates[0]
                fallback_steps += 1
        else:
            want = frozenset(rparts)
            for c in candidates:
                got = set()
                for v in cells[c]:
                    p = part_of[v]
                    got.add(p if p != UNASSIGNED else color_of(v))
                if got >= want:
                    tau = c
                    break
            if tau is None:
                tau = candidates[0]
                fallback_steps += 1

        new_vertices = _consume(world, part_of, parent, parts, tau,
                                rparts, color_of)
        pid = parts[-1].pid
        for p in sorted(rparts):
            h_edges.append((p, pid))
        bag = sorted(rparts) + [pid]
        bags.append(bag)
        bag_parent.append(creator)
        my_bag = len(bags) - 1

        # every pocket is fenced off by a wall with a newly assigned
        # endpoint, so cells around the new part reach them all
        seeds = []
        seen_cells = set()
        for v in new_vertices:
            for c in world.cells_at[v]:
                if c != tau and c not in seen_cells:
                    seen_cells.add(c)
                    seeds.append(c)
        for c in reversed(seeds):
            stack.append((c, my_bag))

    leftover = sum(1 for v in range(nv) if part_of[v] == UNASSIGNED)
    if leftover:
        raise ContractViolation(f"{leftover} vertices left unassigned")

    return HPartitionResult(parts=parts, part_of=part_of,
                            h_edges=sorted(set(h_edges)), bags=bags,
                            bag_parent=bag_parent,
                            boundary_part=boundary_part,
                            fallback_steps=fallback_steps)


def _flood(world, part_of, stamp, cur, seed):
    """Collect the region of the seed: cells joined by not-fully-assigned
    edges.  Returns (incident parts, cells with an unassigned corner in
    BFS order)."""
    cells = world.cells
    nbrs = world.cell_nbrs
    rparts = set()
    add_part = rparts.add
    candidates = []
    stamp[seed] = cur
    q = deque([seed])
    pop = q.popleft
    push = q.append
    while q:
        c = pop()
        cyc = cells[c]
        nb = nbrs[c]
        open_corner = False
        for i, v in enumerate(cyc):
            p = part_of[v]
            if p == UNASSIGNED:
                open_corner = True
                n1 = nb[i]
                if stamp[n1] != cur:
                    stamp[n1] = cur
                    push(n1)
                n2 = nb[i - 1]
                if stamp[n2] != cur:
                    stamp[n2] = cur
                    push(n2)
            elif p >= 0:
                add_part(p)
        if open_corner:
            candidates.append(c)
    return rparts, candidates


def _consume(world, part_of, parent, parts, tau, rparts, color_of):
    """Create one part from cell ``tau``: legs from up to three corners,
    the remaining unassigned corners absorbed."""
    cyc = world.cells[tau]
    k = len(cyc)
    anchor = min(range(k), key=lambda i: cyc[i])
    ordered = cyc[anchor:] + cyc[:anchor]

    assigned = [v for v in ordered if part_of[v] >= 0]
    unassigned = [v for v in ordered if part_of[v] == UNASSIGNED]

    sources = []
    if rparts and unassigned:
        seen_colors = {part_of[v] for v in assigned}
        for v in unassigned:
            c = color_of(v)
            if c not in seen_colors:
                seen_colors.add(c)
                sources.append(v)
    need = 3 - len(assigned)
    for v in unassigned:
        if len(sources) >= need:
            break
        if v not in sources:
            sources.append(v)

    pid = len(parts)
    legs = []
    for u in sources:
        if part_of[u] != UNASSIGNED:
            continue
        chain = []
        x = u
        while x >= 0 and part_of[x] == UNASSIGNED:
            part_of[x] = pid
            chain.append(x)
            x = parent[x]
        chain.reverse()
        legs.append(chain)
    absorbed = []
    for v in unassigned:
        if part_of[v] == UNASSIGNED:
            part_of[v] = pid
            absorbed.append(v)
    if len(legs) > 3:
        raise ContractViolation("more than three legs in one part")
    if len(absorbed) > world.d - 3:
        raise ContractViolation(
            f"absorbed set has {len(absorbed)} vertices, cap is {world.d - 3}")
    if not legs and not absorbed:
        raise ContractViolation("step created an empty part")
    parts.append(Part(pid=pid, kind="tripod", legs=legs, absorbed=absorbed))
    new_vertices = [v for leg in legs for v in leg]
    new_vertices.extend(absorbed)
    return new_vertices


def project_partition(HPR: HPartitionResult, cut_result, cut_system,
                      n_original: int) -> HPartitionResult:
    """Collapse the cut-boundary copies back onto Z.

    The distinguished part keeps its id; its legs become the vertical path
    decomposition of Z in the original tree.  Every other part maps through
    the provenance bijection; containing a copy is an internal error.
    """
    prov = cut_result.provenance
    zp = set(cut_result.zprime)
    parts = []
    for part in HPR.parts:
        if part.pid == HPR.boundary_part:
            parts.append(Part(pid=part.pid, kind="boundary",
                              legs=[list(p) for p in cut_system.paths],
                              absorbed=[]))
            continue
        legs = []
        for leg in part.legs:
            if any(x in zp for x in leg):
                raise ContractViolation(
                    f"part {part.pid} contains a cut-boundary copy")
            legs.append([prov[x] for x in leg])
        absorbed = [prov[x] for x in part.absorbed]
        parts.append(Part(pid=part.pid, kind="tripod", legs=legs,
                          absorbed=absorbed))
    part_of = [None] * n_original
    for new_id, old_id in enumerate(prov):
        p = HPR.part_of[new_id]
        if p == BLOCKED:
            raise ContractViolation("a surviving vertex maps to the apex")
        part_of[old_id] = HPR.boundary_part if new_id in zp else p
    if any(p is None for p in part_of):
        raise ContractViolation("projection left a vertex unmapped")
    return HPartitionResult(parts=parts, part_of=part_of,
                            h_edges=list(HPR.h_edges), bags=HPR.bags,
                            bag_parent=HPR.bag_parent,
                            boundary_part=HPR.boundary_part,
                            fallback_steps=HPR.fallback_steps)
