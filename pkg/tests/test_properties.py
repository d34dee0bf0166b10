"""Cross-cutting invariants checked over randomized instances."""

from collections import deque

from hypothesis import given, settings
from hypothesis import strategies as st

from framedprod.assemble import decompose, serialize_certificate
from framedprod.cut import attach_apex, build_Tplus, build_Z, cut_along
from framedprod.embedding import bfs_structure, euler_genus, trace_faces
from framedprod.frame import close_frame
from framedprod.frontends import LAKE, NATION, LabelledMap, map_to_frame
from framedprod.generators import (
    gen_framed,
    gen_plane_triangulation,
    gen_toroidal_grid,
)
from framedprod.verify import rebuild_closure, verify_certificate

seeds = st.integers(0, 10_000)


@given(seeds, st.integers(5, 80))
@settings(max_examples=25, deadline=None)
def test_face_double_count(seed, n):
    E = gen_plane_triangulation(n, seed)
    fs = trace_faces(E)
    assert sum(len(w) for w in fs.faces) == 2 * E.m


@given(seeds, st.integers(12, 60), st.integers(4, 7))
@settings(max_examples=20, deadline=None)
def test_closure_edges_span_at_most_half_d(seed, n, d):
    E = gen_framed(n, d, 0, seed)
    F = close_frame(E, d)
    adj = E.simple_adjacency()
    for u, v in F.closure_edges():
        dist = {u: 0}
        q = deque([u])
        while q and v not in dist:
            x = q.popleft()
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    q.append(y)
        assert dist[v] <= d // 2


@given(seeds, st.integers(10, 120))
@settings(max_examples=20, deadline=None)
def test_bfs_depths_match_brute_force(seed, n):
    E = gen_plane_triangulation(n, seed)
    root = seed % n
    T = bfs_structure(E, root)
    adj = E.simple_adjacency()
    depth = {root: 0}
    q = deque([root])
    while q:
        x = q.popleft()
        for y in sorted(adj[x]):
            if y not in depth:
                depth[y] = depth[x] + 1
                q.append(y)
    assert T.depth == [depth[v] for v in range(E.n)]


@given(seeds, st.integers(10, 90), st.sampled_from([3, 4, 5, 6]))
@settings(max_examples=15, deadline=None)
def test_decompose_random_planar_frames(seed, n, d):
    E = gen_framed(n, d, 0, seed)
    cert = decompose(E, d, self_verify=False)
    assert verify_certificate(E, cert) == []
    assert cert.ell <= cert.bound


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_decompose_deterministic(seed):
    E = gen_plane_triangulation(40 + seed % 40, seed)
    a = serialize_certificate(decompose(E, 3, self_verify=False))
    b = serialize_certificate(decompose(E, 3, self_verify=False))
    assert a == b


class TestTreePlusStructure:
    def test_maximal_vertical_paths_decompose(self):
        """Climbing from any leaf of the rebuilt tree crosses: a piece of
        the old forest, one bridge edge, a piece of the boundary path, and
        the apex edge."""
        for mr, nc, root in ((3, 3, 0), (4, 5, 3), (6, 4, 11)):
            E = gen_toroidal_grid(mr, nc)
            T = bfs_structure(E, root)
            C = build_Z(E, T)
            R = cut_along(E, C)
            A = attach_apex(R)
            Tp, Pp = build_Tplus(A, T, R, C)
            zp = set(R.zprime)
            children = [0] * A.Gplus.n
            for v in range(A.Gplus.n):
                if Tp.parent[v] >= 0:
                    children[Tp.parent[v]] += 1
            for leaf in range(A.Gplus.n):
                if children[leaf] or leaf == A.rplus:
                    continue
                phases = []
                x = leaf
                while x != -1:
                    if x == A.rplus:
                        kind = "apex"
                    elif x in zp:
                        kind = "boundary"
                    else:
                        kind = "forest"
                    if not phases or phases[-1] != kind:
                        phases.append(kind)
                    x = Tp.parent[x]
                assert phases in (["forest", "boundary", "apex"],
                                  ["boundary", "apex"]), phases

    def test_projection_keeps_quotient(self):
        """The part adjacencies induced by the original closure are the
        same set before and after collapsing the cut copies."""
        for mr, nc in ((3, 4), (5, 5)):
            E = gen_toroidal_grid(mr, nc)
            cert = decompose(E, 4, self_verify=False)
            closure = rebuild_closure(E, 4)
            induced = set()
            for u in range(E.n):
                for v in closure[u]:
                    a, b = cert.part_of[u], cert.part_of[v]
                    if a != b:
                        induced.add((min(a, b), max(a, b)))
            declared = {(min(a, b), max(a, b)) for a, b in cert.h_edges}
            assert induced <= declared


class TestToroidalMaps:
    def test_checkerboard_torus_map(self):
        E = gen_toroidal_grid(4, 4)
        fs = trace_faces(E)
        labels = [NATION if i % 2 == 0 else LAKE for i in range(fs.f)]
        LM = LabelledMap(G0=E, labels=labels)
        res = map_to_frame(LM, 6)
        assert euler_genus(res.frame) == 2
        closure = rebuild_closure(res.frame, 6)
        for a, b in res.map_edges:
            assert res.nation_vertex[b] in closure[res.nation_vertex[a]]
        cert = decompose(res.frame, 6, self_verify=False)
        assert verify_certificate(res.frame, cert) == []
        assert cert.ell <= cert.bound

    def test_all_nations_torus(self):
        E = gen_toroidal_grid(3, 3)
        fs = trace_faces(E)
        LM = LabelledMap(G0=E, labels=[NATION] * fs.f)
        res = map_to_frame(LM, 4)   # every vertex meets 4 nations
        cert = decompose(res.frame, 4, self_verify=False)
        assert verify_certificate(res.frame, cert) == []


class TestCutDebugDump:
    def test_provenance_section(self):
        from framedprod.cut import serialize_cut_debug
        E = gen_toroidal_grid(3, 3)
        T = bfs_structure(E, 0)
        C = build_Z(E, T)
        R = cut_along(E, C)
        text = serialize_cut_debug(R)
        assert text.startswith("emg ")
        plines = [ln for ln in text.splitlines() if ln.startswith("p ")]
        assert len(plines) == R.Gt.n
        for ln in plines:
            _, copy, orig = ln.split()
            assert R.provenance[int(copy)] == int(orig)
