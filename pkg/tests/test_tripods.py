from collections import Counter

import pytest

from framedprod.cut import RootedTree
from framedprod.embedding import bfs_structure, from_face_list, trace_faces
from framedprod.frame import close_frame
from framedprod.generators import gen_framed, gen_plane_triangulation
from framedprod.tripods import triangulate_long_faces, tripod_partition
from framedprod.verify import check_planarity, exact_treewidth


def octahedron():
    return from_face_list([[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1],
                           [5, 2, 1], [5, 3, 2], [5, 4, 3], [5, 1, 4]])


def icosahedron():
    return from_face_list([
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
        [1, 6, 2], [2, 6, 7], [2, 7, 3], [3, 7, 8], [3, 8, 4],
        [4, 8, 9], [4, 9, 5], [5, 9, 10], [5, 10, 1], [1, 10, 6],
        [11, 7, 6], [11, 8, 7], [11, 9, 8], [11, 10, 9], [11, 6, 10],
    ])


def run_partition(E, d, root=0):
    fs = trace_faces(E)
    T = bfs_structure(E, root)
    world = triangulate_long_faces(E, d, fs)
    tree = RootedTree(root=T.root, parent=T.parent, parent_edge=T.parent_edge)
    return T, tripod_partition(world, tree)


class TestTriangulateLongFaces:
    def test_identity_when_faces_short(self):
        E = gen_plane_triangulation(20, 1)
        world = triangulate_long_faces(E, 3)
        assert world.aux_chords == []
        assert all(len(c) == 3 for c in world.cells)

    def test_six_face_fanned_for_d4(self):
        E = from_face_list([[0, 1, 2, 3, 4, 5], [5, 4, 3, 2, 1, 0]])
        world = triangulate_long_faces(E, 4)
        # each hexagon becomes 4 triangles via 3 chords from vertex 0
        assert len(world.cells) == 8
        assert all(len(c) == 3 for c in world.cells)
        assert len(world.aux_chords) == 6
        assert all(c[0] == 0 for c in world.aux_chords)

    def test_short_faces_kept_whole(self):
        E = from_face_list([[0, 1, 2, 3, 4], [4, 3, 2, 1, 0]])
        world = triangulate_long_faces(E, 5)
        assert sorted(len(c) for c in world.cells) == [5, 5]
        assert world.aux_chords == []

    def test_neighbour_structure_consistent(self):
        E = gen_framed(40, 6, 0, 5)
        world = triangulate_long_faces(E, 4)
        for c, nbrs in enumerate(world.cell_nbrs):
            cyc = world.cells[c]
            for i, nb in enumerate(nbrs):
                u, w = cyc[i], cyc[(i + 1) % len(cyc)]
                back = world.cell_nbrs[nb]
                pairs = [{world.cells[nb][j], world.cells[nb][(j + 1) % len(world.cells[nb])]}
                         for j in range(len(world.cells[nb]))]
                assert {u, w} in pairs
                assert c in back


class TestTripodPartition:
    def test_single_triangle(self):
        E = from_face_list([[0, 1, 2], [2, 1, 0]])
        T, R = run_partition(E, 3)
        assert len(R.parts) == 1
        assert sorted(R.parts[0].vertices()) == [0, 1, 2]

    def test_octahedron_contract(self):
        E = octahedron()
        T, R = run_partition(E, 3)
        assert all(not p.absorbed for p in R.parts)
        assert all(len(p.legs) <= 3 for p in R.parts)
        assert check_planarity(len(R.parts), R.h_edges)
        if len(R.parts) <= 12:
            adj = [set() for _ in range(len(R.parts))]
            for a, b in R.h_edges:
                adj[a].add(b)
                adj[b].add(a)
            assert exact_treewidth(adj) <= 3

    def test_icosahedron_layer_width(self):
        E = icosahedron()
        T, R = run_partition(E, 3)
        cnt = Counter()
        for v in range(E.n):
            cnt[(R.part_of[v], T.depth[v])] += 1
        assert max(cnt.values()) <= 3

    @pytest.mark.parametrize("n,seed", [(30, 0), (80, 1), (200, 2)])
    def test_partition_properties_triangulations(self, n, seed):
        E = gen_plane_triangulation(n, seed)
        T, R = run_partition(E, 3)
        # every real edge joins same or H-adjacent parts
        he = set(R.h_edges)
        for u, v, _ in E.edges:
            a, b = R.part_of[u], R.part_of[v]
            assert a == b or (min(a, b), max(a, b)) in he
        # legs vertical in the BFS tree, pairwise disjoint
        for part in R.parts:
            seen = set()
            for leg in part.legs:
                assert not (seen & set(leg))
                seen.update(leg)
                for a, b in zip(leg, leg[1:]):
                    assert T.parent[b] == a
        assert max(len(b) for b in R.bags) <= 4

    @pytest.mark.parametrize("d,seed", [(4, 3), (5, 4), (6, 5)])
    def test_closure_chords_covered(self, d, seed):
        E = gen_framed(60, d, 0, seed)
        F = close_frame(E, d)
        T, R = run_partition(E, d)
        he = set(R.h_edges)
        for u, v in F.closure_edges():
            a, b = R.part_of[u], R.part_of[v]
            assert a == b or (min(a, b), max(a, b)) in he
        for part in R.parts:
            assert len(part.absorbed) <= d - 3

    def test_no_fallback_on_triangulations(self):
        for seed in range(10):
            E = gen_plane_triangulation(100, seed)
            _, R = run_partition(E, 3)
            assert R.fallback_steps == 0

    def test_td_bags_form_tree(self):
        E = gen_plane_triangulation(60, 8)
        _, R = run_partition(E, 3)
        roots = [i for i, p in enumerate(R.bag_parent) if p == -1]
        assert len(roots) == 1
        for i, p in enumerate(R.bag_parent):
            assert p == -1 or p < i
