import pytest

from sdnsched.model import TopoKind
from sdnsched.topology import (
    bfs_hops,
    derive_alpha,
    gen_f10,
    gen_fat_tree,
    gen_jellyfish,
    gen_three_tier,
    hop_matrix,
    place_controllers,
)


def degrees(topo):
    return {n: len(topo.adjacency[n]) for n in topo.adjacency}


class TestFatTree:
    def test_k4_counts(self):
        t = gen_fat_tree(4)
        assert t.n_switches == 20
        assert t.n_hosts == 16
        assert len(t.pods) == 4

    def test_k24_counts(self):
        t = gen_fat_tree(24)
        assert t.n_switches == 720
        assert t.n_hosts == 24 ** 3 // 4

    @pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
    def test_closed_forms(self, k):
        t = gen_fat_tree(k)
        assert t.n_switches == 5 * k * k // 4
        assert t.n_hosts == k ** 3 // 4

    def test_edge_switch_degree(self):
        t = gen_fat_tree(4)
        deg = degrees(t)
        # every edge switch: k/2 aggregates + k/2 hosts
        for pod in t.pods:
            for e in pod[:2]:
                assert deg[e] == 4

    def test_every_host_one_tor(self):
        t = gen_fat_tree(4)
        for h in t.hosts:
            assert len(t.adjacency[h]) == 1

    def test_connected(self):
        t = gen_fat_tree(6)
        assert len(bfs_hops(t.adjacency, 0)) == t.n_switches + t.n_hosts

    @pytest.mark.parametrize("k", [3, 2, 5])
    def test_rejects_bad_k(self, k):
        with pytest.raises(ValueError):
            gen_fat_tree(k)


class TestThreeTier:
    def test_k26_count(self):
        assert gen_three_tier(26).n_switches == 702

    def test_k4_counts(self):
        t = gen_three_tier(4)
        assert t.n_switches == 20
        assert t.n_hosts == 24

    @pytest.mark.parametrize("k", [4, 6, 8])
    def test_closed_forms(self, k):
        t = gen_three_tier(k)
        assert t.n_switches == k * k + k
        assert t.n_hosts == (k ** 3 - k ** 2) // 2

    def test_aggregate_degree(self):
        t = gen_three_tier(4)
        deg = degrees(t)
        for pod in t.pods:
            agg = pod[-1]
            assert deg[agg] == 3 + 4  # k-1 edges + k cores

    def test_rejects_odd_k(self):
        with pytest.raises(ValueError):
            gen_three_tier(5)


class TestF10:
    def test_k24_count(self):
        assert gen_f10(24).n_switches == 720

    def test_node_counts_match_fat_tree(self):
        f, ft = gen_f10(4), gen_fat_tree(4)
        assert f.n_switches == ft.n_switches
        assert f.n_hosts == ft.n_hosts
        assert f.pods == ft.pods

    def test_wiring_differs_only_for_odd_pods(self):
        f, ft = gen_f10(4), gen_fat_tree(4)
        fe, fte = set(f.edges()), set(ft.edges())
        half = 2
        n_edge = n_agg = 4 * half
        core_start = n_edge + n_agg

        def is_agg_core(u, v):
            return n_edge <= u < core_start and core_start <= v < core_start + 4

        diff = fe ^ fte
        assert diff, "F10 must rewire some aggregate-core links"
        for u, v in diff:
            assert is_agg_core(u, v)
            pod = (u - n_edge) // half
            assert pod % 2 == 1

    def test_same_alpha_as_fat_tree(self):
        for k in (4, 8):
            f, ft = gen_f10(k), gen_fat_tree(k)
            af = derive_alpha(hop_matrix(f, place_controllers(f)))
            aft = derive_alpha(hop_matrix(ft, place_controllers(ft)))
            assert af == aft


class TestJellyfish:
    def test_counts(self):
        t = gen_jellyfish(8, 1, 2, seed=3)
        assert t.n_switches == 80
        assert t.n_hosts == 128
        assert t.pods == ()

    def test_same_seed_identical(self):
        a = gen_jellyfish(8, 1, 2, seed=7)
        b = gen_jellyfish(8, 1, 2, seed=7)
        assert a.edges() == b.edges()

    def test_different_seed_same_degree_sequence(self):
        a = gen_jellyfish(8, 1, 2, seed=1)
        b = gen_jellyfish(8, 1, 2, seed=2)
        assert a.edges() != b.edges()
        da = sorted(len(a.adjacency[s]) for s in a.switches)
        db = sorted(len(b.adjacency[s]) for s in b.switches)
        assert da == db

    def test_port_accounting(self):
        t = gen_jellyfish(8, 1, 2, seed=5)
        for s in t.switches:
            nbrs = t.adjacency[s]
            n_hosts = sum(1 for n in nbrs if n >= t.n_switches)
            assert 1 <= n_hosts <= 2
            assert len(nbrs) <= t.k

    def test_connected(self):
        t = gen_jellyfish(8, 1, 2, seed=5)
        assert len(bfs_hops(t.adjacency, 0)) == t.n_switches + t.n_hosts

    def test_rejects_infeasible_hosts(self):
        with pytest.raises(ValueError):
            gen_jellyfish(8, 3, 3, seed=0)  # 240 host ports != 128


class TestPlacement:
    def test_fat_tree_24_has_12(self):
        t = gen_fat_tree(24)
        assert place_controllers(t).controller_count == 12

    def test_three_tier_26_has_13(self):
        t = gen_three_tier(26)
        assert place_controllers(t).controller_count == 13

    def test_hosts_distinct(self):
        p = place_controllers(gen_fat_tree(8))
        assert len(set(p.controller_hosts)) == p.controller_count

    def test_jellyfish_non_adjacent_tors(self):
        t = gen_jellyfish(8, 1, 2, seed=11)
        p = place_controllers(t, seed=11)
        assert p.controller_count == 4
        sw = set(t.switches)
        tors = [next(n for n in t.adjacency[h] if n in sw)
                for h in p.controller_hosts]
        assert len(set(tors)) == len(tors)
        for i, a in enumerate(tors):
            for b in tors[i + 1:]:
                assert b not in t.adjacency[a]

    def test_jellyfish_deterministic(self):
        t = gen_jellyfish(8, 1, 2, seed=11)
        assert place_controllers(t, seed=3) == place_controllers(t, seed=3)


class TestHopMatrix:
    def test_tor_is_one_hop(self):
        t = gen_fat_tree(4)
        p = place_controllers(t)
        w = hop_matrix(t, p)
        host = p.controller_hosts[0]
        tor = next(n for n in t.adjacency[host] if n < t.n_switches)
        assert w[tor][0] == 1

    def test_same_pod_different_tor_is_three(self):
        t = gen_fat_tree(4)
        p = place_controllers(t)
        w = hop_matrix(t, p)
        # controller 0 sits under edge switch 0 of pod 0; edge switch 1
        # of pod 0 reaches it via an aggregate
        assert w[1][0] == 3

    def test_other_pod_is_five(self):
        t = gen_fat_tree(4)
        w = hop_matrix(t, place_controllers(t))
        # pod 2's first edge switch, controller 0 in pod 0
        assert w[t.pods[2][0]][0] == 5

    def test_reverse_bfs_agrees(self):
        t = gen_fat_tree(4)
        p = place_controllers(t)
        w = hop_matrix(t, p)
        for i in (0, 5, 13, 19):
            fwd = bfs_hops(t.adjacency, i)
            for j, h in enumerate(p.controller_hosts):
                assert w[i][j] == fwd[h]


class TestAlpha:
    def test_uniform_matrix(self):
        assert derive_alpha(((3, 3), (3, 3))) == 3

    def test_fat_tree_24(self):
        t = gen_fat_tree(24)
        a = derive_alpha(hop_matrix(t, place_controllers(t)))
        assert abs(float(a) - 4.13) <= 0.01

    def test_three_tier_26(self):
        t = gen_three_tier(26)
        a = derive_alpha(hop_matrix(t, place_controllers(t)))
        assert abs(float(a) - 4.81) <= 0.01

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            derive_alpha(())


def test_dump_edge_list_format():
    from sdnsched.topology import dump_edge_list
    t = gen_fat_tree(4)
    text = dump_edge_list(t)
    lines = text.strip().split("\n")
    assert lines[0] == "# kind=fat-tree k=4 switches=20 hosts=16"
    assert all(len(line.split()) == 2 for line in lines[1:])
    assert any(line.startswith("s0 ") for line in lines[1:])
    assert sum(1 for line in lines[1:] if " h" in line) == 16
