import random

import pytest
from hypothesis import given, strategies as st

from loneaxis.errors import InvalidGraphError, InvalidMapError
from loneaxis.graphs import (GraphMap, MarkedGraph, apply_map, compose,
                             is_tight, power, rev_edge, rev_path, rose,
                             rose_map, tighten)
from loneaxis.isomorphism import are_isomorphic

from conftest import cubic_map, fib_map


def letters(rank=2):
    base = [chr(ord("a") + i) for i in range(rank)]
    return base + [b + "'" for b in base]


def words(rank=2, max_len=8):
    return st.lists(st.sampled_from(letters(rank)), max_size=max_len).map(tuple)


class TestTighten:
    def test_single_cancellation(self):
        assert tighten(("a", "a'", "b")) == ("b",)

    def test_already_tight(self):
        assert tighten(("a", "b")) == ("a", "b")

    @given(words())
    def test_word_times_inverse_cancels(self, w):
        assert tighten(w + rev_path(w)) == ()

    @given(words())
    def test_idempotent(self, w):
        once = tighten(w)
        assert tighten(once) == once
        assert is_tight(once)


class TestApplyMap:
    def test_direct_substitution(self):
        assert apply_map(fib_map(), ("b", "a")) == ("a", "a", "b")

    def test_input_cancels_to_nothing(self):
        assert apply_map(fib_map(), ("a'", "a")) == ()

    def test_substitution_with_inverse(self):
        assert apply_map(fib_map(), ("b", "a'")) == ("a", "b'", "a'")

    def test_unknown_edge_rejected(self):
        with pytest.raises(InvalidMapError):
            apply_map(fib_map(), ("z",))

    @given(words())
    def test_tighten_first_changes_nothing(self, w):
        g = fib_map()
        assert apply_map(g, tighten(w)) == apply_map(g, w)


class TestComposePower:
    def test_fib_square(self):
        g2 = power(fib_map(), 2)
        assert g2.edge_images() == {"a": ("a", "b", "a"), "b": ("a", "b")}

    def test_power_one_is_identity_case(self):
        g = fib_map()
        assert power(g, 1) == g

    def test_cube_matches_iterated_application(self):
        g = fib_map()
        g2, g3 = power(g, 2), power(g, 3)
        for e in g.domain.pairs:
            assert g3.image(e) == g.apply_path(g2.image(e))

    @pytest.mark.parametrize("k,m", [(1, 1), (1, 2), (2, 2), (2, 3)])
    def test_power_addition_law(self, k, m):
        g = cubic_map()
        gk, gm, gkm = power(g, k), power(g, m), power(g, k + m)
        for e in g.domain.pairs:
            assert gkm.image(e) == gk.apply_path(gm.image(e))

    def test_domain_mismatch(self):
        g = fib_map()
        h = cubic_map()
        with pytest.raises(InvalidMapError):
            compose(g, h)


class TestValidation:
    def test_valence_one_rejected(self):
        with pytest.raises(InvalidGraphError):
            MarkedGraph({"a": ("u", "v"), "b": ("v", "v")})

    def test_valence_two_needs_flag(self):
        with pytest.raises(InvalidGraphError):
            MarkedGraph({"a": ("u", "v"), "b": ("v", "u")})
        ok = MarkedGraph({"a": ("u", "v"), "b": ("v", "u")},
                         subdivision_vertices=("u", "v"))
        assert ok.rank() == 1

    def test_disconnected_rejected(self):
        with pytest.raises(InvalidGraphError):
            MarkedGraph({"a": ("u", "u"), "b": ("u", "u"),
                         "c": ("w", "w"), "d": ("w", "w")})

    def test_volume_check(self):
        with pytest.raises(InvalidGraphError):
            rose(["a", "b"], lengths={"a": 0.7, "b": 0.7}, normalized=True)
        g = rose(["a", "b"], lengths={"a": 0.5, "b": 0.5}, normalized=True)
        assert float(g.volume()) == 1.0

    def test_non_tight_image_rejected(self):
        graph = rose(["a", "b"])
        with pytest.raises(InvalidMapError):
            GraphMap(graph, graph, {"v0": "v0"},
                     {"a": ("a", "a'", "b"), "b": ("a",)})

    def test_endpoint_mismatch_rejected(self):
        graph = MarkedGraph({"a": ("u", "u"), "b": ("v", "v"),
                             "c": ("u", "v"), "d": ("u", "v")})
        with pytest.raises(InvalidMapError):
            GraphMap(graph, graph, {"u": "u", "v": "v"},
                     {"a": ("b",), "b": ("a",), "c": ("c",), "d": ("d",)})


def random_desk_graph(rng, n_vertices):
    """Random connected graph with all valences >= 3."""
    vs = [f"v{i}" for i in range(n_vertices)]
    ends = {}
    label = iter(f"e{i}" for i in range(100))
    for i in range(1, n_vertices):
        ends[next(label)] = (vs[rng.randrange(i)], vs[i])
    def valence(v):
        return sum((u == v) + (w == v) for u, w in ends.values())
    while any(valence(v) < 3 for v in vs):
        ends[next(label)] = (rng.choice(vs), rng.choice(vs))
    return MarkedGraph(ends)


class TestIsomorphism:
    def test_roses_with_other_labels(self):
        iso = are_isomorphic(rose(["a", "b"]), rose(["x", "y"]))
        assert iso is not None and iso.check()

    def test_rose_vs_theta(self):
        theta = MarkedGraph({"p": ("u", "v"), "q": ("u", "v"), "r": ("u", "v")})
        assert are_isomorphic(rose(["a", "b"]), theta) is None

    def test_permuted_labels_oracle(self):
        rng = random.Random(4)
        for trial in range(20):
            g = random_desk_graph(rng, rng.randrange(1, 6))
            # relabel both vertices and edges, flip random orientations
            vperm = {v: f"x{i}" for i, v in enumerate(sorted(g.vertices))}
            items = sorted(g.edge_ends.items())
            rng.shuffle(items)
            ends2 = {}
            for i, (lbl, (u, w)) in enumerate(items):
                if rng.random() < 0.5:
                    u, w = w, u
                ends2[f"m{i}"] = (vperm[u], vperm[w])
            g2 = MarkedGraph(ends2)
            iso = are_isomorphic(g, g2)
            assert iso is not None and iso.check()

    def test_reflexive_and_symmetric(self):
        rng = random.Random(11)
        graphs = [random_desk_graph(rng, rng.randrange(1, 5)) for _ in range(8)]
        for g in graphs:
            assert are_isomorphic(g, g) is not None
        for g in graphs:
            for h in graphs:
                assert (are_isomorphic(g, h) is None) == (are_isomorphic(h, g) is None)

    def test_lengths_respected(self):
        g1 = rose(["a", "b"], lengths={"a": 0.25, "b": 0.75})
        g2 = rose(["x", "y"], lengths={"x": 0.75, "y": 0.25})
        g3 = rose(["x", "y"], lengths={"x": 0.6, "y": 0.4})
        assert are_isomorphic(g1, g2, respect_lengths=True) is not None
        assert are_isomorphic(g1, g3, respect_lengths=True) is None
        assert are_isomorphic(g1, g3) is not None

    def test_multi_edge_counted(self):
        two = MarkedGraph({"p": ("u", "v"), "q": ("u", "v"),
                           "r": ("u", "u"), "s": ("v", "v")})
        loopy = MarkedGraph({"p": ("u", "v"), "q": ("u", "v"),
                             "r": ("u", "v"), "s": ("u", "v")})
        assert are_isomorphic(two, loopy) is None


class TestRoseMap:
    def test_word_parsing(self):
        g = rose_map({"a": "b a'", "b": "ba'"})
        assert g.image("a") == ("b", "a'")
        assert g.image("b") == ("b", "a'")
        assert g.image("a'") == ("a", "b'")
