import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from imdyn import network as nw
from imdyn.errors import DegenerateChainError, DimensionError, DomainError
from imdyn.geometry import K_MT
from imdyn.invariants import GAMMA_STAR, InvariantSet, default_invariants, lookup

INV = default_invariants()

odd_n = st.integers(1, 30).map(lambda k: 2 * k + 1)
ratio = st.floats(1.05, 2.95)


def test_ratio_table_rows():
    look = nw.ratio_table(0.5)
    assert (look.gamma1, look.gamma2, look.clamped) == (2.21, 1.76, False)
    assert nw.ratio_table(0.0).clamped


def test_spectrum_ratios_applied_once_for_n3():
    spec = nw.generate_spectrum(3, 0.5, 1.0)
    a = spec.alphas
    assert a[0] / a[1] == pytest.approx(2.21) and a[1] / a[2] == pytest.approx(1.76)


def test_spectrum_n7_ordering_and_time_ratios():
    spec = nw.generate_spectrum(7, 0.5, 1.0)
    assert len(spec) == 7
    t = spec.times
    assert all(x < y for x, y in zip(t, t[1:]))
    for i in range(6):
        assert t[i + 1] / t[i] == pytest.approx(spec.alphas[i] / spec.alphas[i + 1], rel=1e-12)


def test_spectrum_rejects_bad_input():
    with pytest.raises(DimensionError):
        nw.generate_spectrum(4, 0.5, 1.0)
    with pytest.raises(DegenerateChainError):
        nw.generate_spectrum(3, 0.5, 1.0, ratios=(3.0, 2.0))
    with pytest.raises(DegenerateChainError):
        nw.generate_spectrum(3, 0.5, 1.0, ratios=(1.0, 2.0))
    with pytest.raises(DomainError):
        nw.generate_spectrum(3, 0.5, -1.0)


@settings(max_examples=200)
@given(n=odd_n, alpha=st.floats(1e-3, 1e3), r1=ratio, r2=ratio, a_o=st.floats(0.05, 2.0))
def test_spectrum_preserves_invariant(n, alpha, r1, r2, a_o):
    inv = InvariantSet(gamma=0.5, a_o=a_o, a=0.3)
    spec = nw.generate_spectrum(n, 0.5, alpha, inv, ratios=(r1, r2))
    for e in spec.entries:
        assert e.alpha * e.t == pytest.approx(a_o, abs=1e-12 * max(1.0, a_o))


def test_triplet_node_ratio_example():
    trip = nw.form_triplet(4.0, 2.0, 1.0, INV, gamma_alpha=2.3, alpha_1tau=1.0)
    assert trip.alpha_m == pytest.approx(3 / 2.3)
    assert trip.alpha_m == pytest.approx(1.304, abs=1e-3)
    assert trip.mean_extreme_residual == 0.0


def test_triplet_from_cycle_triple():
    trip = nw.form_triplet(-1.406, -0.60423, -0.26, INV)
    assert trip.ratios[0] == pytest.approx(2.3269, abs=1e-4)
    assert trip.ratios[1] == pytest.approx(5.423, abs=0.02)


def test_triplet_rotation_correction_divides_span():
    plain = nw.form_triplet(4.0, 2.0, 1.0, INV)
    rot = nw.form_triplet(4.0, 2.0, 1.0, INV, rotation_correction=True)
    assert rot.gamma_alpha == pytest.approx(plain.gamma_alpha / K_MT)


def test_triplet_rejects_merged_entries():
    with pytest.raises(DegenerateChainError):
        nw.form_triplet(1.0, 0.999, 0.5, INV)
    with pytest.raises(DomainError):
        nw.form_triplet(1.0, 2.0, 0.5, INV)


@settings(max_examples=200)
@given(prev=st.floats(1e-3, 1e3), g=st.floats(1.1, 2.9))
def test_triplet_node_ratio_property(prev, g):
    trip = nw.form_triplet(4.0, 2.0, 1.0, INV, gamma_alpha=g, alpha_1tau=prev)
    assert trip.alpha_m / prev * g == pytest.approx(3.0, abs=1e-9)
    assert trip.alpha_m * trip.t_m == pytest.approx(INV.a, rel=1e-12)


def test_network_n3_and_n7():
    net = nw.build_network(nw.generate_spectrum(3, 0.5, 1.0))
    assert len(net.nodes) == 1 and net.final_node is net.nodes[0]
    net = nw.build_network(nw.generate_spectrum(7, 0.5, 1.0))
    vals = [node.information for node in net.nodes]
    assert len(vals) == 3 and vals[0] < vals[1] < vals[2]
    assert net.advisories


def test_advisory_cleared_at_dimension_nine():
    net = nw.build_network(nw.generate_spectrum(9, 0.5, 1.0))
    assert not net.advisories


@settings(max_examples=200)
@given(n=odd_n, gamma=st.floats(0.0, 1.0), alpha=st.floats(1e-2, 1e2), rot=st.booleans())
def test_network_values_strictly_increase(n, gamma, alpha, rot):
    spec = nw.generate_spectrum(n, gamma, alpha)
    net = nw.build_network(spec, rotation_correction=rot)
    vals = [node.information for node in net.nodes]
    assert all(x < y for x, y in zip(vals, vals[1:]))
    assert net.final_node.information == pytest.approx(math.fsum([INV.a_o] * n), abs=1e-10)
    for node in net.nodes:
        assert len(node.members) == 3
        assert len(node.coupling) <= nw.MAX_COUPLING


def test_coupling_path_bounded():
    for k in range(50):
        assert len(nw.coupling_path(k)) <= 7


def test_lifetime():
    inv = InvariantSet(gamma=0.5, a_o=0.7)
    assert nw.lifetime([1, 2, 3], [0.49] * 3, inv).irreversible == pytest.approx(0.0, abs=1e-12)
    assert nw.lifetime([1, 1, 1], [2 * 0.49] * 3, inv).irreversible == pytest.approx(3.0)
    lt = nw.lifetime([], [], inv)
    assert (lt.reversible, lt.irreversible, lt.total) == (0.0, 0.0, 0.0)


def test_word_length_examples():
    a_o = lookup(0.5).rows[0].a_o
    assert a_o / math.log(2) == pytest.approx(1.01, abs=5e-3)
    assert nw.word_length(a_o, 2) == 1
    # D=4 halves the bit length before the ceiling
    assert nw.word_length(3.0, 4) == math.ceil(3.0 / math.log(2) / 2 - nw.CODE_SLACK)
    with pytest.raises(DomainError):
        nw.word_length(1.0, 1)


def test_minimal_model_has_172_bits():
    spec = nw.generate_spectrum(87, GAMMA_STAR, 1.0)
    code = nw.encode_network(nw.build_network(spec), 2)
    assert len(code.words) == 43
    assert code.total_bits == 172


def test_letter_stream_round_trip():
    net = nw.build_network(nw.generate_spectrum(11, 0.5, 1.0))
    code = nw.encode_network(net, 3)
    D, l, pairs = nw.parse_letter_stream(code.letter_stream())
    assert (D, l) == (3, code.l_cs)
    assert [w for _, w in pairs] == list(code.words)
    assert [t for t, _ in pairs] == list(code.tracks)


@settings(max_examples=200)
@given(n=odd_n, D=st.integers(2, 36), a_o=st.floats(0.01, 5.0))
def test_code_respects_shannon_bound(n, D, a_o):
    inv = InvariantSet(gamma=0.5, a_o=a_o, a=0.3 * a_o)
    net = nw.build_network(nw.generate_spectrum(n, 0.5, 1.0, inv), inv)
    code = nw.encode_network(net, D)
    assert code.total_letters >= code.shannon_bound
    assert all(len(w) == 4 * code.l_cs for w in code.words)
    assume(code.words)
    assert code.tracks[0] == "L"


def test_network_json_encloses():
    net = nw.build_network(nw.generate_spectrum(7, 0.5, 1.0))
    code = nw.encode_network(net, 2)
    import json

    tree = json.loads(net.to_json(code))
    depth = 0
    node = tree["node"]
    while True:
        depth += 1
        assert "word" in node
        if "encloses" not in node:
            break
        node = node["encloses"]["node"]
    assert depth == 3


def test_chaos_predictor():
    assert nw.chaos_predictor([0.1, 0.5, 0.79]).time is None
    assert nw.chaos_predictor([0.1, 0.5, 0.79]).cooperation_supported
    p = nw.chaos_predictor([0.9, 1.1], times=[0.0, 2.0])
    assert p.time == pytest.approx(1.0) and p.invariant_collapse
    assert nw.chaos_predictor([1.0, 1.0], times=[5.0, 6.0]).time == 5.0
