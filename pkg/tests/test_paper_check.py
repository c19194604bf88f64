from imdyn import paper_check as pc

DOCUMENTED = {
    "ratio_table.gamma1_low",
    "cycle.triplet_ratio12",
    "geometry.T_R_22_finite",
    "geometry.k_it_literal",
    "invariants.gamma1_a_o",
    "invariants.gamma0_a_o",
    "invariants.a_branch_gamma0",
    "invariants.b_branch_gamma0",
    "invariants.impulse_split",
}


def test_row_count_and_no_silent_failures():
    rows = pc.paper_check()
    assert len(rows) >= 25
    assert len({r.key for r in rows}) == len(rows)
    for r in rows:
        assert r.status in (pc.PASS, pc.FLAGGED)
        if r.status == pc.FLAGGED:
            assert r.note and r.key in DOCUMENTED


def test_specific_rows():
    rows = {r.key: r for r in pc.paper_check()}
    assert rows["threshold.h_o"].status == pc.PASS and rows["threshold.h_o"].tolerance == 1e-6
    assert rows["invariants.gamma1_a_o"].status == pc.FLAGGED
    assert rows["geometry.k_it_literal"].status == pc.FLAGGED
    assert rows["geometry.T_R_22_finite"].status == pc.FLAGGED


def test_unflagged_mismatch_is_a_failure():
    assert pc._row("x", "x", 1.0, 2.0, 0.1).status == pc.FAIL
    assert pc._row("x", "x", 1.0, 2.0, 0.1, conflict="known").status == pc.FLAGGED


def test_csv_rows():
    text = pc.to_csv(pc.paper_check())
    lines = text.splitlines()
    assert lines[0].startswith("key,quantity,computed")
    assert len(lines) == len(pc.paper_check()) + 1
