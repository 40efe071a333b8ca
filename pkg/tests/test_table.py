from nbts.table import EXPECTED, format_rows, reproduce

import oracles


def test_rows_agree_with_brute_force_oracle():
    rows = reproduce()
    assert [r.label for r in rows] == [e[0] for e in EXPECTED]
    for r in rows:
        verts, _ = oracles.brute_force_vertices(r.regime, r.classical)
        assert r.vertices == len(verts)
        assert r.dimension == oracles.affine_dim(r.regime, r.classical)


def test_format_and_status():
    rows = reproduce()
    text = format_rows(rows)
    assert len(text.splitlines()) == 2 + len(rows)
    for r in rows:
        assert r.to_dict()["status"] == ("PASS" if r.ok else "FAIL")
        # the closed-form catalog reproduces the enumeration whenever the counts match
        if r.ok:
            assert r.catalog_match
