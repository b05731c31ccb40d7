import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from paneldag import (
    DataError,
    DomainError,
    DuplicateKeyError,
    EmptyResultError,
    FormatError,
    IngestConfig,
    ParseError,
    SampleMatrix,
    TARGET_LABEL,
    assemble_samples,
    load_emissions,
    load_wdi,
)

WDI_HEADER = "Country Name,Country Code,Indicator Name,Indicator Code,2000,2001,2002"


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# ---------------------------------------------------------------- WDI loader

def test_load_wdi_small_example(tmp_path):
    p = write(
        tmp_path,
        "wdi.csv",
        WDI_HEADER + "\n"
        "Atlantis,ATL,Urban share,SP.URB.TOTL.IN.ZS,50,51,52\n"
        "Atlantis,ATL,Power use,EG.USE.ELEC.KH.PC,100,,120\n"
        "Borduria,BOR,Urban share,SP.URB.TOTL.IN.ZS,30,31,..\n"
        "Borduria,BOR,Power use,EG.USE.ELEC.KH.PC,200,210,220\n",
    )
    panel = load_wdi(p)
    assert [c for _, c in panel.economies] == ["ATL", "BOR"]
    assert [c for _, c in panel.indicators] == ["EG.USE.ELEC.KH.PC", "SP.URB.TOTL.IN.ZS"]
    assert panel.years == [2000, 2001, 2002]
    # "" and ".." are both missing markers
    assert panel.missing_mask[0, 0, 1]
    assert panel.missing_mask[1, 1, 2]
    assert panel.missing_mask.sum() == 2
    assert panel.values[0, 1, 0] == 50.0


def test_load_wdi_whitelist(tmp_path):
    p = write(
        tmp_path,
        "wdi.csv",
        WDI_HEADER + "\n"
        "Atlantis,ATL,A,AA.A,1,2,3\n"
        "Atlantis,ATL,B,BB.B,4,5,6\n",
    )
    panel = load_wdi(p, indicator_whitelist={"BB.B"})
    assert [c for _, c in panel.indicators] == ["BB.B"]


def test_load_wdi_missing_required_column(tmp_path):
    p = write(tmp_path, "wdi.csv", "Country Name,Country Code,Indicator Name,2000\nA,B,C,1\n")
    with pytest.raises(FormatError, match="Indicator Code"):
        load_wdi(p)


def test_load_wdi_rejects_non_year_column(tmp_path):
    p = write(tmp_path, "wdi.csv", WDI_HEADER + ",Notes\nA,AAA,N,NN.N,1,2,3,hello\n")
    with pytest.raises(FormatError, match="Notes"):
        load_wdi(p)


def test_load_wdi_duplicate_row(tmp_path):
    p = write(
        tmp_path,
        "wdi.csv",
        WDI_HEADER + "\nA,AAA,N,NN.N,1,2,3\nA,AAA,N,NN.N,4,5,6\n",
    )
    with pytest.raises(DuplicateKeyError):
        load_wdi(p)


def test_load_wdi_bad_cell(tmp_path):
    p = write(tmp_path, "wdi.csv", WDI_HEADER + "\nA,AAA,N,NN.N,1,oops,3\n")
    with pytest.raises(ParseError, match="2001"):
        load_wdi(p)


# ---------------------------------------------------------------- emissions loader

def test_load_emissions_long(tmp_path):
    p = write(
        tmp_path,
        "em.csv",
        "code,year,value\nATL,2000,1.5\nATL,2001,1.6\nBOR,2000,4.0\n",
    )
    t = load_emissions(p)
    assert t.economies == ["ATL", "BOR"]
    assert t.years == [2000, 2001]
    assert t.values[0, 0] == 1.5
    assert t.missing_mask[1, 1]  # BOR has no 2001 entry


def test_load_emissions_wide_matches_long(tmp_path):
    long_p = write(
        tmp_path, "long.csv", "code,year,value\nATL,2000,1.5\nATL,2001,1.6\n"
    )
    wide_p = write(tmp_path, "wide.csv", "Country Code,2000,2001\nATL,1.5,1.6\n")
    a, b = load_emissions(long_p), load_emissions(wide_p)
    assert a.economies == b.economies and a.years == b.years
    assert_allclose(a.values, b.values)


def test_load_emissions_rejects_negative_and_duplicates(tmp_path):
    neg = write(tmp_path, "neg.csv", "code,year,value\nATL,2000,-2.0\n")
    with pytest.raises(DomainError):
        load_emissions(neg)
    dup = write(
        tmp_path, "dup.csv", "code,year,value\nATL,2000,1\nATL,2000,2\n"
    )
    with pytest.raises(DuplicateKeyError):
        load_emissions(dup)


def test_load_emissions_empty(tmp_path):
    p = write(tmp_path, "em.csv", "code,year,value\n")
    with pytest.raises(EmptyResultError):
        load_emissions(p)


# ---------------------------------------------------------------- fixtures

def test_bundled_fixture_dimensions(bundled_wdi, bundled_emissions):
    panel = load_wdi(bundled_wdi)
    assert (len(panel.economies), len(panel.indicators), len(panel.years)) == (40, 12, 61)
    assert panel.years[0] == 1960 and panel.years[-1] == 2020
    target = load_emissions(bundled_emissions)
    assert (len(target.economies), len(target.years)) == (40, 21)
    assert target.missing_mask.sum() == 0


def test_assemble_bundled_fixture(bundled_wdi, bundled_emissions):
    panel = load_wdi(bundled_wdi)
    target = load_emissions(bundled_emissions)
    samples = assemble_samples(panel, target)
    # the sparsely surveyed slum indicator is dropped by the missingness cap
    assert samples.n == 840
    assert samples.d == 12
    assert "EN.POP.SLUM.UR.ZS" not in samples.labels
    assert samples.labels[-1] == TARGET_LABEL
    assert_allclose(samples.data.mean(axis=0), 0.0, atol=1e-9)
    # rows sorted by (economy, year)
    assert samples.row_keys[0] == ("AGO", 2000)
    assert samples.row_keys[20] == ("AGO", 2020)
    assert samples.row_keys[21] == ("ARG", 2000)


def test_assemble_is_deterministic(bundled_wdi, bundled_emissions):
    panel = load_wdi(bundled_wdi)
    target = load_emissions(bundled_emissions)
    a = assemble_samples(panel, target)
    b = assemble_samples(panel, target)
    assert np.array_equal(a.data, b.data)
    assert a.row_keys == b.row_keys


def test_indicator_cap_monotonicity(bundled_wdi, bundled_emissions):
    """Raising the allowed missingness never removes indicators that a stricter
    cap kept."""
    panel = load_wdi(bundled_wdi)
    target = load_emissions(bundled_emissions)
    kept = {}
    for cap in (0.1, 0.3, 1.0):
        cfg = IngestConfig(max_indicator_missing=cap)
        kept[cap] = set(assemble_samples(panel, target, cfg).labels)
    assert kept[0.1] <= kept[0.3] <= kept[1.0]
    assert "EN.POP.SLUM.UR.ZS" in kept[1.0]


def test_window_subsetting(bundled_wdi, bundled_emissions):
    panel = load_wdi(bundled_wdi)
    target = load_emissions(bundled_emissions)
    cfg = IngestConfig(year_start=2010, year_end=2014)
    samples = assemble_samples(panel, target, cfg)
    assert samples.n == 40 * 5
    years = {y for _, y in samples.row_keys}
    assert years == {2010, 2011, 2012, 2013, 2014}


def test_target_rows_never_imputed(tmp_path):
    wdi = write(
        tmp_path,
        "wdi.csv",
        WDI_HEADER + "\n"
        "Atlantis,ATL,A,AA.A,1,2,3\n"
        "Borduria,BOR,A,AA.A,4,5,6\n",
    )
    em = write(
        tmp_path,
        "em.csv",
        "code,year,value\nATL,2000,1\nATL,2001,2\nATL,2002,3\nBOR,2000,4\nBOR,2002,5\n",
    )
    samples = assemble_samples(load_wdi(wdi), load_emissions(em), IngestConfig(year_end=2002))
    # BOR's 2001 row is gone: its target value is missing and stays missing
    assert ("BOR", 2001) not in samples.row_keys
    assert samples.n == 5


def test_no_overlap_raises(tmp_path):
    wdi = write(tmp_path, "wdi.csv", WDI_HEADER + "\nA,AAA,N,NN.N,1,2,3\n")
    em = write(tmp_path, "em.csv", "code,year,value\nZZZ,2000,1\n")
    with pytest.raises(EmptyResultError):
        assemble_samples(load_wdi(wdi), load_emissions(em))


# ---------------------------------------------------------------- SampleMatrix

def test_sample_matrix_validation():
    with pytest.raises(DataError):
        SampleMatrix(np.ones((1, 2)), ("a", "b"), [("k", 0)])
    with pytest.raises(DataError):
        SampleMatrix(np.ones((3, 2)), ("a", "a"), [("k", i) for i in range(3)])
    with pytest.raises(DataError):
        SampleMatrix(np.full((3, 1), np.nan), ("a",), [("k", i) for i in range(3)])


def test_sample_matrix_select_keeps_standardization():
    rng = np.random.default_rng(0)
    raw = rng.normal(size=(50, 3)) * [1.0, 2.0, 3.0] + [10.0, 20.0, 30.0]
    means, stds = raw.mean(axis=0), raw.std(axis=0)
    sm = SampleMatrix(
        (raw - means) / stds, ("a", "b", "c"),
        [("k", i) for i in range(50)], (means, stds),
    )
    sub = sm.select(["c", "a"])
    assert sub.labels == ("c", "a")
    assert_allclose(sub.raw(), raw[:, [2, 0]])


def test_csv_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(1)
    data = rng.normal(size=(20, 3)) * 1e3
    sm = SampleMatrix(data, ("a", "b", "c"), [("ATL", 2000 + i) for i in range(20)])
    path = tmp_path / "m.csv"
    sm.to_csv(path)
    back = SampleMatrix.from_csv(path)
    assert back.labels == sm.labels
    assert back.row_keys == sm.row_keys
    assert np.array_equal(back.data, sm.data)  # 17 significant digits: exact


@settings(max_examples=40, deadline=None)
@given(
    st.lists(
        st.floats(
            min_value=-1e12, max_value=1e12, allow_nan=False, allow_subnormal=False
        ),
        min_size=4,
        max_size=40,
    )
)
def test_csv_round_trip_property(tmp_path_factory, values):
    n = len(values) // 2
    if n < 2:
        return
    data = np.array(values[: 2 * n]).reshape(n, 2)
    sm = SampleMatrix(data, ("a", "b"), [("K", i) for i in range(n)])
    path = tmp_path_factory.mktemp("rt") / "m.csv"
    sm.to_csv(path)
    assert np.array_equal(SampleMatrix.from_csv(path).data, sm.data)


def test_from_csv_requires_row_comment(tmp_path):
    p = write(tmp_path, "m.csv", "a,b\n1,2\n3,4\n")
    with pytest.raises(FormatError):
        SampleMatrix.from_csv(p)
