"""Bundled regime table: loading, round-tripping, and the size estimators."""

import pytest

from gaugebench import constants
from gaugebench.errors import DomainError
from gaugebench.regimes import (
    RegimeParseError,
    cyclotron_dipole_size,
    dipole_size_from_coupling,
    effective_bohr_radius,
    inverse_ev_to_um,
    load_regimes,
    serialize_regimes,
)


class TestBundledTable:
    def test_loads_eight_entries(self):
        entries = load_regimes()
        assert len(entries) == 8

    def test_rb_gas_row(self):
        entry = {e.name: e for e in load_regimes()}["Rb gas in optical cavity"]
        assert entry.eta_range == (2.0e-4, 2.0e-4)
        assert entry.f_range_eV == (0.0045, 0.19)
        assert entry.dipole_size_um == (1.6e-4, 1.6e-4)
        assert entry.g_over_nu == (2.48e-10, 1.42e-6)
        assert not entry.caution_flag
        assert "colombe2007strong" in entry.citation_keys

    def test_superconducting_row_carries_caution(self):
        entry = {e.name: e for e in load_regimes()}["Superconducting circuit"]
        assert entry.caution_flag
        assert entry.g_over_omega10 == (0.040, 15.3)
        assert entry.dipole_size_um == (21.4, 60.0)

    def test_cyclotron_row(self):
        entry = {e.name: e for e in load_regimes()}["Electron cyclotron resonances"]
        assert entry.eta_range == (1.7e-6, 2.0e-4)
        assert entry.f_range_eV == (0.76, 25.7)
        assert entry.g_over_nu == (0.17, 4.8)
        assert len(entry.citation_keys) == 4

    def test_exactly_one_caution_entry(self):
        assert sum(e.caution_flag for e in load_regimes()) == 1


class TestRoundTrip:
    def test_serialize_then_load(self, tmp_path):
        entries = load_regimes()
        path = tmp_path / "regimes.csv"
        path.write_text(serialize_regimes(entries))
        assert load_regimes(path) == entries

    def test_empty_file_warns(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.warns(UserWarning):
            assert load_regimes(path) == []

    def test_missing_column_raises(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("name,eta_min\nfoo,1.0\n")
        with pytest.raises(RegimeParseError):
            load_regimes(path)

    def test_bad_number_names_row_and_column(self, tmp_path):
        entries = load_regimes()
        text = serialize_regimes(entries[:1]).replace("0.0045", "not-a-number")
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(RegimeParseError, match="f_min_eV"):
            load_regimes(path)

    def test_inverted_range_rejected(self, tmp_path):
        entries = load_regimes()
        text = serialize_regimes(entries[:1]).replace("0.0045,0.19", "0.19,0.0045")
        path = tmp_path / "bad.csv"
        path.write_text(text)
        with pytest.raises(RegimeParseError):
            load_regimes(path)


class TestEstimators:
    def test_dipole_from_coupling_algebra(self):
        g, e_vac = 0.5, 100.0
        x10 = dipole_size_from_coupling(g, e_vac)
        assert x10 * constants.ELEMENTARY_CHARGE * e_vac == pytest.approx(g, rel=1e-14)

    def test_effective_bohr_radius(self):
        assert effective_bohr_radius(1.0) == pytest.approx(constants.ALPHA / 2.0)
        with pytest.raises(DomainError):
            effective_bohr_radius(0.0)

    def test_cyclotron_size_scaling(self):
        # Doubling the filling factor scales the size by sqrt(2).
        base = cyclotron_dipole_size(1.0, 1.0)
        assert cyclotron_dipole_size(1.0, 2.0) / base == pytest.approx(2**0.5)
        with pytest.raises(DomainError):
            cyclotron_dipole_size(-1.0, 1.0)

    def test_unit_conversion(self):
        assert inverse_ev_to_um(1.0) == pytest.approx(0.197327)
