import numpy as np
import pytest

from spdclab import crystal
from spdclab.crystal import CrystalCut, NonlinearTensor
from spdclab.errors import SchemaError


class TestLoading:
    def test_shipped_species(self, bbo, bibo):
        assert bbo.sellmeier.symmetry == crystal.UNIAXIAL
        assert bibo.sellmeier.symmetry == crystal.BIAXIAL
        assert "Eimerl" in bbo.sellmeier.source_citation
        assert "Hellwig" in bibo.sellmeier.source_citation
        assert bbo.reference_cut is not None
        assert bibo.reference_cut is not None

    def test_unknown_species(self):
        with pytest.raises(SchemaError):
            crystal.load_crystal("ktp")


class TestSellmeier:
    def test_bbo_ordinary_index_at_780(self, bbo):
        n_o = bbo.sellmeier.axis_index("o", 780.0)
        assert abs(n_o - 1.66) / 1.66 < 0.01

    def test_biaxial_ordering_everywhere(self, bibo):
        for lam in np.linspace(300.0, 1300.0, 40):
            nx, ny, nz = bibo.sellmeier.principal_indices(lam)
            assert 1.0 < nx < ny < nz

    def test_uniaxial_principal_mapping(self, bbo):
        nx, ny, nz = bbo.sellmeier.principal_indices(780.0)
        assert nx == ny
        assert nz < nx  # negative uniaxial

    def test_out_of_range_rejected(self, bbo, bibo):
        with pytest.raises(ValueError, match="outside"):
            bbo.sellmeier.axis_index("o", 2000.0)
        with pytest.raises(ValueError, match="outside"):
            bibo.sellmeier.principal_indices(150.0)


class TestTensor:
    def test_from_elements_layout(self):
        t = NonlinearTensor.from_elements("2", {"d14": 1.5, "d22": -0.5}, "test")
        assert t.d_matrix[0, 3] == 1.5
        assert t.d_matrix[1, 1] == -0.5

    def test_bad_element_names(self):
        for name in ("x14", "d99", "d1", "d123"):
            with pytest.raises(SchemaError):
                NonlinearTensor.from_elements("2", {name: 1.0}, "test")

    def test_contract_symmetric_in_last_two_fields(self, bibo):
        rng = np.random.default_rng(5)
        for _ in range(10):
            ep, es, ei = rng.normal(size=(3, 3))
            a = bibo.tensor.contract(ep, es, ei)
            b = bibo.tensor.contract(ep, ei, es)
            assert abs(a - b) < 1e-12

    def test_kleinman_partners_consistent(self, bibo):
        d = bibo.tensor.d_matrix
        assert d[0, 3] == d[1, 4] == d[2, 5]   # d14 = d25 = d36
        assert d[0, 1] == d[1, 5]              # d12 = d26
        assert d[0, 2] == d[2, 4]              # d13 = d35


class TestCrystalCut:
    def test_direction_unit_vector(self):
        cut = CrystalCut(1.944, 0.962, 0.6)
        assert abs(np.linalg.norm(cut.direction()) - 1.0) < 1e-14

    @pytest.mark.parametrize("theta,phi,length", [
        (-0.1, 0.0, 1.0), (3.2, 0.0, 1.0), (1.0, -0.5, 1.0),
        (1.0, 7.0, 1.0), (1.0, 1.0, 0.0),
    ])
    def test_validation(self, theta, phi, length):
        with pytest.raises(ValueError):
            CrystalCut(theta, phi, length)
