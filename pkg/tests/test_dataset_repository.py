import numpy as np
import pytest

from vessel_surrogate.core.errors import DataFormatError
from vessel_surrogate.models.dataset import Dataset, Provenance
from vessel_surrogate.repositories.dataset_repository import CSV_COLUMNS, DatasetRepository

HEADER = ",".join(CSV_COLUMNS)


def test_csv_round_trip_is_value_exact(tmp_path, oracle_data):
    data = oracle_data(200)
    path = DatasetRepository.write_csv(data, tmp_path / "data.csv")
    restored = DatasetRepository.read_csv(path, provenance=Provenance.ORACLE)
    np.testing.assert_array_equal(restored.inputs, data.inputs)
    np.testing.assert_array_equal(restored.targets, data.targets)
    assert restored.provenance is Provenance.ORACLE


def test_canonical_headers_default_to_imported(tmp_path):
    path = tmp_path / "fea.csv"
    path.write_text(HEADER + "\n1000,1,0.01,0.2,178600000\n", encoding="utf-8")
    assert DatasetRepository.read_csv(path).provenance is Provenance.IMPORTED


def test_awkward_floats_survive_the_round_trip(tmp_path):
    inputs = np.array([[0.1 + 0.2, 1 / 3, 0.002000000000000001, 0.49999999999999994]])
    data = Dataset(inputs, np.array([123456789.12345679]))
    path = DatasetRepository.write_csv(data, tmp_path / "exact.csv")
    restored = DatasetRepository.read_csv(path)
    assert restored.inputs.tolist() == inputs.tolist()
    assert restored.targets.tolist() == data.targets.tolist()


def test_header_only_file_is_an_empty_dataset(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text(HEADER + "\n", encoding="utf-8")
    assert len(DatasetRepository.read_csv(path)) == 0


def test_invalid_geometry_reports_the_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text(
        HEADER + "\n1000,1,0.01,0.2,1.7e8\n1000,1,0.3,0.2,1.7e8\n",
        encoding="utf-8",
    )
    with pytest.raises(DataFormatError, match="linha 3"):
        DatasetRepository.read_csv(path)


def test_non_numeric_cell_reports_line_and_column(tmp_path):
    path = tmp_path / "text.csv"
    path.write_text(HEADER + "\n1000,abc,0.01,0.2,1.7e8\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="linha 2.*length_m"):
        DatasetRepository.read_csv(path)


def test_missing_column(tmp_path):
    path = tmp_path / "short.csv"
    path.write_text("depth_m,length_m,thickness_m\n1,1,0.01\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="radius_m"):
        DatasetRepository.read_csv(path)


def test_missing_file(tmp_path):
    with pytest.raises(DataFormatError):
        DatasetRepository.read_csv(tmp_path / "nowhere.csv")


def test_column_map_and_unit_factors_import_foreign_files(tmp_path):
    path = tmp_path / "fea.csv"
    path.write_text("D,L,T_mm,R,S_mpa\n1000,1,10,0.2,178.6\n", encoding="utf-8")
    data = DatasetRepository.read_csv(
        path,
        column_map={
            "depth_m": "D",
            "length_m": "L",
            "thickness_m": "T_mm",
            "radius_m": "R",
            "max_vm_pa": "S_mpa",
        },
        unit_factors={"thickness_m": 1e-3, "max_vm_pa": 1e6},
    )
    assert data.provenance is Provenance.IMPORTED
    assert data.inputs[0, 2] == pytest.approx(0.01)
    assert data.targets[0] == pytest.approx(1.786e8)


def test_read_designs_only(tmp_path):
    path = tmp_path / "designs.csv"
    path.write_text("depth_m,length_m,thickness_m,radius_m\n0,1,0.01,0.2\n500,0.5,0.02,0.3\n", encoding="utf-8")
    designs = DatasetRepository.read_designs_csv(path)
    assert designs.shape == (2, 4)
    assert designs[1].tolist() == [500.0, 0.5, 0.02, 0.3]
