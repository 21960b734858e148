import json

import numpy as np
import pytest

from bfpm.core import Dataset, PartitionMatrix, Prototypes
from bfpm.errors import DataError
from bfpm.io import (
    CsvSpec,
    dump_json,
    load_csv,
    normalize_min_max,
    read_membership_csv,
    read_prototypes_csv,
    round_sig,
    write_membership_csv,
    write_prototypes_csv,
)
from bfpm.partition import validate_partition


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_small_with_header(self, tmp_path):
        ds = load_csv(CsvSpec(write(tmp_path, "a,b\n0,1\n1,0\n")))
        assert ds.objects.tolist() == [[0, 1], [1, 0]]
        assert ds.feature_names == ("a", "b") and ds.labels is None

    def test_iris(self, iris_raw):
        assert (iris_raw.n, iris_raw.d) == (150, 4)
        assert len(set(iris_raw.labels)) == 3

    def test_pima(self, pima):
        assert (pima.n, pima.d) == (768, 8)
        assert set(pima.labels) == {"0", "1"}

    def test_label_by_index_and_no_header(self, tmp_path):
        ds = load_csv(CsvSpec(write(tmp_path, "x;1;2\ny;3;4\n"), has_header=False, label_column=0, delimiter=";"))
        assert ds.labels == ("x", "y") and ds.objects.tolist() == [[1, 2], [3, 4]]
        assert ds.feature_names is None

    def test_negative_label_index(self, tmp_path):
        ds = load_csv(CsvSpec(write(tmp_path, "a,b,c\n1,2,k\n"), label_column=-1))
        assert ds.labels == ("k",)

    def test_bad_cell_reports_coordinates(self, tmp_path):
        with pytest.raises(DataError, match=r"line 3 column 2: cannot parse 'abc'"):
            load_csv(CsvSpec(write(tmp_path, "a,b\n0,1\n1,abc\n")))

    def test_ragged(self, tmp_path):
        with pytest.raises(DataError, match="line 2 has 3 fields"):
            load_csv(CsvSpec(write(tmp_path, "a,b\n0,1,2\n")))

    def test_non_finite(self, tmp_path):
        with pytest.raises(DataError, match="non-finite"):
            load_csv(CsvSpec(write(tmp_path, "a\nnan\n")))

    def test_missing_label_column(self, tmp_path):
        with pytest.raises(DataError, match="label column"):
            load_csv(CsvSpec(write(tmp_path, "a,b\n0,1\n"), label_column="species"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="cannot read"):
            load_csv(CsvSpec(tmp_path / "nope.csv"))

    def test_empty(self, tmp_path):
        with pytest.raises(DataError, match="no data rows"):
            load_csv(CsvSpec(write(tmp_path, "a,b\n")))


class TestNormalize:
    def test_basic(self):
        ds = normalize_min_max(Dataset([[0.0, 3.0], [5.0, 3.0], [10.0, 3.0]]))
        assert ds.objects.tolist() == [[0.0, 0.0], [0.5, 0.0], [1.0, 0.0]]
        assert ds.normalized

    def test_iris_sepal_length(self, iris_raw):
        col = iris_raw.objects[:, 0]
        assert (col.min(), col.max()) == (4.3, 7.9)
        scaled = normalize_min_max(iris_raw).objects[:, 0]
        j = int(np.flatnonzero(col == 5.8)[0])
        assert scaled[j] == pytest.approx((5.8 - 4.3) / 3.6, rel=1e-12)
        assert scaled[j] == pytest.approx(0.41666, abs=1e-5)

    def test_keeps_labels(self, iris_raw):
        assert normalize_min_max(iris_raw).labels == iris_raw.labels


class TestRoundTrip:
    def test_membership(self, tmp_path, rng):
        u = rng.dirichlet(np.ones(3), size=10).T
        part = PartitionMatrix(u, "fuzzy")
        path = tmp_path / "u.csv"
        write_membership_csv(path, part)
        back = read_membership_csv(path, "fuzzy")
        assert np.array_equal(back.values, part.values)
        assert path.read_text().splitlines()[0] == "object,cluster_0,cluster_1,cluster_2"
        assert validate_partition(back).satisfied

    def test_prototypes(self, tmp_path, rng):
        v = Prototypes(rng.random((2, 3)))
        path = tmp_path / "v.csv"
        write_prototypes_csv(path, v, ("a", "b", "c"))
        assert path.read_text().splitlines()[0] == "cluster,a,b,c"
        assert np.array_equal(read_prototypes_csv(path).centers, v.centers)


class TestJson:
    def test_round_sig(self):
        assert round_sig(1 / 3) == 0.333333333333
        assert round_sig({"a": [np.float64(2 / 3), 1, float("nan")]}) == {"a": [0.666666666667, 1, None]}

    def test_dump(self, tmp_path):
        path = tmp_path / "r.json"
        text = dump_json({"x": 0.1 + 0.2}, path)
        assert text.endswith("\n") and path.read_text() == text
        assert json.loads(text) == {"x": 0.3}
