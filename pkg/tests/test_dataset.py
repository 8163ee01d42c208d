import numpy as np
import pytest

from varmediation.dataset import Dataset, load_dataset, parse_roles, save_dataset
from varmediation.exceptions import DataError


def write(tmp_path, text, name="d.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_three_columns_with_roles(tmp_path):
    path = write(tmp_path, "x,y,m\n1,2,3\n4,5,6\n7,8,9\n")
    data = load_dataset(path, parse_roles("X=x,Y=y,M=m"))
    assert data.K == 3 and data.T == 3
    assert data.names == ("x", "y", "m")
    assert (data.treatment, data.outcome, data.mediators) == ("x", "y", ["m"])
    np.testing.assert_array_equal(data.column("m"), [3, 6, 9])


def test_role_for_missing_column_is_named(tmp_path):
    path = write(tmp_path, "x,y,m\n1,2,3\n4,5,6\n")
    with pytest.raises(DataError, match="'Z'"):
        load_dataset(path, parse_roles("X=x,Y=y,M=Z"))


def test_non_numeric_cell_reports_location(tmp_path):
    path = write(tmp_path, "a,b\n1,2\n3,oops\n")
    with pytest.raises(DataError, match=r":3: .*'oops'.*'b'"):
        load_dataset(path)


def test_needs_two_rows(tmp_path):
    with pytest.raises(DataError, match="at least 2"):
        load_dataset(write(tmp_path, "a,b\n1,2\n"))


def test_non_finite_rejected(tmp_path):
    with pytest.raises(DataError, match="non-finite"):
        load_dataset(write(tmp_path, "a,b\n1,2\nnan,3\n"))


def test_383_by_8_panel(tmp_path):
    rng = np.random.default_rng(0)
    names = ["IP", "CPI", "EBP", "EDR", "UNEMP", "PCE", "GS2", "WAGE"]
    data = Dataset(rng.normal(size=(383, 8)), names, {"GS2": "treatment", "IP": "outcome", "EBP": "mediator"})
    path = tmp_path / "panel.csv"
    save_dataset(data, path)
    back = load_dataset(path, parse_roles("X=GS2,Y=IP,M=EBP"))
    assert (back.T, back.K) == (383, 8)
    np.testing.assert_array_equal(back.values, data.values)


@pytest.mark.parametrize(
    "roles",
    [
        {"a": "treatment", "b": "treatment", "c": "outcome"},
        {"a": "treatment"},
        {"a": "outcome", "b": "mediator"},
    ],
)
def test_role_cardinality(roles):
    with pytest.raises(DataError):
        Dataset(np.zeros((3, 3)), ("a", "b", "c"), roles)


def test_same_column_two_roles():
    with pytest.raises(DataError, match="more than one role"):
        parse_roles("X=a,Y=a")


def test_role_mapping_orientations_agree():
    names = ("a", "b", "c")
    d1 = Dataset(np.zeros((2, 3)), names, {"X": "a", "Y": "b", "M": "c"})
    d2 = Dataset(np.zeros((2, 3)), names, {"a": "treatment", "b": "outcome", "c": "mediator"})
    assert d1.roles == d2.roles


def test_values_are_read_only():
    data = Dataset(np.zeros((2, 2)), ("a", "b"))
    with pytest.raises(ValueError):
        data.values[0, 0] = 1.0
