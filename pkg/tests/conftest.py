import pytest

from qgen.dataset import load_dataset

EMPLOYEES_CSV = """Employee ID,City,Age,Salary
E01,New York,26,$100000
E02,New York,29,$150000
E03,Columbus,29,$110000
E04,Columbus,35,$210000
E05,New York,38,$250000
"""

# ages straddle 45 so the "above" boundary renders as 45; the slice is
# females older than 45
BOUNDARY_CSV = """age,gender,salary
30,males,52000
38,females,61000
45,males,70000
45,females,64000
52,females,90000
58,females,98000
61,males,83000
49,females,88000
"""


@pytest.fixture
def employees():
    return load_dataset(EMPLOYEES_CSV, _options_named("employees"))


@pytest.fixture
def employees_path(tmp_path):
    path = tmp_path / "employees.csv"
    path.write_text(EMPLOYEES_CSV, encoding="utf-8")
    return path


@pytest.fixture
def boundary_dataset():
    return load_dataset(BOUNDARY_CSV, _options_named("employees"))


def _options_named(name):
    from qgen.dataset import IngestOptions
    return IngestOptions(name=name)
