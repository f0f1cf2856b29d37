import pytest

from tatebv import conjugacy_classes, preset_group
from tatebv.complexes import DComplex


@pytest.fixture(scope="session")
def s3():
    return preset_group("symmetric", 3)


@pytest.fixture(scope="session")
def s3_cd(s3):
    return conjugacy_classes(s3)


@pytest.fixture(scope="session")
def s3_complex(s3):
    return DComplex(s3, 3, (-10, 9))


@pytest.fixture(scope="session")
def d4():
    return preset_group("dihedral", 4)
