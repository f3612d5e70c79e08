import numpy as np
import pytest

from shiftscope.exceptions import (
    BadMagicError,
    TruncatedTensorError,
    UnknownDtypeError,
)
from shiftscope.io.tensor import MAGIC, TensorFile, read_tensor, write_tensor


def test_float_tensor_layout():
    data = TensorFile(np.array([[1.0, 2.0]])).to_bytes()
    assert data[:4] == MAGIC
    assert data[4] == 0
    assert data[5] == 2
    assert int.from_bytes(data[6:14], "little") == 1
    assert int.from_bytes(data[14:22], "little") == 2
    assert len(data) == 22 + 16


def test_int_tensor_layout():
    data = TensorFile(np.array([3, 4, 5])).to_bytes()
    assert data[4] == 1
    assert data[5] == 1
    parsed = TensorFile.parse(data).array
    assert parsed.dtype == np.dtype("<i8")
    assert parsed.tolist() == [3, 4, 5]


def test_parse_is_bit_exact():
    array = np.array([[0.0, -0.0], [np.nan, 1e-300], [np.inf, -np.inf]])
    data = TensorFile(array).to_bytes()
    again = TensorFile(TensorFile.parse(data).array).to_bytes()
    assert again == data


def test_bad_magic():
    data = b"NOPE" + TensorFile(np.zeros(2)).to_bytes()[4:]
    with pytest.raises(BadMagicError) as exc_info:
        TensorFile.parse(data)
    assert exc_info.value.ref == "tensor header"


def test_unknown_dtype_code():
    data = bytearray(TensorFile(np.zeros(2)).to_bytes())
    data[4] = 7
    with pytest.raises(UnknownDtypeError, match="dtype code 7"):
        TensorFile.parse(bytes(data))


def test_unsupported_rank():
    with pytest.raises(UnknownDtypeError):
        TensorFile(np.zeros((2, 2, 2)))
    with pytest.raises(UnknownDtypeError):
        TensorFile(np.array(["a", "b"]))


@pytest.mark.parametrize("cut", [3, 10, 21])
def test_truncated_input(cut):
    data = TensorFile(np.ones((2, 2))).to_bytes()
    with pytest.raises(TruncatedTensorError):
        TensorFile.parse(data[:cut])


def test_payload_too_long():
    data = TensorFile(np.ones(3)).to_bytes() + b"\x00"
    with pytest.raises(TruncatedTensorError, match="expected 24"):
        TensorFile.parse(data)


def test_file_helpers(tmp_path):
    path = tmp_path / "probabilities.dsg"
    write_tensor(path, [[0.25, 0.75]])
    np.testing.assert_array_equal(read_tensor(path), [[0.25, 0.75]])


def test_booleans_are_stored_as_int64():
    tensor = TensorFile(np.array([True, False]))
    assert tensor.dtype_code == 1
    assert tensor.array.tolist() == [1, 0]


def test_random_tensors_survive_files_bit_exactly(tmp_path):
    rng = np.random.default_rng(11)
    path = tmp_path / "t.dsg"
    for _ in range(200):
        rank = int(rng.integers(1, 3))
        shape = tuple(int(n) for n in rng.integers(0, 7, size=rank))
        count = int(np.prod(shape))
        if rng.random() < 0.5:
            # arbitrary bit patterns, NaN payloads and subnormals included
            array = np.frombuffer(rng.bytes(8 * count), dtype="<f8").reshape(shape)
        else:
            array = rng.integers(np.iinfo(np.int64).min, np.iinfo(np.int64).max, size=shape, dtype=np.int64)
        write_tensor(path, array)
        again = read_tensor(path)
        assert again.shape == shape
        assert again.dtype == array.dtype
        assert again.tobytes() == array.tobytes()


@pytest.mark.parametrize("shape", [(0,), (0, 3), (4, 0)])
def test_zero_length_dimensions(shape):
    data = TensorFile(np.zeros(shape)).to_bytes()
    assert len(data) == 6 + 8 * len(shape)
    parsed = TensorFile.parse(data).array
    assert parsed.shape == shape
