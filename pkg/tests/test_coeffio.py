import math

import numpy as np
import pytest

from autoconv.coeffio import (
    BUNDLED,
    CoefficientFileError,
    bundled_text,
    format_coefficients,
    load_coefficients,
    load_step,
    parse_coefficients,
    read_coefficients,
    write_coefficients,
)


@pytest.mark.parametrize("name,n", [
    ("step_n10.txt", 10), ("step_n20_c.txt", 20), ("step_n150_signed.txt", 150),
    ("step_n208.txt", 208), ("g_delta0138_n119.txt", 119),
])
def test_bundled_sizes(name, n):
    assert load_coefficients(name).size == n


def test_bundled_text_tokens_are_verbatim():
    # every numeric token survives a parse/format round trip as the same float
    for name in BUNDLED:
        text = bundled_text(name)
        values = parse_coefficients(text)
        again = parse_coefficients(format_coefficients(values))
        assert np.array_equal(values, again)


def test_signed_detection():
    assert load_step("step_n150_signed.txt").signed
    assert not load_step("step_n208.txt").signed


def test_parse_comments_and_errors():
    assert parse_coefficients("# c\n1 2\n\n  3.5e-1\n").tolist() == [1, 2, 0.35]
    with pytest.raises(CoefficientFileError) as info:
        parse_coefficients("1\n2\nx3\n", source="f.txt")
    assert info.value.lineno == 3
    assert "f.txt:3" in str(info.value)
    with pytest.raises(CoefficientFileError):
        parse_coefficients("# only a comment\n")
    with pytest.raises(CoefficientFileError):
        parse_coefficients("")


def test_file_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    a = rng.uniform(size=17) * math.pi
    p = tmp_path / "c.txt"
    write_coefficients(p, a, header="test\nsecond line")
    assert np.array_equal(read_coefficients(p), a)
    assert p.read_text().startswith("# test\n# second line\n")


def test_unknown_bundled_name():
    with pytest.raises(FileNotFoundError):
        load_coefficients("no_such_file.txt")
