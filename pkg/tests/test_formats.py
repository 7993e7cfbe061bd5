import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from caencompress.codec import Key
from caencompress.formats import FormatError, PbmImage, key_parse, key_write, pbm_read, pbm_write

KEY_TEXT = "version 1\nblock 2 2\nboundary null\nrule 69\nenc 1 0\n"


def test_p1_read():
    img = pbm_read(b"P1\n2 2\n0 1\n1 0\n")
    assert img.pixels.tolist() == [[0, 1], [1, 0]]


def test_p4_read():
    img = pbm_read(b"P4\n2 2\n" + bytes([0x40, 0x80]))
    assert img.pixels.tolist() == [[0, 1], [1, 0]]


def test_width_comes_first():
    img = pbm_read(b"P1\n3 2\n1 0 0\n0 0 1\n")
    assert (img.m, img.n) == (2, 3)
    assert pbm_write(img) == b"P1\n3 2\n1 0 0\n0 0 1\n"


def test_p1_comments_and_packed_digits():
    img = pbm_read(b"P1\n# made by hand\n2   2\n# body\n01\n10")
    assert img.pixels.tolist() == [[0, 1], [1, 0]]


@pytest.mark.parametrize("data", [b"P5\n2 2\n255\n", b"P1\n2\n", b"P1\n2 2\n0 1 1\n", b"P4\n9 2\n\x00\x00\x00",
                                  b"P1\nx 2\n", b"P1\n2 2\n0 1 2 0\n", b"P1\n0 2\n"])
def test_malformed(data):
    with pytest.raises(FormatError):
        pbm_read(data)


def test_unsupported_message():
    with pytest.raises(FormatError, match="unsupported format"):
        pbm_read(b"P5 1 1 255 \x00")


def test_write_canonical():
    assert pbm_write(PbmImage(1, 1, [[1]])) == b"P1\n1 1\n1\n"
    canonical = b"P1\n3 2\n0 1 1\n1 0 0\n"
    assert pbm_write(pbm_read(canonical)) == canonical


def test_exhaustive_2x2_roundtrip():
    for v in range(16):
        img = PbmImage(2, 2, [(v >> (3 - i)) & 1 for i in range(4)])
        for form in ("P1", "P4"):
            assert pbm_read(pbm_write(img, form)) == img


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.sampled_from(["P1", "P4"]), st.data())
def test_roundtrip(m, n, form, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=m * n, max_size=m * n))
    img = PbmImage(m, n, np.array(bits).reshape(m, n))
    assert pbm_read(pbm_write(img, form)) == img


def test_key_parse():
    key = key_parse(KEY_TEXT)
    assert key == Key(2, 2, "null", 69, 1, 0)
    assert key.profile.k == 4
    assert key_write(key) == KEY_TEXT


def test_key_identity_rule_warns(caplog):
    with caplog.at_level(logging.WARNING):
        key = key_parse(KEY_TEXT.replace("rule 69", "rule 1"))
    assert key.profile.k == 16
    assert "compression ratio is 1" in caplog.text


@pytest.mark.parametrize("text,match", [
    (KEY_TEXT.replace("rule 69", "rule 512"), "outside"),
    (KEY_TEXT.replace("rule 69", "rule 3"), "nearby usable rules: \\[1, "),
    (KEY_TEXT.replace("rule 69", "rule 0"), "single attractor"),
    (KEY_TEXT + "salt 4\n", "unknown field"),
    (KEY_TEXT.replace("version 1\n", ""), "missing"),
    (KEY_TEXT.replace("version 1", "version 2"), "version"),
    (KEY_TEXT.replace("enc 1 0", "enc 1"), "enc"),
    (KEY_TEXT + "rule 69\n", "duplicate"),
    (KEY_TEXT.replace("null", "mirror"), "boundary"),
])
def test_key_errors(text, match):
    with pytest.raises(FormatError, match=match):
        key_parse(text)
