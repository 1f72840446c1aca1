import math

import numpy as np
import pytest

import lwave


@pytest.mark.parametrize("wavelet", ["haar", "db2"])
def test_dwt_round_trip(wavelet):
    x = np.random.default_rng(3).random((16, 24))
    bands = lwave.dwt2d(x, wavelet)
    assert all(b.shape == (8, 12) for b in bands)
    assert np.max(np.abs(lwave.idwt2d(*bands, wavelet) - x)) < 1e-10


def test_multilevel_round_trip():
    x = np.random.default_rng(4).random((32, 32))
    ll, details = lwave.wavedec2(x, "db2", 3)
    assert ll.shape == (4, 4) and len(details) == 3
    assert np.max(np.abs(lwave.waverec2(ll, details, "db2") - x)) < 1e-10


def test_filters_are_orthonormal():
    low, high = lwave.filters("db2")
    assert math.isclose(sum(low), math.sqrt(2), abs_tol=1e-12)
    assert abs(sum(high)) < 1e-12
    assert math.isclose(sum(v * v for v in low), 1.0, abs_tol=1e-12)


def test_odd_shape_raises():
    with pytest.raises(lwave.ShapeError):
        lwave.dwt2d(np.zeros((7, 8)))


def test_metrics():
    a = np.random.default_rng(5).random((16, 16)) * 200
    assert lwave.psnr(a, a, 255.0) == math.inf
    assert lwave.ssim(a, a, 255.0) == 1.0
    assert abs(lwave.psnr(a, a + 16, 255.0) - 24.0483) < 1e-3


def test_pnm_round_trip():
    img = np.random.default_rng(6).integers(0, 256, (5, 7, 3), dtype=np.uint8)
    data = lwave.write_pnm(img)
    assert data.startswith(b"P6\n7 5\n255\n")
    assert np.array_equal(lwave.read_pnm(data), img)
    with pytest.raises(lwave.FormatError):
        lwave.read_pnm(b"P5\n2 2\n65535\n\0\0\0\0")


def test_waveblock_shape_and_serialization():
    block = lwave.LWaveBlock(in_channels=2, path_channels=3, seed=9)
    x = np.random.default_rng(7).random((2, 2, 8, 8))
    y = block.forward(x)
    assert y.shape == (2, 15, 8, 8)
    again = lwave.LWaveBlock.deserialize(block.serialize())
    assert np.array_equal(again.forward(x), y)


def test_generator_forward():
    gen = lwave.Generator(depth=2, base_channels=4, use_waveblock=True, waveblock_channels=[2])
    y = gen.forward(np.random.default_rng(8).random((1, 1, 16, 16)))
    assert y.shape == (1, 1, 16, 16)
    assert np.all((y > 0) & (y < 1))
    with pytest.raises(lwave.InvalidConfig):
        lwave.Generator(depth=0)


def test_gradcheck_suite_passes():
    items = lwave.gradcheck(0)
    assert len(items) >= 6
    assert all(passed for _, _, passed in items)


def test_short_comparison_is_deterministic():
    args = ["epochs=2", "train_count=4", "val_count=1", "image_size=16", "depth=2", "base_channels=4"]
    a = lwave.compare_convergence(args)
    b = lwave.compare_convergence(args)
    assert a["baseline"]["losses"] == b["baseline"]["losses"]
    assert a["waveblock"]["parameters"] > a["baseline"]["parameters"]
    with pytest.raises(lwave.InvalidConfig):
        lwave.compare_convergence(["no_such_key=1"])
