import math

import numpy as np
import pytest

from depscope.frame import TimeSeriesFrame
from depscope.indicators import (
    IndicatorSpec,
    atr,
    build_feature_matrix,
    ema,
    hma,
    macd,
    obv,
    returns,
    rsi_indicator,
    standard_indicator_specs,
    wma,
)

from _oracles import (
    brute_atr,
    brute_ema,
    brute_hma,
    brute_macd,
    brute_obv,
    brute_returns,
    brute_rsi,
    brute_wma,
)


def assert_close_with_nans(actual, expected, tol=1e-9):
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    assert actual.shape == expected.shape
    np.testing.assert_array_equal(np.isnan(actual), np.isnan(expected))
    mask = ~np.isnan(expected)
    np.testing.assert_allclose(actual[mask], expected[mask], rtol=0.0, atol=tol)


def random_close(rng, n):
    return 100.0 * np.exp(np.cumsum(rng.standard_normal(n) * 0.01))


def test_wma_hand_value():
    out = wma([1.0, 2.0, 3.0], 3)
    assert math.isnan(out[0]) and math.isnan(out[1])
    assert out[2] == pytest.approx(7.0 / 3.0)


def test_wma_longer_than_input_is_all_nan():
    assert np.isnan(wma([1.0, 2.0], 5)).all()


def test_wma_constant_series_is_exact():
    out = wma(np.full(30, 2.5), 7)
    np.testing.assert_array_equal(out[6:], np.full(24, 2.5))


def test_wma_matches_oracle():
    rng = np.random.default_rng(0)
    for _ in range(25):
        n = int(rng.integers(1, 12))
        series = rng.standard_normal(int(rng.integers(n, 40)))
        assert_close_with_nans(wma(series, n), brute_wma(list(series), n))


def test_hma_needs_window_of_four():
    with pytest.raises(ValueError):
        hma(np.arange(10.0), 3)


def test_hma_matches_oracle():
    rng = np.random.default_rng(1)
    for n in (4, 5, 9, 16, 20):
        series = rng.standard_normal(60)
        assert_close_with_nans(hma(series, n), brute_hma(list(series), n))


def test_hma_preserves_linear_trend_where_lag_cancels():
    """For window sizes whose inner lag term vanishes the smoother is exact."""
    t = np.arange(40, dtype=np.float64)
    line = 3.0 + 0.5 * t
    for n in (4, 9):
        out = hma(line, n)
        valid = ~np.isnan(out)
        np.testing.assert_allclose(out[valid], line[valid], rtol=0.0, atol=1e-9)


def test_ema_constant_series_is_bit_exact():
    out = ema(np.full(50, 3.7), 10)
    np.testing.assert_array_equal(out, np.full(50, 3.7))


def test_ema_matches_oracle():
    rng = np.random.default_rng(2)
    for n in (1, 2, 9, 12, 26):
        series = rng.standard_normal(45)
        np.testing.assert_allclose(ema(series, n), brute_ema(list(series), n), atol=1e-12)


def test_returns_hand_values():
    out = returns([100.0, 105.0, 126.0], 2)
    assert np.isnan(out[:2]).all()
    assert out[2] == pytest.approx(0.26)
    one = returns([100.0, 110.0])
    assert one[1] == pytest.approx(0.1)


def test_returns_rejects_non_positive_input():
    with pytest.raises(ValueError):
        returns([100.0, 0.0, 101.0])
    with pytest.raises(ValueError):
        returns([100.0, -3.0])


def test_returns_matches_oracle():
    rng = np.random.default_rng(3)
    series = random_close(rng, 30)
    for d in (1, 2, 5):
        assert_close_with_nans(returns(series, d), brute_returns(list(series), d))


def test_macd_short_input_is_all_nan():
    line, signal = macd(np.linspace(10, 11, 25))
    assert np.isnan(line).all() and np.isnan(signal).all()
    assert line is not signal


def test_macd_matches_oracle():
    rng = np.random.default_rng(4)
    close = random_close(rng, 120)
    line, signal = macd(close)
    e_line, e_signal = brute_macd(list(close))
    np.testing.assert_allclose(line, e_line, atol=1e-9)
    np.testing.assert_allclose(signal, e_signal, atol=1e-9)


def test_obv_hand_values():
    np.testing.assert_array_equal(obv([1.0, 2.0, 1.0], [5.0, 7.0, 3.0]), [0.0, 7.0, 4.0])


def test_obv_flat_close_adds_nothing():
    np.testing.assert_array_equal(obv([2.0, 2.0, 2.0], [5.0, 5.0, 5.0]), [0.0, 0.0, 0.0])


def test_obv_input_checks():
    with pytest.raises(ValueError):
        obv([1.0, 2.0], [5.0])
    with pytest.raises(ValueError):
        obv([1.0, 2.0], [5.0, -1.0])


def test_obv_matches_oracle():
    rng = np.random.default_rng(5)
    close = random_close(rng, 50)
    volume = rng.uniform(0.0, 1e6, 50)
    np.testing.assert_allclose(obv(close, volume), brute_obv(list(close), list(volume)), atol=1e-6)


def test_atr_matches_oracle():
    rng = np.random.default_rng(6)
    close = random_close(rng, 60)
    spread = np.abs(rng.standard_normal(60)) * 0.5
    high = close + spread
    low = close - spread
    for n in (1, 5, 14):
        assert_close_with_nans(atr(high, low, close, n), brute_atr(list(high), list(low), list(close), n))


def test_atr_rejects_inverted_bars():
    with pytest.raises(ValueError):
        atr([1.0, 2.0], [1.5, 1.0], [1.2, 1.5])


def test_rsi_extremes_and_flat_reading():
    up = rsi_indicator(np.arange(1.0, 20.0), 5)
    assert up[5:][~np.isnan(up[5:])].min() == pytest.approx(100.0)
    down = rsi_indicator(np.arange(20.0, 1.0, -1.0), 5)
    assert np.nanmax(down[5:]) == pytest.approx(0.0)
    flat = rsi_indicator(np.full(12, 7.0), 5)
    assert np.nanmax(flat) == pytest.approx(50.0)
    assert np.nanmin(flat) == pytest.approx(50.0)


def test_rsi_matches_oracle_and_stays_bounded():
    rng = np.random.default_rng(7)
    for _ in range(10):
        close = random_close(rng, 50)
        out = rsi_indicator(close, 14)
        assert_close_with_nans(out, brute_rsi(list(close), 14))
        valid = out[~np.isnan(out)]
        assert (valid >= 0.0).all() and (valid <= 100.0).all()


def test_rsi_short_input_is_all_nan():
    assert np.isnan(rsi_indicator(np.arange(1.0, 10.0), 14)).all()


def test_indicator_spec_column_names():
    specs = standard_indicator_specs()
    assert [s.column_name for s in specs] == [
        "f_ret_c_1",
        "f_vol_pct",
        "f_ret_c_hma_5",
        "f_ret_c_hma_20",
        "f_c_macd",
        "f_c_macd_signal",
        "f_obv",
        "f_atr",
        "f_rsi",
        "t_ret_c_1",
        "t_ret_c_hma_5",
        "t_ret_c_hma_20",
    ]


def test_indicator_spec_validation():
    with pytest.raises(ValueError):
        IndicatorSpec("sma")
    with pytest.raises(ValueError):
        IndicatorSpec("ret", 0)
    with pytest.raises(ValueError):
        IndicatorSpec("obv", 1, "target")
    with pytest.raises(ValueError):
        IndicatorSpec("ret", 1, "label")


def make_ohlcv(rng, n):
    close = random_close(rng, n)
    opens = np.concatenate(([close[0]], close[:-1]))
    spread = np.abs(rng.standard_normal(n)) * 0.3
    ts = np.datetime64("2019-01-01") + np.arange(n)
    return TimeSeriesFrame(
        timestamps=ts,
        columns={
            "open": opens,
            "high": np.maximum(opens, close) + spread,
            "low": np.minimum(opens, close) - spread,
            "close": close,
            "volume": rng.uniform(1e5, 1e6, n),
        },
    )


def test_feature_matrix_is_finite_and_trimmed():
    rng = np.random.default_rng(8)
    frame = make_ohlcv(rng, 200)
    out = build_feature_matrix(frame, standard_indicator_specs())
    assert len(out) == 200 - 23 - 20
    for name in out.column_names:
        assert np.isfinite(out.column(name)).all(), name
    assert str(out.timestamps[0]) == str(frame.timestamps[23])


def test_targets_are_forward_shifted_values():
    rng = np.random.default_rng(9)
    frame = make_ohlcv(rng, 120)
    out = build_feature_matrix(frame, standard_indicator_specs())
    r1 = out.column("f_ret_c_1")
    t1 = out.column("t_ret_c_1")
    np.testing.assert_allclose(t1[:-1], r1[1:], atol=1e-12)
    h5_feature = out.column("f_ret_c_hma_5")
    h5_target = out.column("t_ret_c_hma_5")
    np.testing.assert_allclose(h5_target[:-5], h5_feature[5:], atol=1e-12)


def test_ret_hma_smooths_returns_not_prices():
    rng = np.random.default_rng(10)
    frame = make_ohlcv(rng, 120)
    out = build_feature_matrix(frame, [IndicatorSpec("ret_hma", 5)])
    expected = hma(returns(frame.column("close")), 5)
    start = 120 - len(out)
    np.testing.assert_allclose(out.column("f_ret_c_hma_5"), expected[start:], atol=1e-12)


def test_empty_spec_list_returns_same_frame():
    rng = np.random.default_rng(11)
    frame = make_ohlcv(rng, 40)
    assert build_feature_matrix(frame, []) is frame


def test_duplicate_column_names_rejected():
    rng = np.random.default_rng(12)
    frame = make_ohlcv(rng, 60)
    with pytest.raises(ValueError, match="duplicate"):
        build_feature_matrix(frame, [IndicatorSpec("ret", 1), IndicatorSpec("ret", 1)])


def test_too_short_history_for_any_row():
    rng = np.random.default_rng(13)
    frame = make_ohlcv(rng, 30)
    with pytest.raises(ValueError):
        build_feature_matrix(frame, standard_indicator_specs())
