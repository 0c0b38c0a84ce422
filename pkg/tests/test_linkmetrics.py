"""Tests for far-user SINR and the outage predicate."""

import math

import numpy as np
import pytest

from irsnoma._types import ConfigError, DomainError, ReflectVector, Scheme
from irsnoma.channel import draw_realization
from irsnoma.control import build_onoff_codebook
from irsnoma.linkmetrics import (
    count_outages,
    is_outage,
    outage_threshold,
    sinr_far,
    sinr_from_gains,
)


class TestSinrFar:
    def test_breakdown_matches_gains(self, two_pair, two_pair_realization):
        theta = build_onoff_codebook(4, 4, 1)[2]
        result = sinr_far(theta, two_pair_realization, two_pair)
        gains = np.abs(theta.values.conj() @ two_pair_realization.effective) ** 2
        assert result.useful == pytest.approx(gains[0] * 0.8)
        assert result.self_interference == pytest.approx(gains[0] * 0.2)
        assert result.inter_pair == pytest.approx(gains[1])
        assert result.noise == pytest.approx(1.0)
        assert result.sinr == pytest.approx(
            float(sinr_from_gains(gains, 0, two_pair))
        )

    def test_single_pair_has_no_inter_pair_term(self, single_pair, stream):
        real = draw_realization(single_pair, 0, stream)
        theta = build_onoff_codebook(4, 4, 1)[0]
        assert sinr_far(theta, real, single_pair).inter_pair == 0.0

    def test_bounded_by_power_split(self, two_pair, two_pair_realization):
        theta = build_onoff_codebook(4, 4, 1)[1]
        config = two_pair.with_snr_db(200)
        sinr = sinr_far(theta, two_pair_realization, config).sinr
        assert sinr < 0.8 / 0.2

    def test_zero_theta_gives_zero_sinr(self, two_pair, two_pair_realization):
        theta = ReflectVector(np.zeros(4), Scheme.ONOFF)
        assert sinr_far(theta, two_pair_realization, two_pair).sinr == 0.0

    def test_rejects_dimension_mismatch(self, two_pair, two_pair_realization):
        theta = ReflectVector(np.ones(3) / 2, Scheme.ONOFF)
        with pytest.raises(ConfigError):
            sinr_far(theta, two_pair_realization, two_pair)

    def test_batch_broadcasting(self, two_pair):
        gains = np.array([[[1.0, 0.5], [2.0, 0.0]]])
        sinr = sinr_from_gains(gains, 0, two_pair)
        assert sinr.shape == (1, 2)
        assert sinr[0, 0] == pytest.approx(0.8 / (0.2 + 0.5 + 1.0))
        assert sinr[0, 1] == pytest.approx(1.6 / (0.4 + 1.0))


class TestOutagePredicate:
    def test_threshold(self):
        assert outage_threshold(1.0) == 1.0
        assert outage_threshold(2.0) == 3.0

    def test_strict_inequality(self):
        assert not is_outage(1.0, 1.0)
        assert is_outage(math.nextafter(1.0, 0.0), 1.0)
        assert not is_outage(3.0, 2.0)

    def test_zero_sinr_is_outage(self):
        assert is_outage(0.0, 0.5)

    @pytest.mark.parametrize("sinr", [-0.1, math.nan])
    def test_rejects_invalid_sinr(self, sinr):
        with pytest.raises(DomainError):
            is_outage(sinr, 1.0)

    def test_count_outages(self):
        sinr = np.array([0.5, 1.0, 2.0, 0.99, 0.0])
        assert count_outages(sinr, 1.0) == 3
