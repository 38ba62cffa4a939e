"""Catalog entries reproduce their own expected classifications."""

import numpy as np
import pytest

from conelab import catalog
from conelab import contact as CT
from conelab.errors import NotContactMetricError

from .conftest import sample

THRESHOLD = 1e-6


def classify(entry, spec):
    """contact-metric / k-contact / sasakian / not-contact-metric by residual."""
    st = CT.ContactMetricStructure(entry.chart, spec.xi, spec.name)
    pts, _, _ = sample(entry.chart, 20, seed=1)
    if np.max(CT.kc_residuals(st, pts)) > THRESHOLD:
        return "not-contact-metric"
    if np.max(CT.killing_residuals(st, pts)) > THRESHOLD:
        return "contact-metric"
    if np.max(CT.sasaki_residuals(st, pts)) > THRESHOLD:
        return "k-contact"
    return "sasakian"


def test_every_catalogued_classification_is_reproduced():
    for key in catalog.keys():
        entry = catalog.get(key)
        for spec in entry.structures:
            assert classify(entry, spec) == spec.expected, (key, spec.name)


def test_build_contact_agrees_with_classification():
    for key in catalog.keys():
        entry = catalog.get(key)
        for spec in entry.structures:
            if spec.expected == "not-contact-metric":
                with pytest.raises(NotContactMetricError):
                    CT.build_contact(entry.chart, spec.xi, spec.name)
            else:
                CT.build_contact(entry.chart, spec.xi, spec.name)


def test_structure_lookup(s3):
    assert s3.structure().name == "i"
    assert s3.structure("k").name == "k"
    with pytest.raises(KeyError):
        s3.structure("h")


def test_known_values_present():
    for key in catalog.keys():
        entry = catalog.get(key)
        assert "volume" in entry.known_values
        assert entry.n in (1, 2)
        assert len(entry.quadrature) == entry.chart.dim
