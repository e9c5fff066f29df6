import json

import pytest

from loadaudit import (
    DuplicateLoadId,
    InvalidBand,
    MissingField,
    case_study_config,
    config_digest,
    parse_plant_config,
    serialize_plant_config,
)


def make_doc(**overrides):
    doc = {
        "loads": [
            {
                "load_id": "cleaning",
                "name": "Cascade camplate cleaning",
                "rated_power_kw": 9.6,
                "ideal_ton_min": 15.0,
                "band_min": [13.0, 18.0],
                "role": "cleans the finished camplate",
            }
        ]
    }
    doc.update(overrides)
    return doc


def test_cleaning_reference_load_accepted():
    config = parse_plant_config(json.dumps(make_doc()))
    load = config.loads[0]
    assert load.ideal_ton_min == 15.0
    assert (load.band.lower_min, load.band.upper_min) == (13.0, 18.0)


def test_trowalising_reference_load_accepted():
    doc = make_doc()
    doc["loads"][0].update(
        load_id="trowalising_370", ideal_ton_min=150.0, band_min=[151.0, 155.0]
    )
    config = parse_plant_config(json.dumps(doc))
    assert config.loads[0].ideal_ton_min == 150.0
    assert config.loads[0].band.contains(153.0)
    assert not config.loads[0].band.contains(150.0)


def test_inverted_band_rejected():
    doc = make_doc()
    doc["loads"][0]["band_min"] = [18.0, 13.0]
    with pytest.raises(InvalidBand):
        parse_plant_config(json.dumps(doc))


def test_duplicate_load_id_rejected():
    doc = make_doc()
    doc["loads"].append(dict(doc["loads"][0]))
    with pytest.raises(DuplicateLoadId):
        parse_plant_config(json.dumps(doc))


def test_missing_field_named():
    doc = make_doc()
    del doc["loads"][0]["rated_power_kw"]
    with pytest.raises(MissingField) as err:
        parse_plant_config(json.dumps(doc))
    assert err.value.name == "rated_power_kw"


def test_policy_defaults_applied():
    config = parse_plant_config(json.dumps(make_doc()))
    assert config.segmentation.on_threshold_fraction == 0.1
    assert config.segmentation.min_on_min == 1.0
    assert config.segmentation.merge_gap_min == 1.0
    assert config.classification.min_band_fraction == 0.5
    assert config.classification.min_cycles == 10


def test_policy_overrides_parsed():
    doc = make_doc(
        segmentation={"on_threshold_kw": 2.5, "min_on_min": 0.5, "merge_gap_min": 2.0},
        classification={"min_band_fraction": 0.6, "min_cycles": 25},
    )
    config = parse_plant_config(json.dumps(doc))
    assert config.segmentation.on_threshold_kw == 2.5
    assert config.segmentation.merge_gap_min == 2.0
    assert config.classification.min_band_fraction == 0.6
    assert config.classification.min_cycles == 25


def test_serialize_round_trip_and_digest():
    config = case_study_config()
    text = serialize_plant_config(config)
    again = parse_plant_config(text)
    assert again == config
    assert config_digest(again) == config_digest(config)
    assert len(config_digest(config)) == 64


def test_case_study_roster():
    config = case_study_config()
    by_id = config.by_id()
    assert set(by_id) == {"cleaning", "shot_peening", "trowalising_370", "trowalising_510"}
    assert by_id["cleaning"].ideal_ton_min == 15.0
    assert by_id["shot_peening"].ideal_ton_min == 15.0
    assert by_id["trowalising_370"].ideal_ton_min == 150.0
    assert (by_id["trowalising_370"].band.lower_min, by_id["trowalising_370"].band.upper_min) == (151.0, 155.0)
    assert (by_id["cleaning"].band.lower_min, by_id["cleaning"].band.upper_min) == (13.0, 18.0)
