import pytest

from dmr.errors import ModelError
from dmr.megaclouds import merge_megaclouds
from dmr.rules import Antecedent, export_rules, format_rule, rule_for_cloud


@pytest.fixture
def merged_model(make_model):
    model = make_model([("cat", [0.0, 0.0], 3, 1.0), ("cat", [1.0, 0.0], 2, 1.0),
                        ("dog", [6.0, 0.0], 4, 1.0), ("cat", [12.0, 0.0], 1, 1.0)])
    model.megaclouds = merge_megaclouds(model)
    return model


def test_one_rule_per_megacloud(merged_model):
    rules = export_rules(merged_model)
    assert len(rules) == len(merged_model.megaclouds) == 3
    assert [rule.mega_cloud_id for rule in rules] == [1, 2, 3]
    assert [rule.class_label for rule in rules] == ["cat", "dog", "cat"]


def test_antecedents_carry_provenance(merged_model):
    rules = export_rules(merged_model)
    assert rules[0].antecedents == [Antecedent(1, 0, False), Antecedent(2, 1, False)]
    assert rules[1].antecedents == [Antecedent(3, 2, False)]


def test_single_prototype_megacloud_has_one_antecedent(merged_model):
    rule = export_rules(merged_model)[2]
    assert len(rule.antecedents) == 1
    assert rule.antecedents[0].cloud_id == 4


def test_synthetic_prototypes_are_flagged(merged_model):
    cloud = merged_model.cloud_index()[2]
    cloud.synthetic = True
    cloud.source_sample_id = None
    antecedents = export_rules(merged_model)[0].antecedents
    assert [a.synthetic for a in antecedents] == [False, True]
    assert format_rule(export_rules(merged_model)[0]) == (
        'IF (x ~ prototype 1 [row 0]) OR (x ~ prototype 2 [synthetic]) THEN "cat"'
    )


def test_rules_need_megaclouds(make_model):
    model = make_model([("cat", [0.0], 1, 1.0)])
    with pytest.raises(ModelError, match="merge first"):
        export_rules(model)


def test_rule_for_cloud(merged_model):
    rules = export_rules(merged_model)
    assert rule_for_cloud(rules, 3).mega_cloud_id == 2
    assert rule_for_cloud(rules, 2).mega_cloud_id == 1
    with pytest.raises(KeyError):
        rule_for_cloud(rules, 99)


def test_format_rule(merged_model):
    assert format_rule(export_rules(merged_model)[1]) == 'IF (x ~ prototype 3 [row 2]) THEN "dog"'
