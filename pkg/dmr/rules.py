"""IF-THEN rules: one disjunctive rule per mega-cloud."""
from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import ModelError
from .model import DmrModel


@dataclass(frozen=True)
class Antecedent:
    """A prototype named in a rule, with where it came from."""
    cloud_id: int
    source_sample_id: Optional[int]
    synthetic: bool


@dataclass(frozen=True)
class Rule:
    """IF x ~ p1 OR x ~ p2 OR ... THEN class_label, for the prototypes of one mega-cloud."""
    mega_cloud_id: int
    class_label: str
    antecedents: List[Antecedent]


def export_rules(model: DmrModel) -> List[Rule]:
    """One rule per mega-cloud, ordered by mega-cloud id, antecedents by cloud id.

    Raises:
        ModelError: "merge first" if mega-clouds have not been computed.
    """
    if not model.megaclouds:
        raise ModelError("merge first: the model has no mega-clouds")
    clouds = model.cloud_index()
    rules = []
    for mega in sorted(model.megaclouds, key=lambda m: m.id):
        antecedents = [
            Antecedent(cloud_id=cid, source_sample_id=clouds[cid].source_sample_id,
                       synthetic=clouds[cid].synthetic)
            for cid in sorted(mega.member_cloud_ids)
        ]
        rules.append(Rule(mega_cloud_id=mega.id, class_label=mega.class_label, antecedents=antecedents))
    return rules


def rule_for_cloud(rules: Sequence[Rule], cloud_id: int) -> Rule:
    """The rule whose antecedents include `cloud_id`."""
    for rule in rules:
        if any(a.cloud_id == cloud_id for a in rule.antecedents):
            return rule
    raise KeyError(cloud_id)


def _describe(antecedent: Antecedent) -> str:
    if antecedent.synthetic:
        origin = "synthetic"
    elif antecedent.source_sample_id is None:
        origin = "unknown origin"
    else:
        origin = f"row {antecedent.source_sample_id}"
    return f"(x ~ prototype {antecedent.cloud_id} [{origin}])"


def format_rule(rule: Rule) -> str:
    """Renders a rule, e.g. ``IF (x ~ prototype 3 [row 17]) OR (x ~ prototype 9 [synthetic]) THEN "cat"``."""
    body = " OR ".join(_describe(a) for a in rule.antecedents)
    return f'IF {body} THEN "{rule.class_label}"'
