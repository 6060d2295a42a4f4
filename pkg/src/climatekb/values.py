"""The ten personal values, the questionnaire, and value profiles.

Answers use a 6-point agreement scale (1 = "strongly disagree" ... 6 =
"strongly agree"). A profile weight is the positive, centered, and scaled
answer u = (raw - 1) / 5, landing on {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import LexiconError, ProfileError


class PersonalValue(str, Enum):
    CONFORMITY = "conformity"
    TRADITION = "tradition"
    BENEVOLENCE = "benevolence"
    UNIVERSALISM = "universalism"
    SELF_DIRECTION = "self_direction"
    STIMULATION = "stimulation"
    HEDONISM = "hedonism"
    ACHIEVEMENT = "achievement"
    POWER = "power"
    SECURITY = "security"


# Canonical order used everywhere: questionnaire items, serialized
# association maps, and score sums.
VALUE_ORDER: tuple[PersonalValue, ...] = tuple(PersonalValue)

SCALE_MIN = 1
SCALE_MAX = 6
SCALE_LABELS: tuple[str, ...] = (
    "strongly disagree",
    "disagree",
    "slightly disagree",
    "slightly agree",
    "agree",
    "strongly agree",
)


def neutral_associations() -> dict[PersonalValue, int]:
    return {v: 0 for v in VALUE_ORDER}


@dataclass(frozen=True)
class QuestionnaireItem:
    id: int
    value: PersonalValue
    statement: str
    scale_labels: tuple[str, ...] = SCALE_LABELS


def questionnaire(path: str | Path | None = None) -> list[QuestionnaireItem]:
    """The ten questionnaire items, one per value, in canonical order."""
    if path is None:
        from .config import Config

        path = Config().path_for("questionnaire")
    items: dict[PersonalValue, QuestionnaireItem] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        try:
            row = json.loads(line)
            value = PersonalValue(row["value"])
            item = QuestionnaireItem(id=int(row["id"]), value=value, statement=row["statement"])
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise LexiconError(f"{path}: bad questionnaire row on line {lineno}: {exc}") from exc
        if value in items:
            raise LexiconError(f"{path}: duplicate questionnaire item for {value.value}")
        items[value] = item
    missing = [v.value for v in VALUE_ORDER if v not in items]
    if missing:
        raise LexiconError(f"{path}: questionnaire is missing items for: {', '.join(missing)}")
    return [items[v] for v in VALUE_ORDER]


@dataclass(frozen=True)
class ValueProfile:
    raw: dict[PersonalValue, int]
    u: dict[PersonalValue, float]


def profile_from_answers(answers: dict[PersonalValue | str, int]) -> ValueProfile:
    """Turn questionnaire answers into a value profile.

    Requires exactly one integer answer in [1, 6] per value; u is exactly
    (raw - 1) / 5 per value.
    """
    normalized: dict[PersonalValue, int] = {}
    for key, raw in answers.items():
        try:
            value = PersonalValue(key)
        except ValueError:
            raise ProfileError(f"unknown personal value {key!r}", field=str(key)) from None
        if value in normalized:
            raise ProfileError(f"duplicate answer for {value.value}", field=value.value)
        if isinstance(raw, bool) or not isinstance(raw, int):
            raise ProfileError(
                f"answer for {value.value} must be an integer, got {raw!r}", field=value.value)
        if not SCALE_MIN <= raw <= SCALE_MAX:
            raise ProfileError(
                f"answer for {value.value} out of range {SCALE_MIN}..{SCALE_MAX}: {raw}",
                field=value.value)
        normalized[value] = raw
    missing = [v for v in VALUE_ORDER if v not in normalized]
    if missing:
        raise ProfileError(
            "missing answers for: " + ", ".join(v.value for v in missing),
            field=missing[0].value)
    raw_ordered = {v: normalized[v] for v in VALUE_ORDER}
    u = {v: (raw_ordered[v] - SCALE_MIN) / (SCALE_MAX - SCALE_MIN) for v in VALUE_ORDER}
    return ValueProfile(raw=raw_ordered, u=u)
