"""Shared gold fixtures: typed utterances and reformulation pairs.

A curated set of assistant-style questions with hand-assigned types,
plus repair/reshape question pairs used to exercise weak-label
derivation. The typed list doubles as the classifier accuracy gate.
"""
from __future__ import annotations

from qreform.qtypes import Operator, QuestionType

ROOT = QuestionType.ROOT
POLAR = QuestionType.POLAR
OPEN = QuestionType.OPEN
REQUEST = QuestionType.REQUEST
OTHER = QuestionType.OTHER

# (text, gold type)
TYPED_UTTERANCES = [
    ("Who is the US president?", ROOT),
    ("Is it going to rain tomorrow?", POLAR),
    ("Can cats eat onions?", POLAR),
    ("How does depression affect the body?", OPEN),
    ("Tell me the capital of Utah.", REQUEST),
    ("watermelon health benefits", OTHER),
    ("sports softball in Denver", OTHER),
    ("where does spider live in?", ROOT),
    ("where does a spider live?", ROOT),
    ("what is the oridgin of the word mosque?", ROOT),
    ("where does the word mosque come from?", ROOT),
    ("how remember pronunciation of danish words?", OPEN),
    ("how can we make money from youtube?", OPEN),
    ("does the grammar generates the words?", POLAR),
    ("does the grammar generate the words?", POLAR),
    ("can charity claim patent on medicine?", POLAR),
    ("can charities be granted patents on medicine?", POLAR),
    ("winners in olympic in 2000?", OTHER),
    ("names of olympic winners of 2008?", OTHER),
    ("at what tempature does alcohol freeze?", OTHER),
    ("at what temperture does alcohol freeze?", OTHER),
    ("find out some advantages for setting up a partnership?", REQUEST),
    ("give 2 advantages of a business partnership?", REQUEST),
    ("name three groups of polymers and name one type of a composite?", REQUEST),
    ("name three common polymers?", REQUEST),
    ("how do you know if your local bike club is worth paying for?", OPEN),
    ("what benefits do bike clubs provide?", ROOT),
    ("how do you forgive other people?", OPEN),
    ("what's the best way to forgive people?", ROOT),
    ("an example of enzyme mimic is ?", OTHER),
    ("what are examples of enzymes and antibodies ?", ROOT),
    ("basic difference between compilers and interpreters?", OTHER),
    ("what are the differences between compilers and interpreters?", ROOT),
    ("explain the ending of batman arkham city to me", REQUEST),
    ("what happens in the ending of batman arkham city?", ROOT),
    ("unscrewing sliding window lock", REQUEST),
    ("what tool works with this star-shaped screw with a post in the middle?", ROOT),
    ("do blackholes exist?", POLAR),
    ("why do black holes exist?", ROOT),
    ("is there any easy way to make money online?", POLAR),
    ("what is the easiest way to earn money from online?", ROOT),
    ("are there any good challenging puzzles?", POLAR),
    ("what are some good word puzzles?", ROOT),
    ("how many playable characters are in lego star wars", ROOT),
]

# (source, target, expected operator) for weak-label derivation.
REPAIR_PAIRS = [
    ("where does spider live in?", "where does a spider live?"),
    ("what is the oridgin of the word mosque?", "where does the word mosque come from?"),
    ("how remember pronunciation of danish words?", "how can i remember the pronunciation of danish words?"),
    ("how can we make money from youtube?", "how do people earn money from youtube?"),
    ("does the grammar generates the words?", "does the grammar generate the words?"),
    ("can charity claim patent on medicine?", "can charities be granted patents on medicine?"),
    ("winners in olympic in 2000?", "names of olympic winners of 2008?"),
    ("at what tempature does alcohol freeze?", "at what temperture does alcohol freeze?"),
    ("find out some advantages for setting up a partnership?", "give 2 advantages of a business partnership?"),
    (
        "name three groups of polymers and name one type of a composite?",
        "name three common polymers?",
    ),
]

RESHAPE_PAIRS = [
    ("how do you know if your local bike club is worth paying for?", "what benefits do bike clubs provide?"),
    ("how do you forgive other people?", "what's the best way to forgive people?"),
    ("an example of enzyme mimic is ?", "what are examples of enzymes and antibodies ?"),
    (
        "basic difference between compilers and interpreters?",
        "what are the differences between compilers and interpreters?",
    ),
    ("explain the ending of batman arkham city to me", "what happens in the ending of batman arkham city?"),
    (
        "unscrewing sliding window lock",
        "what tool works with this star-shaped screw with a post in the middle?",
    ),
    ("do blackholes exist?", "why do black holes exist?"),
    ("is there any easy way to make money online?", "what is the easiest way to earn money from online?"),
    ("are there any good challenging puzzles?", "what are some good word puzzles?"),
]

DERIVATION_PAIRS = [(s, t, Operator.REP) for s, t in REPAIR_PAIRS] + [
    (s, t, Operator.ROO) for s, t in RESHAPE_PAIRS
]
