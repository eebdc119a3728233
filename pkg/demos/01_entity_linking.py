"""Link a paragraph's mentions to a knowledge base and type them.

Runs fully offline: a gazetteer recognizer plus an in-memory knowledge
base stand in for the live annotation and KB endpoints.
"""

from crossmodal.linking import (
    EntityLinker,
    GazetteerAnnotator,
    KBRecord,
    StaticKBClient,
)
from crossmodal.linking.kb import entity_card
from crossmodal.linking.types import Coordinate

TEXT = (
    "Angela Merkel met Barack Obama in Berlin. "
    "Obama later recalled the 2016 United States elections."
)

GAZETTEER = {
    "Angela Merkel": "Q567",
    "Barack Obama": "Q76",
    "Obama": "Q76",
    "Berlin": "Q64",
    "2016 United States elections": "Q8866",
}

KB = StaticKBClient(
    {
        "Q567": KBRecord(
            kb_id="Q567", label="Angela Merkel", instance_of=("Q5",),
            country_of_citizenship="Q183", gender="Q6581072",
            description="Chancellor of Germany 2005-2021",
        ),
        "Q76": KBRecord(
            kb_id="Q76", label="Barack Obama", instance_of=("Q5",),
            country_of_citizenship="Q30", gender="Q6581097",
            description="44th president of the United States",
        ),
        "Q64": KBRecord(
            kb_id="Q64", label="Berlin", instance_of=("Q515",),
            coordinate=Coordinate(52.52, 13.405), description="capital of Germany",
        ),
        "Q8866": KBRecord(
            kb_id="Q8866", label="2016 United States elections",
            coordinate=Coordinate(38.9, -77.0),
        ),
    }
)

EVENT_IDS = frozenset({"Q8866"})


def main():
    linker = EntityLinker(GazetteerAnnotator(GAZETTEER), KB, EVENT_IDS)
    result = linker.link_document(TEXT, "en")

    print(f"text: {TEXT!r}\n")
    for entity in result.entities:
        mentions = ", ".join(f"[{s.start},{s.end})" for s in entity.spans)
        print(f"{entity.kb_id:>6}  {entity.entity_type.value:<9} {entity.label:<30} spans {mentions}")
    print()

    card = entity_card(KB.get_record("Q76"))
    print("hover card for Q76:")
    for key, value in card.to_json().items():
        print(f"  {key}: {value}")


if __name__ == "__main__":
    main()
