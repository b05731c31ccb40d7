"""Prompt taxonomy and offline literature search for a set of drivers.

Builds the full (category x style) battery for three emissions drivers, prints
one rendered prompt per style, answers a prompt with the deterministic stub
client, and runs a stub literature search from the derived terms.
"""

from paneldag import (
    ask_llm,
    build_queries,
    literature_terms,
    render_prompt,
    search_literature,
)

DRIVERS = [
    ("EG.CFT.ACCS.RU.ZS",
     "Access to clean fuels and technologies for cooking, rural (% of rural population)"),
    ("SP.URB.TOTL.IN.ZS", "Urban population (% of total population)"),
]
TARGET = "EN.ATM.CO2E.PC"

queries = build_queries(DRIVERS, TARGET)
print(f"battery: {len(queries)} prompts "
      f"({len(DRIVERS)} drivers x 5 categories x 3 styles)\n")

by_style = {}
for q in queries:
    by_style.setdefault(q.style, q)
for style, q in by_style.items():
    print(f"--- {q.category} / {style} ---")
    print(render_prompt(q))
    print()

answer = ask_llm(queries[0].prompt_text)
print(f"stub answer (model={answer.model_id}, attempts={answer.attempts}):")
print(f"  {answer.text}\n")

terms = literature_terms(DRIVERS[0][1], TARGET)
print(f"literature terms for {DRIVERS[0][0]}: {terms}")
for rec in search_literature(terms, max_results=3):
    print(f"  [{rec.source} {rec.external_id}] ({rec.year}) {rec.title}")
