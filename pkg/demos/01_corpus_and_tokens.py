#!/usr/bin/env python3
"""Walk through the corpus layer: loading, validation, and token prep.

Run from the repository root after installing the package:

    python3 demos/01_corpus_and_tokens.py
"""

from collabrec import (
    DEFAULT_SKILL_POOL,
    CorpusValidationError,
    generate_synthetic,
    load_demo_profiles,
    load_profiles,
    load_stopwords,
    preprocess,
    stem_tokens,
)
from collabrec.demo import DEMO_TARGET_EMAIL

profiles = load_demo_profiles()
print(f"bundled demo corpus: {len(profiles)} profiles")
curated = [p for p in profiles if not p.is_synthetic]
print(f"  {len(curated)} curated, {len(profiles) - len(curated)} synthetic\n")

target = next(p for p in profiles if p.email == DEMO_TARGET_EMAIL)
print(f"subject profile: {target.name} <{target.email}>")
print(f"  {target.profession}, {target.experience:g} years, domain {target.domain}")
print(f"  skills: {target.skillset}\n")

# Everything downstream works on the domain + skillset text.  Lowercase,
# split, drop stop words; stemming happens separately so embeddings can
# still see the surface forms.
stopwords = load_stopwords()
doc = preprocess(target, stopwords)
print(f"tokens after stop-word removal: {doc.tokens}")
print(f"tokens after stemming:          {stem_tokens(doc).tokens}\n")

# Validation collects every broken record, not just the first.
bad_records = [
    {"name": "A", "email": "a@x.test", "profession": "student", "experience": "-1",
     "interest": "hackathons", "collaboration_with": "student",
     "domain": "AI", "skillset": "Python"},
    {"name": "B", "email": "b@x.test", "profession": "student", "experience": "2",
     "interest": "hackathons", "collaboration_with": "student",
     "domain": "", "skillset": "Python"},
]
try:
    load_profiles(bad_records)
except CorpusValidationError as exc:
    print("validation of two broken records reports both problems:")
    for index, message in exc.errors:
        print(f"  record {index}: {message}")

# The synthetic generator is a pure function of (pool, count, seed).
a = generate_synthetic(DEFAULT_SKILL_POOL, 5, seed=123)
b = generate_synthetic(DEFAULT_SKILL_POOL, 5, seed=123)
print(f"\nsynthetic generation is deterministic: {a == b}")
for p in a[:3]:
    print(f"  {p.name:20s} {p.domain:25s} {p.skillset}")
