"""Regenerate the bundled demo corpus and its embedding file.

Run from the repository root:

    python3 scripts/freeze_demo_data.py

Writes src/collabrec/data/demo_profiles.csv (8 curated profiles plus 192
seeded synthetic ones) and src/collabrec/data/demo_embeddings.jsonl (one
256-dim vector per profile, hashed-projection provider, seed 1337).
Both files are committed; this script only exists so they can be audited
and rebuilt.  Rebuilding must be a no-op unless the generator changed.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from collabrec.corpus import (  # noqa: E402
    DEFAULT_SKILL_POOL,
    Profile,
    generate_synthetic,
    load_stopwords,
    preprocess,
    profile_id_for_email,
    write_profiles_csv,
)
from collabrec.vectorize import HashedProjectionProvider  # noqa: E402

DATA_DIR = ROOT / "src" / "collabrec" / "data"
SYNTHETIC_COUNT = 192
SYNTHETIC_SEED = 42
EMBED_DIMENSION = 256
EMBED_SEED = 1337

CURATED = [
    # the designated demo target for recommendation walk-throughs
    ("Noor Haddad", "noor.haddad@demo.example.edu", "faculty", 12,
     "research projects", "student", "Cybersecurity",
     "Network Security, Cryptography, Penetration Testing, Python"),
    ("Priya Raman", "priya.raman@demo.example.edu", "student", 2,
     "hackathons", "faculty", "Cybersecurity",
     "Network Security, Python, Linux"),
    ("Marcus Webb", "marcus.webb@demo.example.edu", "student", 1,
     "research projects", "faculty", "Machine Learning",
     "Python, PyTorch, Statistics"),
    ("Elif Kaya", "elif.kaya@demo.example.edu", "faculty", 15,
     "publications", "student", "Distributed Systems",
     "SQL, PostgreSQL, Distributed Systems, Go"),
    ("Jonas Lindqvist", "jonas.lindqvist@demo.example.edu", "student", 3,
     "hackathons", "student", "Robotics",
     "ROS, C++, Control Systems, Arduino"),
    ("Amara Okafor", "amara.okafor@demo.example.edu", "researcher", 9,
     "research projects", "student", "Computational Biology",
     "Python, R, Genomics, Pandas"),
    ("Diego Fuentes", "diego.fuentes@demo.example.edu", "student", 2,
     "startups", "student", "Web Development",
     "JavaScript, TypeScript, React, Node.js"),
    ("Hana Suzuki", "hana.suzuki@demo.example.edu", "faculty", 7,
     "thesis work", "student", "Machine Learning",
     "Python, Statistics, scikit-learn, Optimization"),
]


def curated_profiles() -> list[Profile]:
    profiles = []
    for name, email, profession, experience, interest, collab, domain, skills in CURATED:
        profiles.append(
            Profile(
                id=profile_id_for_email(email),
                name=name,
                email=email,
                profession=profession,
                experience=float(experience),
                interest=interest,
                collaboration_with=collab,
                domain=domain,
                skillset=skills,
                is_synthetic=False,
            )
        )
    return profiles


def main() -> None:
    profiles = curated_profiles() + generate_synthetic(
        DEFAULT_SKILL_POOL, SYNTHETIC_COUNT, seed=SYNTHETIC_SEED
    )
    assert len({p.id for p in profiles}) == len(profiles)

    csv_path = DATA_DIR / "demo_profiles.csv"
    write_profiles_csv(profiles, csv_path)

    stopwords = load_stopwords()
    provider = HashedProjectionProvider(dimension=EMBED_DIMENSION, seed=EMBED_SEED)
    jsonl_path = DATA_DIR / "demo_embeddings.jsonl"
    with jsonl_path.open("w", encoding="utf-8") as fh:
        for profile in profiles:
            doc = preprocess(profile, stopwords)
            vector = provider.vector_for(" ".join(doc.tokens))
            fh.write(
                json.dumps({"id": profile.id, "vector": vector.values.tolist()})
                + "\n"
            )
    print(f"wrote {csv_path} ({len(profiles)} profiles)")
    print(f"wrote {jsonl_path}")


if __name__ == "__main__":
    main()
