"""Access to the bundled demo corpus and its frozen embeddings.

The corpus is 200 profiles: 8 curated ones plus 192 synthetic profiles
from the seeded generator, regenerable via scripts/freeze_demo_data.py.
The designated walk-through target is the curated security researcher;
examples and default CLI invocations recommend collaborators for them.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .corpus import Profile, load_profiles, read_records, profile_id_for_email
from .vectorize import FileImportProvider

DEMO_TARGET_EMAIL = "noor.haddad@demo.example.edu"
DEMO_TARGET_ID = profile_id_for_email(DEMO_TARGET_EMAIL)
DEMO_SYNTHETIC_SEED = 42
DEMO_EMBED_DIMENSION = 256
DEMO_EMBED_SEED = 1337


def _data_path(name: str) -> Path:
    return Path(resources.files("collabrec.data") / name)


def demo_profiles_path() -> Path:
    return _data_path("demo_profiles.csv")


def demo_embeddings_path() -> Path:
    return _data_path("demo_embeddings.jsonl")


def load_demo_profiles() -> list[Profile]:
    return load_profiles(read_records(demo_profiles_path()))


def demo_embedding_provider() -> FileImportProvider:
    return FileImportProvider.from_jsonl(demo_embeddings_path())
