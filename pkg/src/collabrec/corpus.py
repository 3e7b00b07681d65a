"""Profile data model, ingestion, synthetic generation and text preprocessing.

A profile corpus is the unit every other module operates on.  Ingestion
accepts CSV or JSON-lines records carrying the eight survey fields
(name, email, profession, experience, interest, collaboration_with,
domain, skillset); synthetic profiles are drawn from a fixed skill/domain
pool with a seeded deterministic PRNG so a given seed reproduces the
same corpus byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import json
import re
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import _porter
from .rng import SplitMix64

REQUIRED_FIELDS = (
    "name",
    "email",
    "profession",
    "experience",
    "interest",
    "collaboration_with",
    "domain",
    "skillset",
)

# Runs of letters/digits plus '+' and '#', so "c++" and "c#" survive as
# single tokens.  Underscore counts as punctuation.
_TOKEN_RE = re.compile(r"(?:[^\W\d_]|\d|[+#])+", re.UNICODE)
_HAS_ALNUM_RE = re.compile(r"[^\W_]", re.UNICODE)


class CorpusValidationError(ValueError):
    """Raised when ingested records violate profile invariants.

    ``errors`` is a list of (record_index, message) pairs covering every
    offending record, not just the first.
    """

    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = errors
        lines = "; ".join(f"record {i}: {msg}" for i, msg in errors)
        super().__init__(f"{len(errors)} invalid record(s): {lines}")


def profile_id_for_email(email: str) -> str:
    """Stable opaque id: first 12 hex chars of SHA-1 of the trimmed email."""
    return hashlib.sha1(email.strip().lower().encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class Profile:
    id: str
    name: str
    email: str
    profession: str
    experience: float
    interest: str
    collaboration_with: str
    domain: str
    skillset: str
    is_synthetic: bool = False

    def combined_text(self) -> str:
        """The text every representation is built from: domain + skillset."""
        return f"{self.domain} {self.skillset}"


@dataclass(frozen=True)
class TokenDocument:
    profile_id: str
    tokens: tuple[str, ...]
    raw_text: str


@dataclass(frozen=True)
class SkillPool:
    """Fixed value pools the synthetic generator draws from."""

    skills: Sequence[str]
    domains: Sequence[str]
    professions: Sequence[str]
    interests: Sequence[str]
    collaboration_kinds: Sequence[str]

    def __post_init__(self):
        for name in ("skills", "domains", "professions", "interests",
                     "collaboration_kinds"):
            values = getattr(self, name)
            if not values:
                raise ValueError(f"skill pool list '{name}' must be non-empty")
            if len(set(values)) != len(values):
                raise ValueError(f"skill pool list '{name}' has duplicates")


DEFAULT_SKILL_POOL = SkillPool(
    skills=(
        "Python", "C", "C++", "C#", "Java", "JavaScript", "TypeScript",
        "HTML", "CSS", "SQL", "R", "MATLAB", "Go", "Rust", "Kotlin",
        "Swift", "React", "Angular", "Node.js", "Django", "Flask",
        "TensorFlow", "PyTorch", "Keras", "scikit-learn", "Pandas",
        "NumPy", "OpenCV", "Spark", "Hadoop", "AWS", "Azure", "GCP",
        "Docker", "Kubernetes", "Git", "Linux", "Arduino", "Raspberry Pi",
        "ROS", "Unity", "Unreal Engine", "Figma", "Canva", "Adobe XD",
        "Blender", "LaTeX", "Tableau", "Power BI", "MongoDB",
        "PostgreSQL", "Redis", "GraphQL", "Solidity", "Verilog",
    ),
    domains=(
        "Machine Learning", "Deep Learning", "Computer Vision",
        "Natural Language Processing", "Data Mining", "Data Science",
        "Cybersecurity", "Cryptography", "Web Development",
        "Mobile Development", "Game Design", "Robotics",
        "Embedded Systems", "Internet of Things", "Cloud Computing",
        "Distributed Systems", "Blockchain", "Bioinformatics",
        "Computational Biology", "Quantum Computing",
        "Human-Computer Interaction", "Augmented Reality",
        "Signal Processing", "Control Systems", "Renewable Energy",
        "Structural Engineering", "Fluid Dynamics", "Nanotechnology",
        "Econometrics", "Operations Research", "Digital Marketing",
        "UI UX Design",
    ),
    professions=("student", "faculty", "researcher", "industry professional"),
    interests=(
        "research projects", "hackathons", "publications", "startups",
        "course projects", "open source", "competitions", "thesis work",
    ),
    collaboration_kinds=("student", "faculty", "researcher", "anyone"),
)

_FIRST_NAMES = (
    "Aarav", "Ananya", "Carlos", "Chen", "Diego", "Elena", "Fatima",
    "Gabriel", "Hana", "Ishaan", "Julia", "Kavya", "Liam", "Mei",
    "Nadia", "Omar", "Priya", "Quentin", "Rohan", "Sofia", "Tariq",
    "Uma", "Viktor", "Wei", "Ximena", "Yuki", "Zara", "Noah", "Amara",
    "Felix",
)
_LAST_NAMES = (
    "Abbas", "Bauer", "Chandra", "Dimitrov", "Eze", "Fernandez",
    "Gonzalez", "Huang", "Iyer", "Johansson", "Kaur", "Lindqvist",
    "Moreau", "Nakamura", "Okafor", "Petrov", "Quinn", "Rahman",
    "Silva", "Tanaka", "Ueda", "Varga", "Watanabe", "Xu", "Yilmaz",
    "Zhang", "Novak", "Mehta", "Costa", "Haddad",
)


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """One word per line, UTF-8; defaults to the bundled frozen list."""
    if path is None:
        text = (
            resources.files("collabrec.data")
            .joinpath("stopwords_en.txt")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


def _validate_record(index: int, record: Mapping) -> tuple[Profile | None, list[tuple[int, str]]]:
    errors: list[tuple[int, str]] = []
    missing = [f for f in REQUIRED_FIELDS if f not in record or record[f] is None]
    if missing:
        return None, [(index, f"missing field(s): {', '.join(missing)}")]

    email = str(record["email"]).strip()
    if not email:
        errors.append((index, "email is empty"))

    try:
        experience = float(record["experience"])
    except (TypeError, ValueError):
        errors.append((index, f"experience {record['experience']!r} is not a number"))
        experience = 0.0
    else:
        if experience < 0:
            errors.append((index, f"experience {experience} is negative"))

    domain = str(record["domain"]).strip()
    skillset = str(record["skillset"]).strip()
    if not domain:
        errors.append((index, "domain is empty"))
    if not skillset:
        errors.append((index, "skillset is empty"))

    if errors:
        return None, errors

    raw_flag = record.get("is_synthetic", False)
    is_synthetic = str(raw_flag).strip().lower() in ("1", "true", "yes")
    profile = Profile(
        id=profile_id_for_email(email),
        name=str(record["name"]).strip(),
        email=email,
        profession=str(record["profession"]).strip(),
        experience=experience,
        interest=str(record["interest"]).strip(),
        collaboration_with=str(record["collaboration_with"]).strip(),
        domain=domain,
        skillset=skillset,
        is_synthetic=is_synthetic,
    )
    return profile, []


def load_profiles(records: Iterable[Mapping]) -> list[Profile]:
    """Validate a stream of field mappings into Profiles.

    Every invariant violation is collected with its record index (0-based
    in stream order) and reported in one CorpusValidationError; a clean
    stream returns the full profile list.
    """
    profiles: list[Profile] = []
    errors: list[tuple[int, str]] = []
    seen_emails: dict[str, int] = {}
    for index, record in enumerate(records):
        profile, record_errors = _validate_record(index, record)
        if record_errors:
            errors.extend(record_errors)
            continue
        assert profile is not None
        key = profile.email.lower()
        if key in seen_emails:
            errors.append(
                (index, f"duplicate email {profile.email!r} (first at record {seen_emails[key]})")
            )
            continue
        seen_emails[key] = index
        profiles.append(profile)
    if errors:
        raise CorpusValidationError(errors)
    return profiles


def read_records(path: str | Path) -> list[dict]:
    """Read raw records from a UTF-8 CSV or JSON-lines file by extension."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with path.open(newline="", encoding="utf-8") as fh:
            return list(csv.DictReader(fh))
    with path.open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def load_profiles_file(path: str | Path) -> list[Profile]:
    return load_profiles(read_records(path))


def generate_synthetic(pool: SkillPool, count: int, seed: int) -> list[Profile]:
    """Draw ``count`` synthetic profiles from the pool, deterministically.

    Field values are sampled uniformly with SplitMix64 (see rng module);
    skillsets are comma-joined samples of 3-8 distinct pool skills and
    experience is an integer 0-20.  Emails embed the running index so
    they are unique by construction.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    rng = SplitMix64(seed)
    profiles = []
    for i in range(count):
        first = rng.choice(_FIRST_NAMES)
        last = rng.choice(_LAST_NAMES)
        email = f"{first.lower()}.{last.lower()}.{i:04d}@synth.example.edu"
        n_skills = rng.randint(3, min(8, len(pool.skills)))
        skills = rng.sample(pool.skills, n_skills)
        profiles.append(
            Profile(
                id=profile_id_for_email(email),
                name=f"{first} {last}",
                email=email,
                profession=rng.choice(pool.professions),
                experience=float(rng.randint(0, 20)),
                interest=rng.choice(pool.interests),
                collaboration_with=rng.choice(pool.collaboration_kinds),
                domain=rng.choice(pool.domains),
                skillset=", ".join(skills),
                is_synthetic=True,
            )
        )
    return profiles


def tokenize(text: str) -> list[str]:
    """Lower-case and split on whitespace/commas/punctuation except + and #."""
    tokens = _TOKEN_RE.findall(text.lower())
    return [t for t in tokens if _HAS_ALNUM_RE.search(t)]


def preprocess(profile: Profile, stopwords: frozenset[str] | set[str]) -> TokenDocument:
    """Combine domain + skillset and normalize into a stop-word-free token list."""
    raw_text = profile.combined_text()
    tokens = tuple(t for t in tokenize(raw_text) if t not in stopwords)
    return TokenDocument(profile_id=profile.id, tokens=tokens, raw_text=raw_text)


def stem_tokens(doc: TokenDocument) -> TokenDocument:
    """Porter-stem purely alphabetic tokens; mixed tokens pass through.

    The stemming algorithm is defined over alphabetic words, so tokens
    like "c++" or "3d" are left untouched.
    """
    stemmed = tuple(
        _porter.stem(t) if t.isascii() and t.isalpha() else t for t in doc.tokens
    )
    return replace(doc, tokens=stemmed)


def write_profiles_csv(profiles: Sequence[Profile], path: str | Path) -> None:
    """Write profiles with the eight survey columns plus is_synthetic."""
    fieldnames = list(REQUIRED_FIELDS) + ["is_synthetic"]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for p in profiles:
            writer.writerow(
                {
                    "name": p.name,
                    "email": p.email,
                    "profession": p.profession,
                    "experience": int(p.experience) if p.experience == int(p.experience) else p.experience,
                    "interest": p.interest,
                    "collaboration_with": p.collaboration_with,
                    "domain": p.domain,
                    "skillset": p.skillset,
                    "is_synthetic": "true" if p.is_synthetic else "false",
                }
            )


def write_profiles_jsonl(profiles: Sequence[Profile], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for p in profiles:
            record = {
                "id": p.id,
                "name": p.name,
                "email": p.email,
                "profession": p.profession,
                "experience": p.experience,
                "interest": p.interest,
                "collaboration_with": p.collaboration_with,
                "domain": p.domain,
                "skillset": p.skillset,
                "is_synthetic": p.is_synthetic,
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")
