"""Account, swipe, match, chat, and rating state over a document store.

All mutations funnel through per-record locks, timestamps are assigned
by a strictly monotonic server clock, and every durable write goes
through the store immediately, so the persisted state is a pure function
of the operation sequence (given the injected clock and entropy source;
both default to real time and CSPRNG randomness in production).

Swipe semantics: a user may change a pending or opposite swipe at any
time, but once a pair is matched the record is frozen; later swipes
become no-ops.  This keeps "matched means both swiped right" true for
the life of the record while letting matches survive a change of heart,
which mirrors how established collaborations outlive the gesture that
started them.
"""

from __future__ import annotations

import random
import threading
import time
from typing import Callable

from ..corpus import CorpusValidationError, Profile, load_profiles, profile_id_for_email
from ..engine import CorpusIndex, EngineConfig
from ..recommender import (
    NoCandidatesError,
    RecommendationFilters,
    RecommendationQuery,
    recommend,
)
from ..vectorize import EmbeddingProvider
from .auth import DEFAULT_KDF_ITERATIONS, TOKEN_TTL_MS, TokenManager, hash_password, verify_password
from .store import DocumentStore

COLLECTIONS = ("profiles", "accounts", "matches", "ratings")
MIN_PASSWORD_LENGTH = 8
DIRECTIONS = ("right", "left")


class ValidationFailure(ValueError):
    """Maps to HTTP 400."""


class AuthFailure(Exception):
    """Maps to HTTP 401."""


class Forbidden(Exception):
    """Maps to HTTP 403."""


class UnknownResource(LookupError):
    """Maps to HTTP 404."""


class DuplicateEmail(Exception):
    """Maps to HTTP 409."""


def match_id_for(a: str, b: str) -> str:
    lo, hi = sorted((a, b))
    return f"{lo}:{hi}"


class MatchService:
    def __init__(
        self,
        store: DocumentStore,
        engine_config: EngineConfig | None = None,
        provider: EmbeddingProvider | None = None,
        clock: Callable[[], int] | None = None,
        entropy: random.Random | None = None,
        kdf_iterations: int = DEFAULT_KDF_ITERATIONS,
        token_ttl_ms: int = TOKEN_TTL_MS,
    ):
        self.store = store
        self.engine_config = engine_config or EngineConfig()
        self.provider = provider
        self._clock = clock or (lambda: time.time_ns() // 1_000_000)
        self._entropy = entropy
        self._kdf_iterations = kdf_iterations
        self.tokens = TokenManager(self._now, ttl_ms=token_ttl_ms)
        self._last_ts = -1
        self._ts_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()
        self._index: CorpusIndex | None = None
        self._index_dirty = True
        self._index_lock = threading.Lock()

    # -- clock and lock plumbing ------------------------------------------

    def _now(self) -> int:
        """Strictly monotonic millisecond timestamp."""
        with self._ts_lock:
            now = self._clock()
            self._last_ts = now if now > self._last_ts else self._last_ts + 1
            return self._last_ts

    def _lock_for(self, name: str) -> threading.Lock:
        with self._locks_guard:
            lock = self._locks.get(name)
            if lock is None:
                lock = self._locks[name] = threading.Lock()
            return lock

    def _salt(self) -> bytes:
        if self._entropy is None:
            return None  # hash_password falls back to secrets
        return self._entropy.randbytes(16)

    # -- profiles and accounts --------------------------------------------

    def register(self, fields: dict, password: str) -> str:
        """Create profile + account; returns the new profile id."""
        try:
            [profile] = load_profiles([fields])
        except CorpusValidationError as exc:
            raise ValidationFailure("; ".join(msg for _, msg in exc.errors)) from exc
        if len(password) < MIN_PASSWORD_LENGTH:
            raise ValidationFailure(
                f"password must be at least {MIN_PASSWORD_LENGTH} characters"
            )
        with self._lock_for(f"account/{profile.id}"):
            if self.store.get("accounts", profile.id) is not None:
                raise DuplicateEmail(f"email {profile.email!r} is already registered")
            created_at = self._now()
            self.store.put("profiles", profile.id, _profile_doc(profile))
            self.store.put(
                "accounts",
                profile.id,
                {
                    "profile_id": profile.id,
                    "password": hash_password(
                        password, iterations=self._kdf_iterations, salt=self._salt()
                    ),
                    "created_at": created_at,
                },
            )
        self._mark_profiles_changed()
        return profile.id

    def import_profiles(self, profiles: list[Profile]) -> int:
        """Seed account-less candidate profiles (demo corpus, migrations)."""
        added = 0
        for profile in profiles:
            if self.store.get("profiles", profile.id) is None:
                self.store.put("profiles", profile.id, _profile_doc(profile))
                added += 1
        if added:
            self._mark_profiles_changed()
        return added

    def login(self, email: str, password: str) -> str:
        profile_id = profile_id_for_email(email)
        account = self.store.get("accounts", profile_id)
        if account is None or not verify_password(password, account["password"]):
            raise AuthFailure("unknown email or wrong password")
        return self.tokens.issue(profile_id)

    def profile(self, profile_id: str) -> Profile:
        doc = self.store.get("profiles", profile_id)
        if doc is None:
            raise UnknownResource(f"unknown profile {profile_id!r}")
        [profile] = load_profiles([doc])
        return profile

    # -- swipe / match state machine --------------------------------------

    def swipe(self, actor: str, target: str, direction: str) -> dict:
        if direction not in DIRECTIONS:
            raise ValidationFailure(f"direction must be one of {DIRECTIONS}")
        if actor == target:
            raise Forbidden("cannot swipe on yourself")
        for pid in (actor, target):
            if self.store.get("profiles", pid) is None:
                raise UnknownResource(f"unknown profile {pid!r}")
        key = match_id_for(actor, target)
        with self._lock_for(f"match/{key}"):
            record = self.store.get("matches", key)
            if record is None:
                lo, hi = sorted((actor, target))
                record = {
                    "match_id": key,
                    "user_a": lo,
                    "user_b": hi,
                    "status_a": "pending",
                    "status_b": "pending",
                    "matched": False,
                    "matched_at": None,
                    "chat": [],
                }
            if record["matched"]:
                return record  # frozen: matches persist, see module docstring
            record["status_a" if actor == record["user_a"] else "status_b"] = direction
            if record["status_a"] == "right" and record["status_b"] == "right":
                record["matched"] = True
                record["matched_at"] = self._now()
            self.store.put("matches", key, record)
            return record

    def match_record(self, match_id: str, requester: str) -> dict:
        record = self.store.get("matches", match_id)
        if record is None:
            raise UnknownResource(f"unknown match {match_id!r}")
        if requester not in (record["user_a"], record["user_b"]):
            raise Forbidden("not a participant in this match")
        return record

    def matches_for(self, viewer: str) -> list[dict]:
        out = []
        for _, record in self.store.scan("matches"):
            if not record["matched"]:
                continue
            if viewer not in (record["user_a"], record["user_b"]):
                continue
            other = record["user_b"] if viewer == record["user_a"] else record["user_a"]
            out.append(
                {
                    "match_id": record["match_id"],
                    "other_user": other,
                    "other_name": self.profile(other).name,
                    "matched_at": record["matched_at"],
                }
            )
        out.sort(key=lambda m: (m["matched_at"], m["match_id"]))
        return out

    # -- chat ---------------------------------------------------------------

    def send_message(self, match_id: str, sender: str, text: str) -> dict:
        if not text or not text.strip():
            raise ValidationFailure("message text must not be empty")
        with self._lock_for(f"match/{match_id}"):
            record = self.match_record(match_id, sender)
            if not record["matched"]:
                raise Forbidden("chat requires a mutual match")
            message = {
                "seq": len(record["chat"]) + 1,
                "sender": sender,
                "text": text,
                "ts": self._now(),
            }
            record["chat"].append(message)
            self.store.put("matches", match_id, record)
            return message

    def messages(self, match_id: str, requester: str, since: int | None = None) -> list[dict]:
        record = self.match_record(match_id, requester)
        if not record["matched"]:
            raise Forbidden("chat requires a mutual match")
        chat = record["chat"]
        if since is not None:
            chat = [m for m in chat if m["ts"] > since]
        return chat

    # -- ratings ------------------------------------------------------------

    def rate(self, rater: str, target: str, score: int) -> float:
        if not isinstance(score, int) or not 1 <= score <= 5:
            raise ValidationFailure("score must be an integer in 1..5")
        if rater == target:
            raise Forbidden("cannot rate yourself")
        if self.store.get("profiles", target) is None:
            raise UnknownResource(f"unknown profile {target!r}")
        record = self.store.get("matches", match_id_for(rater, target))
        if record is None or not record["matched"]:
            raise Forbidden("only matched collaborators can rate each other")
        with self._lock_for(f"rating/{target}"):
            ledger = self.store.get("ratings", target) or {
                "profile_id": target,
                "ratings": {},
                "average": None,
            }
            ledger["ratings"][rater] = score
            scores = list(ledger["ratings"].values())
            ledger["average"] = sum(scores) / len(scores)
            self.store.put("ratings", target, ledger)
            return ledger["average"]

    def rating_average(self, profile_id: str) -> float | None:
        ledger = self.store.get("ratings", profile_id)
        return None if ledger is None else ledger["average"]

    # -- feed ----------------------------------------------------------------

    def _mark_profiles_changed(self) -> None:
        with self._index_lock:
            self._index_dirty = True

    def _corpus_index(self) -> CorpusIndex | None:
        with self._index_lock:
            if self._index_dirty:
                docs = [doc for _, doc in self.store.scan("profiles")]
                if len(docs) < 2:
                    self._index = None
                else:
                    profiles = load_profiles(docs)
                    self._index = CorpusIndex(
                        profiles, self.engine_config, provider=self.provider
                    )
                self._index_dirty = False
            return self._index

    def swiped_ids(self, viewer: str) -> frozenset[str]:
        seen = set()
        for _, record in self.store.scan("matches"):
            if viewer == record["user_a"] and record["status_a"] != "pending":
                seen.add(record["user_b"])
            elif viewer == record["user_b"] and record["status_b"] != "pending":
                seen.add(record["user_a"])
        return frozenset(seen)

    def feed(self, viewer: str, k: int = 5) -> list[dict]:
        """Top-k hybrid recommendations excluding self and already-swiped."""
        if self.store.get("profiles", viewer) is None:
            raise UnknownResource(f"unknown profile {viewer!r}")
        index = self._corpus_index()
        if index is None:
            return []
        query = RecommendationQuery(
            target_id=viewer, technique="hybrid", k=k, filters=RecommendationFilters()
        )
        try:
            results = recommend(index, query, exclude_ids=self.swiped_ids(viewer))
        except NoCandidatesError:
            return []
        cards = []
        for r in results:
            candidate = index.by_id[r.candidate_id]
            cards.append(
                {
                    "candidate": candidate.id,
                    "name": candidate.name,
                    "summary": candidate.combined_text(),
                    "similarity": r.similarity,
                    "cluster": r.cluster,
                    "rating": self.rating_average(candidate.id),
                }
            )
        return cards

    def authenticate(self, token: str) -> str:
        profile_id = self.tokens.resolve(token)
        if profile_id is None:
            raise AuthFailure("invalid or expired token")
        return profile_id


def _profile_doc(profile: Profile) -> dict:
    return {
        "name": profile.name,
        "email": profile.email,
        "profession": profile.profession,
        "experience": profile.experience,
        "interest": profile.interest,
        "collaboration_with": profile.collaboration_with,
        "domain": profile.domain,
        "skillset": profile.skillset,
        "is_synthetic": profile.is_synthetic,
    }
