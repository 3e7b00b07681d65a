"""Password hashing and bearer-token session management.

Passwords are stretched with PBKDF2-HMAC-SHA256 and a per-account random
salt; the full parameter set travels with the digest so iteration counts
can be raised later without invalidating old records.  Tokens are opaque
random strings held only in memory: restarting the service logs
everyone out, which is acceptable at this scale and keeps tokens out of
the persisted store entirely.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from typing import Callable

DEFAULT_KDF_ITERATIONS = 100_000
_ALGORITHM = "pbkdf2_sha256"
TOKEN_TTL_MS = 24 * 60 * 60 * 1000


def hash_password(
    password: str,
    iterations: int = DEFAULT_KDF_ITERATIONS,
    salt: bytes | None = None,
) -> dict:
    """Digest record: {algorithm, iterations, salt, digest}, hex-encoded."""
    if iterations < 1:
        raise ValueError("iterations must be positive")
    if salt is None:
        salt = secrets.token_bytes(16)
    digest = hashlib.pbkdf2_hmac("sha256", password.encode("utf-8"), salt, iterations)
    return {
        "algorithm": _ALGORITHM,
        "iterations": iterations,
        "salt": salt.hex(),
        "digest": digest.hex(),
    }


def verify_password(password: str, record: dict) -> bool:
    if record.get("algorithm") != _ALGORITHM:
        raise ValueError(f"unsupported KDF record {record.get('algorithm')!r}")
    expected = hashlib.pbkdf2_hmac(
        "sha256",
        password.encode("utf-8"),
        bytes.fromhex(record["salt"]),
        int(record["iterations"]),
    )
    return hmac.compare_digest(expected.hex(), record["digest"])


class TokenManager:
    """In-memory issuance and expiry of opaque bearer tokens."""

    def __init__(self, clock: Callable[[], int], ttl_ms: int = TOKEN_TTL_MS):
        if ttl_ms < 1:
            raise ValueError("ttl must be positive")
        self._clock = clock
        self._ttl_ms = ttl_ms
        self._sessions: dict[str, tuple[str, int]] = {}

    def issue(self, profile_id: str) -> str:
        token = secrets.token_urlsafe(32)
        self._sessions[token] = (profile_id, self._clock() + self._ttl_ms)
        return token

    def resolve(self, token: str) -> str | None:
        entry = self._sessions.get(token)
        if entry is None:
            return None
        profile_id, expires_at = entry
        if self._clock() >= expires_at:
            del self._sessions[token]
            return None
        return profile_id

    def revoke(self, token: str) -> None:
        self._sessions.pop(token, None)
