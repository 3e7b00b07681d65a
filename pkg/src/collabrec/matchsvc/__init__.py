"""Matching service: accounts, swipes, mutual matches, chat, ratings."""

from .api import create_app
from .auth import DEFAULT_KDF_ITERATIONS, TokenManager, hash_password, verify_password
from .service import (
    AuthFailure,
    DuplicateEmail,
    Forbidden,
    MatchService,
    UnknownResource,
    ValidationFailure,
    match_id_for,
)
from .store import DocumentStore, FileDocumentStore, MemoryDocumentStore, dump_store

__all__ = [
    "AuthFailure",
    "DEFAULT_KDF_ITERATIONS",
    "DocumentStore",
    "DuplicateEmail",
    "FileDocumentStore",
    "Forbidden",
    "MatchService",
    "MemoryDocumentStore",
    "TokenManager",
    "UnknownResource",
    "ValidationFailure",
    "create_app",
    "dump_store",
    "hash_password",
    "match_id_for",
    "verify_password",
]
