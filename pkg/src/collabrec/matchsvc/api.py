"""HTTP surface of the matching service.

Thin request/response mapping only: every rule lives in MatchService,
and service exceptions translate to one status code each (400
validation, 401 auth, 403 forbidden, 404 unknown, 409 duplicate).
Framework-level request validation is folded into 400 as well so
clients see a single validation status.
"""

from __future__ import annotations

import logging
import time
from pathlib import Path

from fastapi import Depends, FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.security import HTTPAuthorizationCredentials, HTTPBearer
from pydantic import BaseModel, Field

from .service import (
    AuthFailure,
    DuplicateEmail,
    Forbidden,
    MatchService,
    UnknownResource,
    ValidationFailure,
)

logger = logging.getLogger(__name__)

_bearer = HTTPBearer(auto_error=False)


class ProfileCreate(BaseModel):
    name: str
    email: str
    profession: str
    experience: float
    interest: str
    collaboration_with: str
    domain: str
    skillset: str
    password: str

    def profile_fields(self) -> dict:
        return self.model_dump(exclude={"password"})


class LoginRequest(BaseModel):
    email: str
    password: str


class SwipeRequest(BaseModel):
    target: str
    direction: str


class MessageCreate(BaseModel):
    text: str


class RatingCreate(BaseModel):
    target: str
    score: int = Field(ge=1, le=5)


def create_app(service: MatchService, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="collabrec matching service", docs_url=None, redoc_url=None)

    def current_user(
        credentials: HTTPAuthorizationCredentials | None = Depends(_bearer),
    ) -> str:
        if credentials is None:
            raise AuthFailure("missing bearer token")
        return service.authenticate(credentials.credentials)

    @app.exception_handler(ValidationFailure)
    async def _validation(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _request_validation(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(AuthFailure)
    async def _auth(request, exc):
        return JSONResponse(status_code=401, content={"detail": str(exc)})

    @app.exception_handler(Forbidden)
    async def _forbidden(request, exc):
        return JSONResponse(status_code=403, content={"detail": str(exc)})

    @app.exception_handler(UnknownResource)
    async def _unknown(request, exc):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(DuplicateEmail)
    async def _duplicate(request, exc):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.middleware("http")
    async def _log_requests(request: Request, call_next):
        started = time.perf_counter()
        response = await call_next(request)
        logger.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            (time.perf_counter() - started) * 1000,
        )
        return response

    @app.post("/profiles", status_code=201)
    def create_profile(body: ProfileCreate):
        profile_id = service.register(body.profile_fields(), body.password)
        return {"id": profile_id}

    @app.post("/auth/login")
    def login(body: LoginRequest):
        return {"token": service.login(body.email, body.password)}

    @app.get("/feed")
    def feed(user: str = Depends(current_user), k: int = Query(default=5, ge=1)):
        return service.feed(user, k=k)

    @app.post("/swipes")
    def swipe(body: SwipeRequest, user: str = Depends(current_user)):
        record = service.swipe(user, body.target, body.direction)
        return {"matched": record["matched"], "match_id": record["match_id"]}

    @app.get("/matches")
    def matches(user: str = Depends(current_user)):
        return service.matches_for(user)

    @app.post("/matches/{match_id}/messages", status_code=201)
    def post_message(match_id: str, body: MessageCreate, user: str = Depends(current_user)):
        return service.send_message(match_id, user, body.text)

    @app.get("/matches/{match_id}/messages")
    def get_messages(
        match_id: str,
        user: str = Depends(current_user),
        since: int | None = Query(default=None),
    ):
        return service.messages(match_id, user, since=since)

    @app.post("/ratings")
    def rate(body: RatingCreate, user: str = Depends(current_user)):
        return {"average": service.rate(user, body.target, body.score)}

    @app.get("/me")
    def me(user: str = Depends(current_user)):
        profile = service.profile(user)
        return {
            "id": profile.id,
            "name": profile.name,
            "email": profile.email,
            "profession": profile.profession,
            "domain": profile.domain,
            "skillset": profile.skillset,
            "interest": profile.interest,
            "collaboration_with": profile.collaboration_with,
            "rating": service.rating_average(user),
        }

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
