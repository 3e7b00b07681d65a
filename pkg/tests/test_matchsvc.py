import itertools
import json
import random

import pytest
from fastapi.testclient import TestClient

from collabrec.corpus import DEFAULT_SKILL_POOL, generate_synthetic, profile_id_for_email
from collabrec.matchsvc import (
    AuthFailure,
    DEFAULT_KDF_ITERATIONS,
    DuplicateEmail,
    FileDocumentStore,
    Forbidden,
    MatchService,
    MemoryDocumentStore,
    TokenManager,
    UnknownResource,
    ValidationFailure,
    create_app,
    dump_store,
    hash_password,
    match_id_for,
    verify_password,
)
from collabrec.matchsvc.service import COLLECTIONS

TEST_KDF_ITERATIONS = 1_000


def fields(email, domain="Machine Learning", skillset="Python, NumPy", **overrides):
    base = {
        "name": email.split("@")[0].title(),
        "email": email,
        "profession": "student",
        "experience": 3,
        "interest": "research projects",
        "collaboration_with": "faculty",
        "domain": domain,
        "skillset": skillset,
    }
    base.update(overrides)
    return base


def make_service(store=None, seed=7):
    return MatchService(
        store if store is not None else MemoryDocumentStore(),
        clock=itertools.count(1_000_000).__next__,
        entropy=random.Random(seed),
        kdf_iterations=TEST_KDF_ITERATIONS,
    )


@pytest.fixture()
def service():
    return make_service()


@pytest.fixture()
def trio(service):
    a = service.register(fields("ada@x.edu"), "correct horse")
    b = service.register(fields("bob@x.edu", skillset="Python, SQL"), "battery staple")
    c = service.register(fields("cam@x.edu", domain="History", skillset="Latin"), "quite secret")
    return service, a, b, c


class TestStores:
    @pytest.mark.parametrize("factory", [MemoryDocumentStore, None])
    def test_roundtrip_and_sorted_scan(self, factory, tmp_path):
        store = factory() if factory else FileDocumentStore(tmp_path)
        store.put("things", "b", {"v": 2})
        store.put("things", "a", {"v": 1})
        assert store.get("things", "a") == {"v": 1}
        assert store.get("things", "missing") is None
        assert [k for k, _ in store.scan("things")] == ["a", "b"]
        assert store.count("things") == 2

    def test_put_normalizes_to_json_types(self):
        store = MemoryDocumentStore()
        store.put("t", "k", {"tup": (1, 2)})
        assert store.get("t", "k") == {"tup": [1, 2]}

    def test_file_store_survives_reopen(self, tmp_path):
        FileDocumentStore(tmp_path).put("matches", "a:b", {"matched": True})
        reopened = FileDocumentStore(tmp_path)
        assert reopened.get("matches", "a:b") == {"matched": True}

    def test_file_store_leaves_no_temp_files(self, tmp_path):
        store = FileDocumentStore(tmp_path)
        for i in range(20):
            store.put("c", f"k{i}", {"i": i})
        leftovers = [p for p in (tmp_path / "c").iterdir() if p.name.startswith(".tmp-")]
        assert leftovers == []

    def test_illegal_keys_rejected(self, tmp_path):
        store = FileDocumentStore(tmp_path)
        for bad in ("../escape", "a/b", "", "sp ace"):
            with pytest.raises(ValueError):
                store.put("c", bad, {})

    def test_get_returns_copies(self):
        store = MemoryDocumentStore()
        store.put("c", "k", {"list": [1]})
        store.get("c", "k")["list"].append(2)
        assert store.get("c", "k") == {"list": [1]}


class TestPasswordHashing:
    def test_roundtrip(self):
        record = hash_password("open sesame", iterations=TEST_KDF_ITERATIONS)
        assert verify_password("open sesame", record)
        assert not verify_password("open sesam", record)

    def test_distinct_salts_for_same_password(self):
        a = hash_password("same", iterations=TEST_KDF_ITERATIONS)
        b = hash_password("same", iterations=TEST_KDF_ITERATIONS)
        assert a["salt"] != b["salt"]
        assert a["digest"] != b["digest"]

    def test_parameters_travel_with_digest(self):
        record = hash_password("x", iterations=TEST_KDF_ITERATIONS)
        assert record["algorithm"] == "pbkdf2_sha256"
        assert record["iterations"] == TEST_KDF_ITERATIONS
        assert set(record) == {"algorithm", "iterations", "salt", "digest"}

    def test_production_default_iteration_count(self):
        assert DEFAULT_KDF_ITERATIONS >= 100_000
        record = hash_password("x")
        assert record["iterations"] == DEFAULT_KDF_ITERATIONS

    def test_unsupported_record_rejected(self):
        with pytest.raises(ValueError, match="unsupported"):
            verify_password("x", {"algorithm": "md5", "digest": "", "salt": "", "iterations": 1})


class TestTokens:
    def test_issue_resolve_revoke(self):
        clock = itertools.count(0, 1000).__next__
        manager = TokenManager(clock, ttl_ms=10_000)
        token = manager.issue("p1")
        assert manager.resolve(token) == "p1"
        manager.revoke(token)
        assert manager.resolve(token) is None

    def test_expiry(self):
        times = iter([0, 5_000, 20_000])
        manager = TokenManager(lambda: next(times), ttl_ms=10_000)
        token = manager.issue("p1")
        assert manager.resolve(token) == "p1"
        assert manager.resolve(token) is None

    def test_unknown_token(self):
        manager = TokenManager(lambda: 0)
        assert manager.resolve("nope") is None


class TestAccounts:
    def test_register_then_login(self, service):
        profile_id = service.register(fields("ada@x.edu"), "correct horse")
        assert profile_id == profile_id_for_email("ada@x.edu")
        token = service.login("ada@x.edu", "correct horse")
        assert service.authenticate(token) == profile_id

    def test_wrong_password_rejected(self, service):
        service.register(fields("ada@x.edu"), "correct horse")
        with pytest.raises(AuthFailure):
            service.login("ada@x.edu", "wrong horse")

    def test_unknown_email_rejected(self, service):
        with pytest.raises(AuthFailure):
            service.login("ghost@x.edu", "whatever")

    def test_duplicate_email_rejected(self, service):
        service.register(fields("ada@x.edu"), "correct horse")
        with pytest.raises(DuplicateEmail):
            service.register(fields("ada@x.edu"), "other password")

    def test_weak_password_rejected(self, service):
        with pytest.raises(ValidationFailure, match="8 characters"):
            service.register(fields("ada@x.edu"), "short")

    def test_invalid_profile_rejected_with_field_detail(self, service):
        bad = fields("ada@x.edu")
        del bad["domain"]
        with pytest.raises(ValidationFailure, match="domain"):
            service.register(bad, "long enough password")

    def test_no_plaintext_password_in_store(self, service):
        service.register(fields("ada@x.edu"), "hunter2hunter2")
        blob = json.dumps(dump_store(service.store, COLLECTIONS))
        assert "hunter2hunter2" not in blob

    def test_expired_token_fails_authentication(self):
        service = MatchService(
            MemoryDocumentStore(),
            clock=itertools.count(0, 60_000).__next__,  # one minute per tick
            kdf_iterations=TEST_KDF_ITERATIONS,
            token_ttl_ms=120_000,
        )
        service.register(fields("ada@x.edu"), "correct horse")
        token = service.login("ada@x.edu", "correct horse")
        with pytest.raises(AuthFailure):
            for _ in range(5):
                service.authenticate(token)


class TestSwipes:
    def test_mutual_right_matches(self, trio):
        service, a, b, _ = trio
        first = service.swipe(a, b, "right")
        assert first["matched"] is False
        assert first["status_b"] == "pending"
        second = service.swipe(b, a, "right")
        assert second["matched"] is True
        assert second["matched_at"] is not None

    def test_right_left_does_not_match(self, trio):
        service, a, b, _ = trio
        service.swipe(a, b, "right")
        record = service.swipe(b, a, "left")
        assert record["matched"] is False

    def test_changed_mind_can_match_later(self, trio):
        service, a, b, _ = trio
        service.swipe(a, b, "right")
        service.swipe(b, a, "left")
        record = service.swipe(b, a, "right")
        assert record["matched"] is True

    def test_repeat_swipe_is_idempotent(self, trio):
        service, a, b, _ = trio
        first = service.swipe(a, b, "right")
        second = service.swipe(a, b, "right")
        assert first == second

    def test_match_is_frozen_after_forming(self, trio):
        service, a, b, _ = trio
        service.swipe(a, b, "right")
        service.swipe(b, a, "right")
        record = service.swipe(a, b, "left")
        assert record["matched"] is True
        assert record["status_a"] == "right" and record["status_b"] == "right"

    def test_symmetric_view(self, trio):
        service, a, b, _ = trio
        service.swipe(a, b, "right")
        service.swipe(b, a, "right")
        key = match_id_for(a, b)
        assert service.match_record(key, a) == service.match_record(key, b)

    def test_self_swipe_forbidden(self, trio):
        service, a, _, _ = trio
        with pytest.raises(Forbidden):
            service.swipe(a, a, "right")

    def test_unknown_target_not_found(self, trio):
        service, a, _, _ = trio
        with pytest.raises(UnknownResource):
            service.swipe(a, "deadbeef0000", "right")

    def test_bad_direction_rejected(self, trio):
        service, a, b, _ = trio
        with pytest.raises(ValidationFailure):
            service.swipe(a, b, "up")

    def test_matches_listing_shows_only_matched(self, trio):
        service, a, b, c = trio
        service.swipe(a, b, "right")
        service.swipe(b, a, "right")
        service.swipe(a, c, "right")  # c never answers
        listed = service.matches_for(a)
        assert [m["other_user"] for m in listed] == [b]
        assert listed[0]["match_id"] == match_id_for(a, b)
        assert listed[0]["other_name"] == "Bob"


class TestChat:
    def matched_pair(self, trio):
        service, a, b, c = trio
        service.swipe(a, b, "right")
        service.swipe(b, a, "right")
        return service, a, b, c, match_id_for(a, b)

    def test_messages_roundtrip_in_order(self, trio):
        service, a, b, _, key = self.matched_pair(trio)
        service.send_message(key, a, "hello")
        service.send_message(key, b, "hi there")
        texts = [(m["sender"], m["text"]) for m in service.messages(key, a)]
        assert texts == [(a, "hello"), (b, "hi there")]

    def test_since_filter_is_exclusive(self, trio):
        service, a, b, _, key = self.matched_pair(trio)
        first = service.send_message(key, a, "one")
        second = service.send_message(key, b, "two")
        newer = service.messages(key, a, since=first["ts"])
        assert [m["text"] for m in newer] == ["two"]
        assert service.messages(key, a, since=second["ts"]) == []

    def test_timestamps_strictly_increase(self, trio):
        service, a, b, _, key = self.matched_pair(trio)
        ts = [service.send_message(key, a, f"m{i}")["ts"] for i in range(5)]
        assert all(t1 < t2 for t1, t2 in zip(ts, ts[1:]))

    def test_unmatched_chat_forbidden(self, trio):
        service, a, b, c = trio
        service.swipe(a, c, "right")
        key = match_id_for(a, c)
        with pytest.raises(Forbidden):
            service.send_message(key, a, "too early")
        with pytest.raises(Forbidden):
            service.messages(key, a)

    def test_third_party_forbidden(self, trio):
        service, a, b, c, key = self.matched_pair(trio)
        with pytest.raises(Forbidden):
            service.send_message(key, c, "let me in")
        with pytest.raises(Forbidden):
            service.messages(key, c)

    def test_unknown_match_not_found(self, trio):
        service, a, _, _ = trio
        with pytest.raises(UnknownResource):
            service.messages("abc:def", a)

    def test_empty_message_rejected(self, trio):
        service, a, _, _, key = self.matched_pair(trio)
        with pytest.raises(ValidationFailure):
            service.send_message(key, a, "   ")


class TestRatings:
    def matched_all(self, trio):
        service, a, b, c = trio
        for x, y in [(a, b), (a, c), (b, c)]:
            service.swipe(x, y, "right")
            service.swipe(y, x, "right")
        return service, a, b, c

    def test_average_over_raters(self, trio):
        service, a, b, c = self.matched_all(trio)
        assert service.rate(a, c, 4) == pytest.approx(4.0)
        assert service.rate(b, c, 5) == pytest.approx(4.5)

    def test_latest_rating_wins(self, trio):
        service, a, b, _ = self.matched_all(trio)
        service.rate(a, b, 3)
        assert service.rate(a, b, 5) == pytest.approx(5.0)
        assert service.rating_average(b) == pytest.approx(5.0)

    def test_rating_requires_match(self, trio):
        service, a, b, _ = trio
        with pytest.raises(Forbidden, match="matched"):
            service.rate(a, b, 5)

    def test_self_rating_forbidden(self, trio):
        service, a, _, _ = self.matched_all(trio)
        with pytest.raises(Forbidden):
            service.rate(a, a, 5)

    def test_score_range_enforced(self, trio):
        service, a, b, _ = self.matched_all(trio)
        for bad in (0, 6):
            with pytest.raises(ValidationFailure):
                service.rate(a, b, bad)

    def test_unrated_profile_has_no_average(self, trio):
        service, a, _, _ = trio
        assert service.rating_average(a) is None


class TestFeed:
    def test_feed_excludes_self_and_ranks_by_similarity(self, trio):
        service, a, b, c = trio
        feed = service.feed(a, k=5)
        assert [card["candidate"] for card in feed] == [b, c]
        assert feed[0]["similarity"] >= feed[1]["similarity"]

    def test_feed_excludes_already_swiped_either_direction(self, trio):
        service, a, b, c = trio
        service.swipe(a, b, "left")
        assert [card["candidate"] for card in service.feed(a)] == [c]
        service.swipe(a, c, "right")
        assert service.feed(a) == []

    def test_feed_carries_current_rating(self, trio):
        service, a, b, c = trio
        service.swipe(b, c, "right")
        service.swipe(c, b, "right")
        service.rate(c, b, 4)
        (b_card, _) = service.feed(a, k=2)
        assert b_card["candidate"] == b
        assert b_card["rating"] == pytest.approx(4.0)

    def test_feed_summary_and_name_present(self, trio):
        service, a, b, _ = trio
        card = service.feed(a, k=1)[0]
        assert card["name"] == "Bob"
        assert "Python" in card["summary"]

    def test_feed_with_single_profile_is_empty(self, service):
        only = service.register(fields("solo@x.edu"), "long enough password")
        assert service.feed(only) == []

    def test_feed_for_unknown_viewer_rejected(self, service):
        with pytest.raises(UnknownResource):
            service.feed("deadbeef0000")

    def test_pending_incoming_swipe_does_not_hide_candidate(self, trio):
        service, a, b, _ = trio
        service.swipe(b, a, "right")  # b acted; a did not
        assert b in [card["candidate"] for card in service.feed(a)]


class TestReplayDeterminism:
    def script(self, service):
        ids = {}
        ids["a"] = service.register(fields("ada@x.edu"), "correct horse")
        ids["b"] = service.register(fields("bob@x.edu", skillset="Python, SQL"), "battery staple")
        ids["c"] = service.register(fields("cam@x.edu", domain="History", skillset="Latin"), "quite secret")
        service.swipe(ids["a"], ids["b"], "right")
        service.swipe(ids["b"], ids["a"], "right")
        key = match_id_for(ids["a"], ids["b"])
        service.send_message(key, ids["a"], "hello")
        service.send_message(key, ids["b"], "hi")
        service.rate(ids["a"], ids["b"], 5)
        service.swipe(ids["c"], ids["a"], "left")

    def test_identical_runs_produce_identical_stores(self):
        first, second = make_service(seed=42), make_service(seed=42)
        self.script(first)
        self.script(second)
        assert dump_store(first.store, COLLECTIONS) == dump_store(second.store, COLLECTIONS)

    def test_different_entropy_changes_only_account_records(self):
        first, second = make_service(seed=1), make_service(seed=2)
        self.script(first)
        self.script(second)
        a = dump_store(first.store, COLLECTIONS)
        b = dump_store(second.store, COLLECTIONS)
        assert a["accounts"] != b["accounts"]  # distinct salts
        assert a["profiles"] == b["profiles"]
        assert a["matches"] == b["matches"]
        assert a["ratings"] == b["ratings"]


class TestDurability:
    def test_matches_survive_service_restart(self, tmp_path):
        store = FileDocumentStore(tmp_path)
        service = make_service(store)
        a = service.register(fields("ada@x.edu"), "correct horse")
        b = service.register(fields("bob@x.edu"), "battery staple")
        service.swipe(a, b, "right")
        service.swipe(b, a, "right")
        key = match_id_for(a, b)
        service.send_message(key, a, "before restart")

        revived = make_service(FileDocumentStore(tmp_path))
        assert [m["other_user"] for m in revived.matches_for(a)] == [b]
        assert [m["text"] for m in revived.messages(key, b)] == ["before restart"]
        token = revived.login("ada@x.edu", "correct horse")
        assert revived.authenticate(token) == a


@pytest.fixture()
def client():
    service = make_service()
    return TestClient(create_app(service)), service


def register_http(client, email, password="long enough password", **overrides):
    response = client.post("/profiles", json={**fields(email, **overrides), "password": password})
    assert response.status_code == 201, response.text
    return response.json()["id"]


def login_http(client, email, password="long enough password"):
    response = client.post("/auth/login", json={"email": email, "password": password})
    assert response.status_code == 200, response.text
    return {"Authorization": f"Bearer {response.json()['token']}"}


class TestHttpApi:
    def test_register_login_feed_flow(self, client):
        http, _ = client
        register_http(http, "ada@x.edu")
        register_http(http, "bob@x.edu", skillset="Python, SQL")
        auth = login_http(http, "ada@x.edu")
        response = http.get("/feed", params={"k": 1}, headers=auth)
        assert response.status_code == 200
        [card] = response.json()
        assert set(card) >= {"candidate", "name", "similarity", "rating", "summary"}

    def test_duplicate_email_409(self, client):
        http, _ = client
        register_http(http, "ada@x.edu")
        response = http.post(
            "/profiles", json={**fields("ada@x.edu"), "password": "long enough password"}
        )
        assert response.status_code == 409

    def test_malformed_body_400(self, client):
        http, _ = client
        response = http.post("/profiles", json={"email": "x@y.edu"})
        assert response.status_code == 400

    def test_weak_password_400(self, client):
        http, _ = client
        response = http.post("/profiles", json={**fields("ada@x.edu"), "password": "pw"})
        assert response.status_code == 400

    def test_wrong_password_401(self, client):
        http, _ = client
        register_http(http, "ada@x.edu")
        response = http.post("/auth/login", json={"email": "ada@x.edu", "password": "nope nope"})
        assert response.status_code == 401

    def test_feed_requires_token(self, client):
        http, _ = client
        assert http.get("/feed").status_code == 401
        assert http.get("/feed", headers={"Authorization": "Bearer bogus"}).status_code == 401

    def test_swipe_match_chat_flow(self, client):
        http, _ = client
        a = register_http(http, "ada@x.edu")
        b = register_http(http, "bob@x.edu")
        ada = login_http(http, "ada@x.edu")
        bob = login_http(http, "bob@x.edu")

        response = http.post("/swipes", json={"target": b, "direction": "right"}, headers=ada)
        assert response.status_code == 200 and response.json()["matched"] is False
        response = http.post("/swipes", json={"target": a, "direction": "right"}, headers=bob)
        assert response.status_code == 200 and response.json()["matched"] is True
        match_id = response.json()["match_id"]

        listed = http.get("/matches", headers=ada).json()
        assert [m["match_id"] for m in listed] == [match_id]

        posted = http.post(
            f"/matches/{match_id}/messages", json={"text": "hello"}, headers=ada
        )
        assert posted.status_code == 201
        ts = posted.json()["ts"]
        messages = http.get(f"/matches/{match_id}/messages", headers=bob).json()
        assert [m["text"] for m in messages] == ["hello"]
        assert http.get(
            f"/matches/{match_id}/messages", params={"since": ts}, headers=bob
        ).json() == []

    def test_unmatched_chat_403(self, client):
        http, _ = client
        a = register_http(http, "ada@x.edu")
        b = register_http(http, "bob@x.edu")
        ada = login_http(http, "ada@x.edu")
        http.post("/swipes", json={"target": b, "direction": "right"}, headers=ada)
        match_id = f"{min(a, b)}:{max(a, b)}"
        response = http.post(f"/matches/{match_id}/messages", json={"text": "hi"}, headers=ada)
        assert response.status_code == 403

    def test_self_swipe_403(self, client):
        http, _ = client
        a = register_http(http, "ada@x.edu")
        ada = login_http(http, "ada@x.edu")
        response = http.post("/swipes", json={"target": a, "direction": "right"}, headers=ada)
        assert response.status_code == 403

    def test_unknown_swipe_target_404(self, client):
        http, _ = client
        register_http(http, "ada@x.edu")
        ada = login_http(http, "ada@x.edu")
        response = http.post(
            "/swipes", json={"target": "deadbeef0000", "direction": "right"}, headers=ada
        )
        assert response.status_code == 404

    def test_rating_flow_and_403_without_match(self, client):
        http, _ = client
        a = register_http(http, "ada@x.edu")
        b = register_http(http, "bob@x.edu")
        ada = login_http(http, "ada@x.edu")
        bob = login_http(http, "bob@x.edu")
        response = http.post("/ratings", json={"target": b, "score": 5}, headers=ada)
        assert response.status_code == 403
        http.post("/swipes", json={"target": b, "direction": "right"}, headers=ada)
        http.post("/swipes", json={"target": a, "direction": "right"}, headers=bob)
        response = http.post("/ratings", json={"target": b, "score": 5}, headers=ada)
        assert response.status_code == 200
        assert response.json()["average"] == pytest.approx(5.0)

    def test_rating_score_bounds_400(self, client):
        http, _ = client
        register_http(http, "ada@x.edu")
        register_http(http, "bob@x.edu")
        ada = login_http(http, "ada@x.edu")
        response = http.post("/ratings", json={"target": "x", "score": 9}, headers=ada)
        assert response.status_code == 400

    def test_me_endpoint(self, client):
        http, _ = client
        a = register_http(http, "ada@x.edu")
        ada = login_http(http, "ada@x.edu")
        body = http.get("/me", headers=ada).json()
        assert body["id"] == a
        assert body["email"] == "ada@x.edu"

    def test_healthz_is_public(self, client):
        http, _ = client
        response = http.get("/healthz")
        assert response.status_code == 200
        assert response.json() == {"status": "ok"}


class TestRandomizedInvariants:
    def test_short_random_walk_keeps_invariants(self):
        service = make_service(seed=5)
        rng = random.Random(99)
        profiles = generate_synthetic(DEFAULT_SKILL_POOL, 12, seed=3)
        ids = []
        for p in profiles:
            doc = {
                "name": p.name, "email": p.email, "profession": p.profession,
                "experience": p.experience, "interest": p.interest,
                "collaboration_with": p.collaboration_with, "domain": p.domain,
                "skillset": p.skillset,
            }
            ids.append(service.register(doc, "password-%s" % p.email))
        for _ in range(800):
            op = rng.choice(["swipe", "message", "rate", "feed"])
            x, y = rng.sample(ids, 2)
            if op == "swipe":
                service.swipe(x, y, rng.choice(["right", "left"]))
            elif op == "message":
                record = service.store.get("matches", match_id_for(x, y))
                if record and record["matched"]:
                    service.send_message(record["match_id"], x, "ping")
            elif op == "rate":
                record = service.store.get("matches", match_id_for(x, y))
                if record and record["matched"]:
                    service.rate(x, y, rng.randint(1, 5))
            else:
                service.feed(x, k=3)
        for _, record in service.store.scan("matches"):
            both_right = record["status_a"] == "right" and record["status_b"] == "right"
            assert record["matched"] == both_right
            if record["chat"]:
                assert record["matched"]
        for _, ledger in service.store.scan("ratings"):
            scores = list(ledger["ratings"].values())
            assert ledger["average"] == pytest.approx(sum(scores) / len(scores))
            assert all(1 <= s <= 5 for s in scores)
