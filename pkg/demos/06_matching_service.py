#!/usr/bin/env python3
"""The swipe/match/chat/rate state machine, driven in memory.

Same service the HTTP API wraps; here it runs against an in-memory store
so the walkthrough leaves nothing on disk.  Start the real thing with
`collabrec serve --demo-corpus`.

    python3 demos/06_matching_service.py
"""

from collabrec.matchsvc import Forbidden, MatchService, MemoryDocumentStore
from collabrec.matchsvc.service import match_id_for

service = MatchService(MemoryDocumentStore(), kdf_iterations=1_000)

def register(name, email, domain, skills):
    fields = {
        "name": name, "email": email, "profession": "student", "experience": 2,
        "interest": "research projects", "collaboration_with": "student",
        "domain": domain, "skillset": skills,
    }
    profile_id = service.register(fields, password=f"{name}-passphrase")
    print(f"registered {name:6s} -> {profile_id}")
    return profile_id

ada = register("Ada", "ada@demo.test", "Machine Learning", "Python, PyTorch")
ben = register("Ben", "ben@demo.test", "Machine Learning", "Python, Keras")
match_id = match_id_for(ada, ben)

print("\nAda swipes right on Ben:")
print(f"  matched = {service.swipe(ada, ben, 'right')['matched']}")

print("chat before the match is rejected:")
try:
    service.send_message(match_id, ada, "hello?")
except Forbidden as exc:
    print(f"  Forbidden: {exc}")

print("Ben swipes right back:")
print(f"  matched = {service.swipe(ben, ada, 'right')['matched']}")

service.send_message(match_id, ada, "Hi Ben, want to compare optimizers?")
service.send_message(match_id, ben, "Always.")
print("\nchat thread:")
for message in service.messages(match_id, ada):
    sender = "Ada" if message["sender"] == ada else "Ben"
    print(f"  [{message['ts']}] {sender}: {message['text']}")

average = service.rate(ada, ben, 5)
average = service.rate(ben, ada, 4)
print(f"\nAda rated Ben 5; Ben rated Ada 4 (Ada's average: {average})")

print("\nmatches visible to Ada:")
for record in service.matches_for(ada):
    print(f"  {record['match_id']} with {record['other_name']}")
