"""
Running the identity catalogue
------------------------------

Every identity can be checked exactly over the generic coefficient ring or
by random evaluation mod p.  A corrupted table entry makes the run fail and
the report carries a witness.
"""

import json

from involutions import run_suite

report = run_suite("bertini", "modular", trials=5)
print("clean run:", report.status)

broken = run_suite("bertini", "modular", trials=5, corrupt="K")
print("corrupted run:", broken.status)
first = next(c for c in broken.as_json()["checks"] if c["status"] == "fail")
print(json.dumps(first, indent=2)[:600])
