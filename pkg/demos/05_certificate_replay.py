"""Write a certificate, tamper with it, and replay both versions."""
import json
import sys
import tempfile
from pathlib import Path

from modlattice.prover import replay_certificate, verify_case

rank = int(sys.argv[1]) if len(sys.argv) > 1 else 24
cert = verify_case(rank)
path = Path(tempfile.gettempdir()) / f"modlattice-{rank}.json"
path.write_text(cert.dumps())
print(f"rank {rank}: {cert.verdict}; certificate written to {path}")

data = json.loads(path.read_text())
rep = replay_certificate(data)
print("replay:", "ok" if rep.ok else "FAILED", f"({len(rep.checked)} checks)")

victim = data["branches"][-1]
victim["system"]["rhs"][0] = str(int(victim["system"]["rhs"][0]) + 2)
rep = replay_certificate(data)
print(f"after editing the s = {victim['s']} system:", "ok" if rep.ok else "FAILED")
for f in rep.failures:
    print("  ", f)
