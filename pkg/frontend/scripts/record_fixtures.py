"""Record real service responses into JSON fixtures for the web UI tests.

Run from the repository root with the qgen package installed:

    python3 frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path

from fastapi.testclient import TestClient

from qgen.service import create_app

EMPLOYEES_CSV = """Employee ID,City,Age,Salary
E01,New York,26,$100000
E02,New York,29,$150000
E03,Columbus,29,$110000
E04,Columbus,35,$210000
E05,New York,38,$250000
"""

OUT_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def main():
    client = TestClient(create_app())
    steps = []

    def record(step, method, path, response, request_body=None):
        body = response.text if "json" not in response.headers.get(
            "content-type", "") else response.json()
        steps.append({
            "step": step,
            "method": method,
            "path": path,
            "status": response.status_code,
            "request_body": request_body,
            "body": body,
        })
        return body

    response = client.post("/datasets?name=employees", content=EMPLOYEES_CSV.encode())
    upload = record("upload", "POST", "/datasets", response, EMPLOYEES_CSV)

    payload = {"dataset_id": upload["dataset_id"], "question_limit": 500,
               "config": {"alpha": 1.0, "entity": "employees"}}
    response = client.post("/sessions", json=payload)
    created = record("create_session", "POST", "/sessions", response, payload)
    session_id = created["session_id"]

    response = client.get(f"/sessions/{session_id}/questions?top=10")
    initial = record("questions_initial", "GET",
                     f"/sessions/{session_id}/questions?top=10", response)

    target = next(q for q in initial["questions"] if len(q["columns"]) >= 2)
    payload = {"question_id": target["id"]}
    response = client.post(f"/sessions/{session_id}/select", json=payload,
                           headers={"X-Request-Id": "fixture-select-1"})
    record("select", "POST", f"/sessions/{session_id}/select", response, payload)

    response = client.get(f"/sessions/{session_id}/questions?top=10")
    record("questions_after_select", "GET",
           f"/sessions/{session_id}/questions?top=10", response)

    response = client.get(f"/sessions/{session_id}/search",
                          params={"q": "average salary", "limit": 10})
    record("search", "GET",
           f"/sessions/{session_id}/search?q=average+salary&limit=10", response)

    response = client.post(f"/sessions/{session_id}/save")
    snapshot = response.text
    steps.append({"step": "save", "method": "POST",
                  "path": f"/sessions/{session_id}/save",
                  "status": response.status_code, "request_body": None,
                  "body": snapshot})

    response = client.post("/sessions/resume", content=snapshot.encode())
    resumed = record("resume", "POST", "/sessions/resume", response, snapshot)

    response = client.get(f"/sessions/{resumed['session_id']}/questions?top=10")
    record("questions_after_resume", "GET",
           f"/sessions/{resumed['session_id']}/questions?top=10", response)

    response = client.get("/catalog")
    record("catalog", "GET", "/catalog", response)

    response = client.post("/datasets?name=bad", content=b"a,b\n1\n")
    record("upload_error", "POST", "/datasets", response, "a,b\n1\n")

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    (OUT_DIR / "flow.json").write_text(
        json.dumps({"employees_csv": EMPLOYEES_CSV, "steps": steps}, indent=2,
                   ensure_ascii=False) + "\n",
        encoding="utf-8")
    print(f"wrote {OUT_DIR / 'flow.json'} with {len(steps)} steps")


if __name__ == "__main__":
    main()
