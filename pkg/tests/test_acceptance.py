"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with the measured values.

Criterion tolerances are pinned here and nowhere else.  The employees-example
fidelity check runs the question pipeline with the significance gate open
(alpha = 1): at n = 5 rows nothing in that table is significant at 0.05,
which the statistical-engine criterion asserts directly.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest
from dataclasses import replace

from qgen.dataset import load_dataset
from qgen.engine import EngineConfig, ExplorationSession, generate_questions
from qgen.measures import (coefficient_of_variation, entropy, pearson_correlation,
                           unalikeability)
from qgen.questions import QuestionCandidate, candidate_from_slice, reparse_member_rows
from qgen.ranking import rank_feedback, record_selection, SessionState
from qgen.session import load_session
from qgen.slicing import (Slice, SliceConfig, SlicePredicate, best_slice_per_subset,
                          candidate_slices, enumerate_column_subsets)
from qgen.slicing import test_slice_significance as slice_significance
from qgen import stats

from conftest import BOUNDARY_CSV, EMPLOYEES_CSV
from oracle import oracle_best_slice, random_table_csv
from test_stats import T_REFERENCE


def report(criterion: str, ok: bool, detail: str = ""):
    marker = "PASS" if ok else "FAIL"
    print(f"[{marker}] {criterion}" + (f" :: {detail}" if detail else ""))
    assert ok, f"{criterion}: {detail}"


@pytest.fixture(scope="module")
def employees():
    from qgen.dataset import IngestOptions
    return load_dataset(EMPLOYEES_CSV, IngestOptions(name="employees"))


def test_measure_correctness(employees):
    start = time.perf_counter()
    city, age, salary = (employees.column(c) for c in ("City", "Age", "Salary"))
    h = entropy(city)
    u = unalikeability(city)
    cv = coefficient_of_variation(salary)
    r = pearson_correlation(age, salary)
    elapsed = time.perf_counter() - start
    ok = (abs(h - 0.9710) <= 1e-3 and abs(u - 0.48) <= 1e-9
          and abs(cv - 0.3526) <= 1e-3 and abs(r - 0.974) <= 1e-3
          and elapsed < 1.0)
    report("measure correctness on the employees example", ok,
           f"entropy={h:.4f} unalikeability={u:.4f} cv={cv:.4f} r={r:.4f} "
           f"elapsed={elapsed:.3f}s")


def test_statistical_engine(employees):
    welch = stats.welch_t_test([10, 11, 12, 13], [50, 51, 52, 53])
    separated_ok = welch.p_value < 0.001

    identical = stats.welch_t_test([1.0, 2.0, 3.0], [3.0, 2.0, 1.0])
    identical_ok = identical.statistic == 0.0 and identical.p_value == 1.0

    ny = Slice(subset_columns=("City", "Salary"), fixed_column="Salary",
               measure_operator="average",
               predicates=(SlicePredicate("City", "among", "New York"),),
               member_rows=(0, 1, 4))
    ny_sig = slice_significance(ny, employees, alpha=0.05)
    ny_ok = not ny_sig.significant  # 5 rows cannot support the city gap

    max_err = max(abs(stats.student_t_two_sided_p(t, df) - expected)
                  for t, df, expected in T_REFERENCE)
    table_ok = max_err <= 1e-6

    report("statistical engine", separated_ok and identical_ok and ny_ok and table_ok,
           f"welch_p={welch.p_value:.2e} identical=(t={identical.statistic}, "
           f"p={identical.p_value}) ny_p={ny_sig.p_value:.3f} t_table_err={max_err:.2e}")


def test_oracle_equivalence():
    config = SliceConfig()
    start = time.perf_counter()
    rng = np.random.default_rng(20240817)
    tables = 0
    subsets_checked = 0
    for _ in range(100):
        ds = load_dataset(random_table_csv(rng))
        tables += 1
        eligible = [c.name for c in ds.columns
                    if c.kind != "identifier" and c.non_null_count > 0]
        if not eligible:
            continue
        for subset in enumerate_column_subsets(eligible, 3):
            engine = best_slice_per_subset(ds, subset, config)
            oracle = oracle_best_slice(ds, subset, config)
            if engine is None or oracle is None:
                assert engine is None and oracle is None, \
                    f"presence mismatch on subset {subset}: {engine} vs {oracle}"
                continue
            assert (engine.fixed_column, engine.measure_operator, engine.measure_k,
                    engine.operand_keys(), engine.member_rows) == \
                   (oracle.fixed_column, oracle.measure, oracle.measure_k,
                    oracle.operand_keys, oracle.member_rows), \
                   f"argmax mismatch on subset {subset}"
            assert engine.interestingness == pytest.approx(oracle.score, rel=1e-9)
            subsets_checked += 1
    elapsed = time.perf_counter() - start
    report("oracle equivalence", tables == 100 and elapsed < 30.0,
           f"tables={tables} subsets={subsets_checked} elapsed={elapsed:.2f}s")


def test_question_fidelity(employees):
    # the generation pipeline on the real {City among New York}
    # candidate (significance gate open; see module docstring)
    candidates = candidate_slices(employees, ("City", "Salary"), "Salary")
    ny = next(c for c in candidates if c.predicates[0].operand == "New York")
    ny = replace(ny, measure_operator="average")
    sig = slice_significance(ny, employees, alpha=1.0)
    ny = replace(ny, significance=sig,
                 interestingness=abs(sig.effect_size) * (1 - sig.p_value))
    question = candidate_from_slice(employees, ny, entity="employees")
    employees_ok = (question.valid
                 and "average salary" in question.surface_text
                 and "New York" in question.surface_text
                 and reparse_member_rows(employees, question) == ny.member_rows)

    # exact-render scenario: fixture slice whose complement maximum below the slice
    # is 45 must render the exact surface form
    boundary = load_dataset(BOUNDARY_CSV)
    predicates = (SlicePredicate("age", "above", 45.0),
                  SlicePredicate("gender", "among", "females"))
    members = tuple(i for i in range(boundary.row_count)
                    if all(p.matches(boundary.column(p.column_name).values[i])
                           for p in predicates))
    slc = Slice(subset_columns=("age", "gender", "salary"), fixed_column="salary",
                measure_operator="average", predicates=predicates,
                member_rows=members)
    slc = replace(slc, significance=slice_significance(slc, boundary, alpha=0.05))
    rendered = candidate_from_slice(boundary, slc, entity="employees")
    boundary_ok = rendered.surface_text == \
        "What is the average salary above age 45 among females?"

    report("question fidelity", employees_ok and boundary_ok,
           f"employees={question.surface_text!r} boundary={rendered.surface_text!r}")


def _make_question(qid, columns, score):
    return QuestionCandidate(
        id=qid, columns=tuple(columns),
        operator_map={c: "average" for c in columns}, template_text="",
        slot_values=(), surface_text=f"question {qid}?", score=score, valid=True)


def test_feedback_ranking(employees, tmp_path):
    state = SessionState(
        session_id="s", dataset_id="d", dataset_hash="h", dataset_name="n",
        selected_columns=["C1", "C2", "C3"],
        questions=[_make_question("q12", ["C1", "C2"], 0.9),
                   _make_question("q3", ["C3"], 0.1),
                   _make_question("q13", ["C1", "C3"], 0.5)])
    record_selection(state, "q12")
    probs = state.probabilities()
    exact_ok = probs == {"C1": 0.4, "C2": 0.4, "C3": 0.2}
    order = [q.id for q in rank_feedback(state)]
    order_ok = order.index("q3") < order.index("q12")

    # replay determinism through the CLI
    table_path = tmp_path / "employees.csv"
    table_path.write_text(EMPLOYEES_CSV, encoding="utf-8")
    flags = ["--entity", "employees", "--alpha", "1.0"]
    generated = subprocess.run(
        [sys.executable, "-m", "qgen.cli", "generate", "--input", str(table_path),
         *flags],
        capture_output=True, text=True, timeout=120)
    ids = [json.loads(line)["id"] for line in generated.stdout.splitlines()
           if len(json.loads(line)["columns"]) >= 2]
    selections = tmp_path / "selections.txt"
    selections.write_text("\n".join(ids[:2]) + "\n", encoding="utf-8")
    replay_args = [sys.executable, "-m", "qgen.cli", "replay", "--input",
                   str(table_path), "--selections", str(selections), *flags]
    first = subprocess.run(replay_args, capture_output=True, timeout=120)
    second = subprocess.run(replay_args, capture_output=True, timeout=120)
    replay_ok = (first.returncode == 0 and first.stdout == second.stdout
                 and len(first.stdout.splitlines()) == 3)

    report("feedback ranking", exact_ok and order_ok and replay_ok,
           f"p={sorted(probs.values(), reverse=True)} order={order} "
           f"replay_identical={first.stdout == second.stdout}")


def test_limits_and_determinism(employees, tmp_path):
    config = EngineConfig(alpha=1.0, entity="employees")
    session = ExplorationSession.create(employees, config, question_limit=500,
                                        session_id="acc")
    limit_ok = 1 <= session.question_count <= 500

    table_path = tmp_path / "employees.csv"
    table_path.write_text(EMPLOYEES_CSV, encoding="utf-8")
    args = [sys.executable, "-m", "qgen.cli", "generate", "--input", str(table_path),
            "--entity", "employees", "--alpha", "1.0"]
    runs = [subprocess.run(args, capture_output=True, timeout=120).stdout
            for _ in range(2)]
    cli_ok = runs[0] == runs[1] and len(runs[0]) > 0

    session.select(session.top(1)[0].id)
    before = [(q.id, q.surface_text) for q in session.state.current_ranking()]
    path = tmp_path / "acc.qsession"
    session.save(path)
    restored = load_session(path.read_text(encoding="utf-8"), employees)
    after = [(q.id, q.surface_text) for q in restored.current_ranking()]
    roundtrip_ok = before == after

    report("limits and determinism", limit_ok and cli_ok and roundtrip_ok,
           f"count={session.question_count} cli_identical={runs[0] == runs[1]} "
           f"roundtrip={roundtrip_ok}")


def test_primary_runs_without_secondary():
    loaded = [name for name in sys.modules if "frontend" in name.lower()]
    qgen_ok = all(not getattr(module, "__file__", "").replace("\\", "/").count("/frontend/")
                  for name, module in sys.modules.items()
                  if name.startswith("qgen") and module is not None)
    report("primary component independent of secondary", not loaded and qgen_ok,
           "no frontend modules imported by the suite")
