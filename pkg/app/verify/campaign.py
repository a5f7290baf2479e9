# app/verify/campaign.py
"""Run the catalog over many seeded trials and tally the verdicts."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from app.config import settings
from app.errors import GenerationExhausted, RegDefectError
from app.logger import get_logger
from app.verify.catalog import CATALOG, StatementId, Verdict, check_statement
from app.verify.generator import GenParams, Instance, Shape, gen_instance, trial_seed

logger = get_logger(__name__)


class StatementTally(BaseModel):
    statement: StatementId
    passed: int = 0
    failed: int = 0
    skipped: Dict[str, int] = Field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.passed + self.failed + sum(self.skipped.values())


class CampaignReport(BaseModel):
    version: str = settings.REPORT_VERSION
    params: GenParams
    trials: int
    statements: List[StatementTally]
    failures: List[Verdict] = Field(default_factory=list)
    generation_errors: int = 0
    skip_rate: float = 0.0
    wall_time: Optional[float] = None

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def run_trial(params: GenParams, trial: int, statements: Sequence[StatementId]) -> Tuple[List[Verdict], int]:
    """Verdicts for one trial, plus the number of shapes that could not be generated."""
    seed = trial_seed(params.seed, trial)
    instances: Dict[Shape, Optional[Instance]] = {}
    verdicts: List[Verdict] = []
    errors = 0
    for sid in statements:
        shapes = CATALOG[sid].shapes
        shape = shapes[trial % len(shapes)]
        if shape not in instances:
            try:
                instances[shape] = gen_instance(params, shape, seed)
            except GenerationExhausted as e:
                logger.info("trial %d: %s", trial, e)
                instances[shape] = None
                errors += 1
            except RegDefectError as e:
                logger.error("trial %d: generating %s failed: %s", trial, shape.value, e)
                instances[shape] = None
                errors += 1
        inst = instances[shape]
        if inst is not None:
            verdicts.append(check_statement(sid, inst, params.basis_samples))
    return verdicts, errors


def _run_trial_args(args):
    return run_trial(*args)


def campaign(
    params: GenParams,
    trials: int,
    statements: Optional[Iterable[StatementId]] = None,
    workers: int = 1,
    timing: bool = False,
) -> CampaignReport:
    if trials < 1:
        raise RegDefectError("a campaign needs at least one trial")
    chosen = sorted({StatementId(s) for s in (statements or CATALOG)}, key=list(StatementId).index)
    tallies = {sid: StatementTally(statement=sid) for sid in chosen}
    failures: List[Verdict] = []
    generation_errors = 0

    start = time.perf_counter()
    jobs = [(params, trial, chosen) for trial in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map keeps trial order, so the merge below is scheduling independent
            results = list(pool.map(_run_trial_args, jobs))
    else:
        results = [run_trial(*job) for job in jobs]
    elapsed = time.perf_counter() - start

    for verdicts, errors in results:
        generation_errors += errors
        for v in verdicts:
            tally = tallies[v.statement]
            if v.outcome == "pass":
                tally.passed += 1
            elif v.outcome == "fail":
                tally.failed += 1
                failures.append(v)
            else:
                reason = v.reason.value if v.reason else "unknown"
                tally.skipped[reason] = tally.skipped.get(reason, 0) + 1

    total = sum(t.total for t in tallies.values())
    skipped = sum(sum(t.skipped.values()) for t in tallies.values())
    logger.info(
        "campaign: %d trials, %d statements, %d failures in %.2fs", trials, len(chosen), len(failures), elapsed
    )
    return CampaignReport(
        params=params,
        trials=trials,
        statements=list(tallies.values()),
        failures=failures,
        generation_errors=generation_errors,
        skip_rate=round(skipped / total, 4) if total else 0.0,
        wall_time=round(elapsed, 3) if timing else None,
    )
