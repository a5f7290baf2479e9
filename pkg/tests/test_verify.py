import pytest
from pydantic import ValidationError

from app.errors import RegDefectError, ShapeMismatch
from app.verify import (
    CATALOG,
    OUT_OF_SCOPE,
    GenParams,
    Shape,
    SkipReason,
    StatementId,
    campaign,
    check_statement,
    explain,
    gen_instance,
    run_trial,
    trial_seed,
)
from app.verify.catalog import Statement
from frontend.components.parser import parse_session
from frontend.components.session import execute

QUICK = [
    StatementId.MU_OF_MAXIMAL_IDEAL,
    StatementId.DEFECT_FORMULA,
    StatementId.QUOTIENT_DEFECT_IS_DELTA,
    StatementId.SQUARE_IS_TRIANGLE_SUM,
    StatementId.QUOTIENT_SQUARE_IS_BASIC,
    StatementId.SURJECTION_TRIANGLE_IS_BASIC,
]


# --- parameters and seeds ---

def test_params_validate_the_field():
    assert GenParams(field="QQ").field_spec.is_rational
    assert GenParams(field=" GF(7) ").field == "GF(7)"
    with pytest.raises(ValidationError):
        GenParams(field="GF(4)")


def test_params_bounds():
    with pytest.raises(ValidationError):
        GenParams(max_gen_degree=0)
    with pytest.raises(ValidationError):
        GenParams(trunc_degree=1)
    with pytest.raises(ValidationError):
        GenParams(seed=-1)


def test_trial_seeds():
    assert trial_seed(0, 5) == 5
    assert trial_seed(1, 0) == 1_000_003
    assert 0 <= trial_seed(2**64 - 1, 3) < 2**64


# --- instances ---

@pytest.mark.parametrize("shape", list(Shape))
def test_generation_is_deterministic(gf5_params, shape):
    first = gen_instance(gf5_params, shape, seed=11)
    second = gen_instance(gf5_params, shape, seed=11)
    assert first.digest() == second.digest()
    assert first.session() == second.session()
    assert len(first.digest()) == 16


@pytest.mark.parametrize("shape", list(Shape))
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_instance_sessions_replay(gf5_params, shape, seed):
    inst = gen_instance(gf5_params, shape, seed=seed)
    report = execute(parse_session(inst.session()))
    assert report.ok


def test_instances_fill_their_slots(gf5_params):
    pair = gen_instance(gf5_params, Shape.COMPOSABLE_PAIR, seed=3)
    assert pair.phi.target.same_presentation(pair.psi.source)
    square = gen_instance(gf5_params, Shape.QUOTIENT_SQUARE, seed=3)
    assert square.ideal.ring.same_presentation(square.phi.source)
    assert square.ideal2.ring.same_presentation(square.phi.target)
    tri = gen_instance(gf5_params, Shape.SURJECTION_TRIANGLE, seed=3)
    assert tri.phi.is_surjection
    assert tri.phi.source.same_presentation(tri.ring)


def test_flat_family_is_flat(gf5_params):
    from app.services import flatness_status

    for seed in range(5):
        inst = gen_instance(gf5_params, Shape.FLAT_FAMILY, seed=seed)
        assert flatness_status(inst.phi).kind == "Flat"


# --- catalog ---

def test_catalog_is_complete():
    assert set(CATALOG) == set(StatementId)
    assert "minimal_cohen_presentation" in OUT_OF_SCOPE
    for entry in CATALOG.values():
        assert entry.shapes and entry.claim


def test_wrong_shape_is_rejected(gf5_params):
    inst = gen_instance(gf5_params, Shape.MAP, seed=0)
    with pytest.raises(ShapeMismatch):
        check_statement(StatementId.MU_OF_MAXIMAL_IDEAL, inst)


@pytest.mark.parametrize("sid", QUICK)
def test_statements_hold_on_a_few_instances(gf5_params, sid):
    for seed in range(4):
        shapes = CATALOG[sid].shapes
        inst = gen_instance(gf5_params, shapes[seed % len(shapes)], seed=seed)
        verdict = check_statement(sid, inst)
        assert not verdict.failed, verdict.details


def test_failure_carries_a_replay(monkeypatch, gf5_params):
    sid = StatementId.MU_OF_MAXIMAL_IDEAL

    def always_wrong(inst, c):
        c.equal(1, 2, "forced")

    monkeypatch.setitem(CATALOG, sid, Statement(sid, (Shape.RING,), "never holds", always_wrong))
    inst = gen_instance(gf5_params, Shape.RING, seed=4)
    verdict = check_statement(sid, inst)
    assert verdict.failed
    assert verdict.details == "forced: 1 != 2"
    assert verdict.replay.seed == 4
    assert verdict.replay.session == inst.session()


def test_undecided_values_skip(monkeypatch, gf5_params):
    sid = StatementId.MU_OF_MAXIMAL_IDEAL

    def blocked(inst, c):
        c.known(None, "dim A")

    monkeypatch.setitem(CATALOG, sid, Statement(sid, (Shape.RING,), "blocked", blocked))
    verdict = check_statement(sid, gen_instance(gf5_params, Shape.RING, seed=0))
    assert verdict.outcome == "skipped"
    assert verdict.reason is SkipReason.UNKNOWN_BLOCKED


def test_explain_names_the_claim():
    text = explain(StatementId.SURJECTION_TRIANGLE_IS_BASIC)
    assert text.startswith("surjection_triangle_is_basic")
    assert "SurjectionTriangle" in text
    assert "anchor: Corollary: phi surjective gives rd(psi phi) = rd(phi) + rd(psi)" in text
    assert "checks: A triangle whose first arrow is surjective is basic." in text


def test_every_statement_has_an_anchor():
    for entry in CATALOG.values():
        assert entry.anchor.split(":")[0] in {"Lemma", "Corollary", "Proposition", "Theorem", "Remark", "Definition"}


def _count_class_ranks(monkeypatch):
    from app.verify import catalog

    calls = []
    real = catalog.class_rank

    def counting(ring, elements):
        calls.append(len(elements))
        return real(ring, elements)

    monkeypatch.setattr(catalog, "class_rank", counting)
    return calls


def test_basis_samples_per_check(monkeypatch, gf5_params):
    calls = _count_class_ranks(monkeypatch)
    inst = gen_instance(gf5_params, Shape.MAP, seed=0)
    check_statement(StatementId.ONE_BASIS_SUFFICES, inst, basis_samples=1)
    assert len(calls) == 2
    calls.clear()
    check_statement(StatementId.ONE_BASIS_SUFFICES, inst, basis_samples=3)
    assert len(calls) == 6


def test_campaign_passes_basis_samples_through(monkeypatch):
    calls = _count_class_ranks(monkeypatch)
    params = GenParams(field="GF(5)", seed=7, trunc_degree=5, basis_samples=1)
    report = campaign(params, 1, [StatementId.ONE_BASIS_SUFFICES])
    assert report.statements[0].total == 1
    assert len(calls) == 2


# --- campaigns ---

def test_run_trial_uses_one_instance_per_shape(gf5_params):
    verdicts, errors = run_trial(gf5_params, 0, QUICK)
    assert len(verdicts) + errors <= len(QUICK)
    assert {v.statement for v in verdicts} <= set(QUICK)


def test_small_campaign(gf5_params):
    report = campaign(gf5_params, trials=4, statements=QUICK)
    assert report.ok, [v.details for v in report.failures]
    assert [t.statement for t in report.statements] == sorted(QUICK, key=list(StatementId).index)
    assert report.wall_time is None
    assert "wall_time" not in report.to_json()
    assert 0.0 <= report.skip_rate <= 1.0


def test_campaign_is_reproducible(gf5_params):
    first = campaign(gf5_params, trials=3, statements=QUICK[:3])
    second = campaign(gf5_params, trials=3, statements=QUICK[:3])
    assert first.to_json() == second.to_json()


def test_campaign_needs_trials(gf5_params):
    with pytest.raises(RegDefectError):
        campaign(gf5_params, trials=0)


def test_timing_is_opt_in(gf5_params):
    report = campaign(gf5_params, trials=1, statements=QUICK[:1], timing=True)
    assert report.wall_time is not None


@pytest.mark.slow
@pytest.mark.parametrize("field", ["GF(5)", "GF(2)", "QQ"])
def test_full_catalog_has_no_failures(field):
    report = campaign(GenParams(field=field, seed=0), trials=100)
    assert report.ok, [f"{v.statement.value}: {v.details}" for v in report.failures]


@pytest.mark.slow
def test_parallel_campaign_matches_serial():
    params = GenParams(seed=3)
    serial = campaign(params, trials=8, workers=1)
    parallel = campaign(params, trials=8, workers=2)
    assert serial.to_json() == parallel.to_json()
