from app.verify.generator import GenParams, Instance, Shape, gen_instance, trial_seed
from app.verify.catalog import (
    CATALOG,
    OUT_OF_SCOPE,
    SkipReason,
    StatementId,
    Verdict,
    check_statement,
    explain,
)
from app.verify.campaign import CampaignReport, StatementTally, campaign, run_trial
