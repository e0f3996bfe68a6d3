"""Subgroups of free groups, stable domains and equalisers of homomorphisms."""
from .words import *  # noqa: F401,F403
from .stallings import *  # noqa: F401,F403
from .morphisms import *  # noqa: F401,F403
from .stable_domain import *  # noqa: F401,F403
from .equaliser import *  # noqa: F401,F403
from .harness import (  # noqa: F401
    CampaignReport,
    TrialConfig,
    replay,
    run_campaign,
    verify_induced_pair,
)

__version__ = "0.1.0"
