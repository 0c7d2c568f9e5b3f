"""Protocol simulations: direct classical sharing, key distribution, quantum-secret sharing."""

from .cc import CCResult, cc_run
from .cq import CQMenu, CQTranscript, EveModel, cq_menu, cq_run, cq_security_witness, eve_intercept_resend
from .qq import LocalizeResult, QQEncoding, encoded_secret, qq_encode, qq_localize

__all__ = [
    "CCResult",
    "CQMenu",
    "CQTranscript",
    "EveModel",
    "LocalizeResult",
    "QQEncoding",
    "cc_run",
    "cq_menu",
    "cq_run",
    "cq_security_witness",
    "encoded_secret",
    "eve_intercept_resend",
    "qq_encode",
    "qq_localize",
]
