"""Exact summation of binomial sums with harmonic-number weights.

The package closes weighted sums of hypergeometric terms in three layers:
exact rational/polynomial arithmetic (:mod:`abelsum.poly`), certificate
algorithms for telescoping (:mod:`abelsum.gosper`,
:mod:`abelsum.zeilberger`), and a summation-by-parts pipeline that strips
harmonic weights one factor at a time (:mod:`abelsum.abel`).  A catalog of
verified identities with an independent brute-force oracle lives in
:mod:`abelsum.catalog`; the surface syntax is in :mod:`abelsum.dsl`.
"""

from .abel import (
    AbelError,
    GosperFailed,
    PipelineResult,
    ProofTrace,
    SumSpec,
    abel_gosper_pipeline,
    abel_step,
    abel_wz_pipeline,
)
from .catalog import (
    CatalogError,
    IdentitySpec,
    VerificationReport,
    default_catalog_path,
    load_catalog,
    verify,
    verify_pipeline_agreement,
)
from .dsl import (
    DslError,
    parse_closed,
    parse_expr,
    parse_term,
    parse_weight,
    render_ratfunc,
    render_term_ast,
    render_weight_ast,
)
from .gosper import GosperError, antidifference, gosper
from .oracle import OracleError, brute_eval
from .poly import QN, QQ, FractionField, PolynomialError, RatFunc, UniPoly
from .terms import LinearForm, Support, TermError, TermExpr
from .weights import HarmonicAtom, WeightError, WeightExpr, harmonic_number
from .zeilberger import Recurrence, WZPair, ZeilbergerError, wz_certify, zeilberger

__version__ = "0.1.0"

__all__ = [
    "AbelError",
    "CatalogError",
    "DslError",
    "FractionField",
    "GosperError",
    "GosperFailed",
    "HarmonicAtom",
    "IdentitySpec",
    "LinearForm",
    "OracleError",
    "PipelineResult",
    "PolynomialError",
    "ProofTrace",
    "QN",
    "QQ",
    "RatFunc",
    "Recurrence",
    "SumSpec",
    "Support",
    "TermError",
    "TermExpr",
    "UniPoly",
    "VerificationReport",
    "WZPair",
    "WeightError",
    "WeightExpr",
    "ZeilbergerError",
    "abel_gosper_pipeline",
    "abel_step",
    "abel_wz_pipeline",
    "antidifference",
    "brute_eval",
    "default_catalog_path",
    "gosper",
    "harmonic_number",
    "load_catalog",
    "parse_closed",
    "parse_expr",
    "parse_term",
    "parse_weight",
    "render_ratfunc",
    "render_term_ast",
    "render_weight_ast",
    "verify",
    "verify_pipeline_agreement",
    "wz_certify",
    "zeilberger",
]
