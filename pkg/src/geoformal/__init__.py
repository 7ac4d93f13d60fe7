"""Unified plane/solid geometry formal language: parsing, canonical forms,
validation, set-matching metrics, and the verifiable reward."""

__version__ = "0.1.0"

from .ast import (  # noqa: F401
    PLANE,
    SOLID,
    AngleMeasure,
    ArcMeasure,
    Circle,
    Document,
    Line,
    Parallel,
    Perp,
    Plane,
    SegmentEq,
    Solid,
)
from .canon import CanonicalDocument, CanonMode, canonicalize  # noqa: F401
from .expr import Expr, parse_expr  # noqa: F401
from .labels import MalformedPointRun, PointLabel, parse_label, split_point_run  # noqa: F401
from .lexer import IllegalCharacter, Token, tokenize  # noqa: F401
from .metrics import (  # noqa: F401
    CorpusReport,
    EmptyCorpus,
    MatchResult,
    MixedDomains,
    ModeMismatch,
    category_prf,
    match_pair,
    score_corpus,
)
from .parser import Diagnostic, ParseResult, parse_document  # noqa: F401
from .render import render, render_canonical  # noqa: F401
from .reward import (  # noqa: F401
    BadReference,
    ConfigError,
    RewardBreakdown,
    RewardConfig,
    format_reward,
    geometric_reward,
    total_reward,
)
from .validator import (  # noqa: F401
    FormatReport,
    LintFinding,
    check_consistency,
    check_format,
    lint_redundancy,
)
