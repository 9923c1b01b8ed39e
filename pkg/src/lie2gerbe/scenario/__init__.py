from .parser import (
    SUITES,
    GerbeSpec,
    MomentSpec,
    RunOptions,
    ScenarioDoc,
    ScenarioError,
    ScenarioTypeError,
    parse_expression,
    parse_scenario,
    render_value,
)
from .runner import SUITE_HELP, ConfigurationError, Report, SuiteResult, render_report, run_suite, run_suites
