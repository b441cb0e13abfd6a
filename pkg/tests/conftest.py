import os
import sys

from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.register_profile("thorough", max_examples=300, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    CRITERIA, RESULTS = module.CRITERIA, module.RESULTS
    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA:
        status = RESULTS.get(number, "NOT RUN")
        terminalreporter.write_line(f"criterion {number:2d}: {status:7s} {title}")
