"""Shared test configuration.

Property-based tests must be reproducible run to run, so the hypothesis
profile is derandomized and the per-example deadline is disabled (the
integrator-backed properties are legitimately slow on first call).
"""

from hypothesis import settings

settings.register_profile("repro", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("repro")
