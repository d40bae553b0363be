"""Fuzzy profiling of e-learners from web-server access logs.

Pipeline: :mod:`~.logparse` (Common Log Format) -> :mod:`~.sessions`
(robot cleaning, visits, casual-visit cleaning) -> :mod:`~.features`
(five-attribute vectors) -> :mod:`~.fuzzyclust` (FCM / kernel FCM) ->
:mod:`~.regions` (Sure / May-Be areas and class profiles).
:mod:`~.synth` generates labelled traffic for end-to-end checks.
"""

__version__ = "0.1.0"
