"""CircuitQuest: a gamified linear-circuit course engine.

The package splits into four layers:

* :mod:`circuitquest.core` solves linear circuits (DC and single-frequency
  AC phasor analysis) and provides the derived analyses the course needs:
  Thevenin ports, power accounting, three-phase systems, fault injection,
  parameter fitting, conductor sizing.
* :mod:`circuitquest.problems` turns parameterised templates into concrete,
  seed-reproducible problem instances, grades submitted answers, and renders
  schematics.
* :mod:`circuitquest.game` tracks player progression: experience, coins,
  reputation, level gates, deadlines, and the instructor gradebook.
* :mod:`circuitquest.service` persists events, serves the HTTP API, and hosts
  the command line interface.
"""

__version__ = "0.1.0"
