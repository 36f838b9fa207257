"""swarmpaint: gesture-driven drone-swarm light painting, end to end.

Hand-landmark gesture recognition feeds a command state machine; drawn
strokes become smoothed, equidistant, time-scheduled flight trajectories;
a potential-field controller flies a simulated swarm along them; the
flight is exposed as a long-exposure light painting plus tracing-error
metrics.  A CLI covers every stage headlessly and a websocket gateway
hosts live drawing sessions.
"""

__version__ = "0.1.0"
