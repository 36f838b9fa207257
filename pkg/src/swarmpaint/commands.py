"""Debounced gesture-to-command state machine.

A gesture only fires its command after N consecutive frames at or above
the confidence threshold, which suppresses classifier flicker.  Modes are
toggled rather than held: ONE enters drawing, TWO enters erasing, FIVE
returns to idle flight, and while a drawing/erasing mode is active every
frame with a visible cursor emits a point event.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, replace
from typing import Optional

from .errors import ConfigError
from .gestures.poses import GestureClass


class Mode(str, enum.Enum):
    GROUNDED = "GROUNDED"
    FLYING_IDLE = "FLYING_IDLE"
    DRAWING = "DRAWING"
    ERASING = "ERASING"
    PAINTING = "PAINTING"


class Command(str, enum.Enum):
    TAKE_OFF = "TAKE_OFF"
    LAND = "LAND"
    DRAW = "DRAW"  # enter drawing mode
    ERASE = "ERASE"  # enter erasing mode
    PAINT = "PAINT"  # hand the stroke to the swarm
    IDLE = "IDLE"  # leave drawing/erasing/painting
    CLEAR = "CLEAR"
    NONE = "NONE"


@dataclass(frozen=True)
class CommandEvent:
    kind: str  # TAKE_OFF | LAND | DRAW_POINT | ERASE_AT | BEGIN_PAINT | CLEAR | NONE
    x: float | None = None
    y: float | None = None
    t: float | None = None
    radius: float | None = None


NONE_EVENT = CommandEvent("NONE")

AIRBORNE_MODES = (Mode.FLYING_IDLE, Mode.DRAWING, Mode.ERASING, Mode.PAINTING)


@dataclass(frozen=True)
class GestureMapping:
    """Gesture assignments plus the debounce parameters."""

    map: dict[GestureClass, Command]
    threshold: float = 0.8
    debounce_frames: int = 5
    erase_radius: float = 30.0

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.debounce_frames < 1:
            raise ConfigError(f"debounce_frames must be >= 1, got {self.debounce_frames}")
        if self.erase_radius <= 0:
            raise ConfigError(f"erase_radius must be > 0, got {self.erase_radius}")
        assigned = [c for c in self.map.values() if c is not Command.NONE]
        if len(assigned) != len(set(assigned)):
            raise ConfigError("gesture mapping must be injective over assigned commands")

    def to_json(self) -> str:
        return json.dumps(
            {
                "map": {g.name: c.value for g, c in self.map.items()},
                "threshold": self.threshold,
                "debounce_frames": self.debounce_frames,
                "erase_radius": self.erase_radius,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "GestureMapping":
        try:
            doc = json.loads(text)
            mapping = {GestureClass[g]: Command(c) for g, c in doc["map"].items()}
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad gesture mapping document: {exc}") from None
        return cls(
            map=mapping,
            threshold=doc.get("threshold", 0.8),
            debounce_frames=doc.get("debounce_frames", 5),
            erase_radius=doc.get("erase_radius", 30.0),
        )


def default_mapping() -> GestureMapping:
    return GestureMapping(
        map={
            GestureClass.THUMBS_UP: Command.TAKE_OFF,
            GestureClass.OKAY: Command.LAND,
            GestureClass.ONE: Command.DRAW,
            GestureClass.TWO: Command.ERASE,
            GestureClass.ROCK: Command.PAINT,
            GestureClass.FIVE: Command.IDLE,
            GestureClass.THREE: Command.NONE,  # reserved
            GestureClass.FOUR: Command.NONE,  # reserved
        }
    )


@dataclass(frozen=True)
class CommandState:
    mode: Mode = Mode.GROUNDED
    buffer: tuple[tuple[GestureClass, float], ...] = ()  # last <= N frames
    candidate: Optional[GestureClass] = None
    streak: int = 0


def apply_command(state: CommandState, command: Command,
                  t: float | None = None) -> tuple[CommandState, CommandEvent]:
    """Apply one command as if it had just passed the debounce."""
    mode = state.mode
    if command is Command.TAKE_OFF:
        if mode is Mode.GROUNDED:
            return replace(state, mode=Mode.FLYING_IDLE), CommandEvent("TAKE_OFF", t=t)
        return state, NONE_EVENT
    if command is Command.LAND:
        if mode is not Mode.GROUNDED:
            return replace(state, mode=Mode.GROUNDED), CommandEvent("LAND", t=t)
        return state, NONE_EVENT
    if command is Command.DRAW:
        if mode in AIRBORNE_MODES:
            return replace(state, mode=Mode.DRAWING), NONE_EVENT
        return state, NONE_EVENT
    if command is Command.ERASE:
        if mode in AIRBORNE_MODES:
            return replace(state, mode=Mode.ERASING), NONE_EVENT
        return state, NONE_EVENT
    if command is Command.PAINT:
        if mode in AIRBORNE_MODES:
            return replace(state, mode=Mode.PAINTING), CommandEvent("BEGIN_PAINT", t=t)
        return state, NONE_EVENT
    if command is Command.IDLE:
        if mode in (Mode.DRAWING, Mode.ERASING, Mode.PAINTING):
            return replace(state, mode=Mode.FLYING_IDLE), NONE_EVENT
        return state, NONE_EVENT
    if command is Command.CLEAR:
        return state, CommandEvent("CLEAR", t=t)
    return state, NONE_EVENT


def step_fsm(
    state: CommandState,
    gesture: Optional[GestureClass],
    confidence: float,
    cursor: Optional[tuple[float, float]],
    mapping: GestureMapping,
    t: float | None = None,
) -> tuple[CommandState, CommandEvent]:
    """Advance one classified frame; returns the new state and at most one event."""
    qualifies = gesture is not None and confidence >= mapping.threshold
    if qualifies and gesture is state.candidate:
        streak = state.streak + 1
    elif qualifies:
        streak = 1
    else:
        streak = 0
    candidate = gesture if qualifies else None

    buffer = (state.buffer + ((gesture, confidence),))[-mapping.debounce_frames :] if gesture is not None else ()
    state = replace(state, buffer=buffer, candidate=candidate, streak=streak)

    # fire exactly once, on the frame the streak reaches the debounce length
    if streak == mapping.debounce_frames:
        command = mapping.map.get(candidate, Command.NONE)
        new_state, event = apply_command(state, command, t=t)
        if new_state.mode is not state.mode or event.kind != "NONE":
            return new_state, event

    # steady-state per-frame emissions from the active mode
    if cursor is not None:
        if state.mode is Mode.DRAWING:
            return state, CommandEvent("DRAW_POINT", x=cursor[0], y=cursor[1], t=t)
        if state.mode is Mode.ERASING:
            return state, CommandEvent("ERASE_AT", x=cursor[0], y=cursor[1], t=t,
                                       radius=mapping.erase_radius)
    return state, NONE_EVENT
