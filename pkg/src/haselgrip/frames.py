"""Four-byte gripper command frames sent from the onboard computer to the
gripper micro-controller.

    byte 0  sync, always 0xA5
    byte 1  command: 0x01 open, 0x02 close
    byte 2  PWM duty, 0-255
    byte 3  XOR of bytes 0-2

    >>> encode_frame("open", 0).hex(" ")
    'a5 01 00 a4'
"""

from __future__ import annotations

from .errors import ValidationError

SYNC = 0xA5
COMMANDS = {"open": 0x01, "close": 0x02}
_BY_CODE = {v: k for k, v in COMMANDS.items()}


class FrameError(ValidationError):
    code = "frame"


def checksum(data: bytes) -> int:
    out = 0
    for byte in data:
        out ^= byte
    return out


def encode_frame(command: str, duty: int = 255) -> bytes:
    if command not in COMMANDS:
        raise FrameError(f"unknown command {command!r}", code="unknown-command")
    if not (isinstance(duty, int) and 0 <= duty <= 255):
        raise FrameError(f"duty must be an integer in 0..255, got {duty!r}", code="bad-duty")
    head = bytes((SYNC, COMMANDS[command], duty))
    return head + bytes((checksum(head),))


def decode_frame(frame: bytes) -> tuple[str, int]:
    frame = bytes(frame)
    if len(frame) != 4:
        raise FrameError(f"frame must be 4 bytes, got {len(frame)}", code="bad-length")
    if frame[0] != SYNC:
        raise FrameError(f"bad sync byte 0x{frame[0]:02X}", code="bad-sync")
    if checksum(frame[:3]) != frame[3]:
        raise FrameError("checksum mismatch", code="bad-checksum")
    if frame[1] not in _BY_CODE:
        raise FrameError(f"unknown command byte 0x{frame[1]:02X}", code="unknown-command")
    return _BY_CODE[frame[1]], frame[2]
