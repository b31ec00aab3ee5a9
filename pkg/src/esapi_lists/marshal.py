"""Cast-free big-endian marshaling of 32-bit unsigned integers.

Buffers are plain ``bytearray`` objects; their length is the capacity.
Offsets are passed in and the updated offset is handed back.
"""

from __future__ import annotations

from .contracts import require

__all__ = [
    'MU_SUCCESS',
    'MU_INSUFFICIENT_BUFFER',
    'BufferTooSmall',
    'copy_u32',
    'marshal_u32',
    'unmarshal_u32',
]

MU_SUCCESS = 0
MU_INSUFFICIENT_BUFFER = 6


class BufferTooSmall(ValueError):
    pass


def copy_u32(src: int, dest: bytearray, at: int) -> None:
    """Write ``src`` to ``dest[at:at+4]`` most significant byte first."""
    require(0 <= src <= 0xFFFFFFFF, 'value %r is not a 32-bit unsigned', src)
    require(0 <= at and at + 4 <= len(dest),
            'copy of 4 bytes at offset %d overruns buffer of size %d',
            at, len(dest))
    dest[at] = (src >> 24) & 0xFF
    dest[at + 1] = (src >> 16) & 0xFF
    dest[at + 2] = (src >> 8) & 0xFF
    dest[at + 3] = src & 0xFF


def marshal_u32(value: int, dest: bytearray, offset: int) -> tuple:
    """Marshal ``value`` at ``offset``.

    Returns ``(rc, new_offset)``.  On ``MU_INSUFFICIENT_BUFFER`` nothing is
    written and the offset comes back unchanged.
    """
    if offset < 0 or offset + 4 > len(dest):
        return MU_INSUFFICIENT_BUFFER, offset
    copy_u32(value, dest, offset)
    return MU_SUCCESS, offset + 4


def unmarshal_u32(src, offset: int) -> tuple:
    """Read a big-endian u32 at ``offset``; returns ``(value, new_offset)``."""
    if offset < 0 or offset + 4 > len(src):
        raise BufferTooSmall('need 4 bytes at offset %d, buffer has %d'
                             % (offset, len(src)))
    value = ((src[offset] << 24) | (src[offset + 1] << 16)
             | (src[offset + 2] << 8) | src[offset + 3])
    return value, offset + 4
