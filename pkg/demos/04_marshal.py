"""Big-endian marshaling with explicit offsets.

Run with ``python demos/04_marshal.py``.
"""
from esapi_lists.marshal import marshal_u32, unmarshal_u32

buf = bytearray(8)
rc, off = marshal_u32(0xAABBCCDD, buf, 0)
rc, off = marshal_u32(1, buf, off)
print('rc=%d offset=%d bytes=%s' % (rc, off, buf.hex()))

# No room left: the call reports an error and leaves buffer and offset alone.
print('overflow:', marshal_u32(2, buf, off), buf.hex())

value, off = unmarshal_u32(buf, 0)
print('read back: %#x next offset %d' % (value, off))
