from dataclasses import dataclass, field
import struct

import gdcan.errors
import gdcan.records

"""
Minimal MDF 4.x reader and fixture writer.

Only the layout produced by CAN loggers is supported: one data group with
one channel group of fixed 27 byte records, stored in a DT block or a DL
list of DT blocks. Every block starts with "##" + a 2 character type,
a 64 bit length and a 64 bit link count; links are absolute file offsets.
"""

ID_BLOCK_SIZE = 64
ID_FILE = b'MDF     '
ID_VERSION = b'4.10    '
ID_PROGRAM = b'gdcan   '

# file id, version, program, reserved, version number, reserved, unfinalized flags, custom flags
ID_STRUCT = struct.Struct('<8s8s8s4sH30sHH')
BLOCK_HEADER = struct.Struct('<4s4sQQ')

# start time ns, tz offset, dst offset, time flags, time class, flags, reserved, angle, distance
HD_DATA = struct.Struct('<QhhBBBBdd')
# record id size, reserved
DG_DATA = struct.Struct('<B7s')
# record id, cycle count, flags, path separator, reserved, data bytes, invalidation bytes
CG_DATA = struct.Struct('<QQHH4sII')
# type, sync type, data type, bit offset, byte offset, bit count, flags,
# invalidation bit, precision, reserved, attachment count, 6 range/limit values
CN_DATA = struct.Struct('<BBBBIIIIBBH6d')
# flags, reserved, count
DL_DATA = struct.Struct('<B3sI')

CG_FLAG_VLSD = 0x0001

# channel name, byte offset, bit count, data type (0 unsigned LE, 10 byte array), channel type, sync type
CAN_CHANNELS = [('Timestamp',                0, 64,  0, 2, 1),
                ('CAN_DataFrame.ID',         8, 32,  0, 0, 0),
                ('CAN_DataFrame.IDE',       12,  8,  0, 0, 0),
                ('CAN_DataFrame.DLC',       13,  8,  0, 0, 0),
                ('CAN_DataFrame.EDL',       14,  8,  0, 0, 0),
                ('CAN_DataFrame.BRS',       15,  8,  0, 0, 0),
                ('CAN_DataFrame.Dir',       16,  8,  0, 0, 0),
                ('CAN_DataFrame.BusChannel', 17,  8,  0, 0, 0),
                ('CAN_DataFrame.DataLength', 18,  8,  0, 0, 0),
                ('CAN_DataFrame.DataBytes', 19, 64, 10, 0, 0)]


@dataclass
class Mdf4Block:
    block_type: str
    offset: int
    length: int
    links: tuple
    payload: bytes = field(repr=False)


@dataclass
class Channel:
    block: Mdf4Block
    name: str
    byte_offset: int
    bit_count: int


@dataclass
class ChannelGroup:
    block: Mdf4Block
    record_size: int
    invalidation_bytes: int
    cycle_count: int
    flags: int
    channels: list = field(default_factory=list)


@dataclass
class DataGroup:
    block: Mdf4Block
    record_id_size: int
    channel_groups: list = field(default_factory=list)
    data_blocks: list = field(default_factory=list)


@dataclass
class Mdf4File:
    version: str
    program: str
    header: Mdf4Block
    data_groups: list = field(default_factory=list)
    blocks: dict = field(default_factory=dict, repr=False)


def open_file(file_name):
    with open(file_name, 'rb') as f:
        return parse(f.read())

def parse(data):
    """
    Parses MDF4 bytes into the ID -> HD -> DG -> CG/CN -> DT hierarchy.
    Blocks of types the reader does not interpret are kept opaquely in
    Mdf4File.blocks.
    """
    data = bytes(data)
    if len(data) < ID_BLOCK_SIZE or data[:8] != ID_FILE:
        raise gdcan.errors.NotMdf4Error('missing MDF identification block')
    _, version, program, _, version_number, _, _, _ = ID_STRUCT.unpack_from(data)
    if not version.startswith(b'4.'):
        raise gdcan.errors.UnsupportedLayoutError('MDF version %r is not 4.x' % version.strip())

    blocks = {}
    header = _read_block(data, ID_BLOCK_SIZE, blocks, expected='HD')
    tree = Mdf4File(version=version.decode('ascii', errors='replace').strip(),
                    program=program.decode('ascii', errors='replace').strip(),
                    header=header,
                    blocks=blocks)
    _read_opaque(data, header.links[5:6], blocks)

    for dg_block in _read_chain(data, _link(header, 0), blocks, 'DG'):
        record_id_size, _ = DG_DATA.unpack_from(_payload(dg_block, DG_DATA.size))
        dg = DataGroup(block=dg_block, record_id_size=record_id_size)
        _read_opaque(data, dg_block.links[3:4], blocks)

        for cg_block in _read_chain(data, _link(dg_block, 1), blocks, 'CG'):
            _, cycle_count, flags, _, _, data_bytes, inval_bytes = CG_DATA.unpack_from(_payload(cg_block, CG_DATA.size))
            cg = ChannelGroup(block=cg_block,
                              record_size=data_bytes,
                              invalidation_bytes=inval_bytes,
                              cycle_count=cycle_count,
                              flags=flags)
            _read_opaque(data, cg_block.links[2:6], blocks)

            for cn_block in _read_chain(data, _link(cg_block, 1), blocks, 'CN'):
                values = CN_DATA.unpack_from(_payload(cn_block, CN_DATA.size))
                cg.channels.append(Channel(block=cn_block,
                                           name=_read_text(data, _link(cn_block, 2), blocks),
                                           byte_offset=values[4],
                                           bit_count=values[5]))
            dg.channel_groups.append(cg)

        dg.data_blocks = _read_data_blocks(data, _link(dg_block, 2), blocks)
        tree.data_groups.append(dg)
    return tree

def _read_block(data, offset, blocks, expected=None):
    if offset in blocks:
        block = blocks[offset]
    else:
        if offset < ID_BLOCK_SIZE or offset + BLOCK_HEADER.size > len(data):
            raise gdcan.errors.FormatError('block link %d points outside the file' % offset)
        block_id, _, length, link_count = BLOCK_HEADER.unpack_from(data, offset)
        if block_id[:2] != b'##':
            raise gdcan.errors.FormatError('no block header at offset %d' % offset)
        links_end = offset + BLOCK_HEADER.size + 8 * link_count
        if length < BLOCK_HEADER.size + 8 * link_count or offset + length > len(data):
            raise gdcan.errors.FormatError('block at offset %d declares %d bytes beyond the file' % (offset, length))
        links = struct.unpack_from('<%dQ' % link_count, data, offset + BLOCK_HEADER.size)
        block = Mdf4Block(block_type=block_id[2:].decode('ascii', errors='replace'),
                          offset=offset,
                          length=length,
                          links=links,
                          payload=data[links_end:offset + length])
        blocks[offset] = block
    if expected is not None and block.block_type != expected:
        raise gdcan.errors.FormatError('expected %s block at offset %d, found %r' % (expected, offset, block.block_type))
    return block

def _read_chain(data, first, blocks, expected):
    """
    Follows the "next" link (link 0) of a block list.
    """
    chain = []
    visited = set()
    offset = first
    while offset:
        if offset in visited:
            raise gdcan.errors.FormatError('cyclic %s links at offset %d' % (expected, offset))
        visited.add(offset)
        block = _read_block(data, offset, blocks, expected=expected)
        chain.append(block)
        offset = block.links[0] if block.links else 0
    return chain

def _link(block, index):
    return block.links[index] if index < len(block.links) else 0

def _read_opaque(data, links, blocks):
    for offset in links:
        if offset:
            _read_block(data, offset, blocks)

def _read_text(data, offset, blocks):
    if not offset:
        return ''
    block = _read_block(data, offset, blocks)
    if block.block_type not in ('TX', 'MD'):
        return ''
    return block.payload.split(b'\0', 1)[0].decode('utf-8', errors='replace')

def _payload(block, size):
    if len(block.payload) < size:
        raise gdcan.errors.FormatError('%s block at offset %d is too short' % (block.block_type, block.offset))
    return block.payload

def _read_data_blocks(data, offset, blocks):
    if not offset:
        return []
    block = _read_block(data, offset, blocks)
    if block.block_type == 'DT':
        return [block]
    if block.block_type != 'DL':
        raise gdcan.errors.UnsupportedLayoutError('%s data blocks are not supported' % block.block_type)

    data_blocks = []
    for dl_block in _read_chain(data, offset, blocks, 'DL'):
        _, _, count = DL_DATA.unpack_from(_payload(dl_block, DL_DATA.size))
        if count > len(dl_block.links) - 1:
            raise gdcan.errors.FormatError('DL block at offset %d lists %d blocks but links %d'
                                           % (dl_block.offset, count, len(dl_block.links) - 1))
        for link in dl_block.links[1:1 + count]:
            dt_block = _read_block(data, link, blocks)
            if dt_block.block_type != 'DT':
                raise gdcan.errors.UnsupportedLayoutError('%s blocks inside a data list are not supported'
                                                          % dt_block.block_type)
            data_blocks.append(dt_block)
    return data_blocks

def channel_names(tree):
    if not tree.data_groups or not tree.data_groups[0].channel_groups:
        return []
    return [cn.name for cn in tree.data_groups[0].channel_groups[0].channels]

def extract_records(tree):
    """
    Returns (record bytes, record count) of a single data group / single
    channel group file with fixed 27 byte records.
    """
    if len(tree.data_groups) != 1:
        raise gdcan.errors.UnsupportedLayoutError('expected exactly one data group, found %d' % len(tree.data_groups))
    dg = tree.data_groups[0]
    if dg.record_id_size != 0:
        raise gdcan.errors.UnsupportedLayoutError('record ids (unsorted data groups) are not supported')
    if len(dg.channel_groups) != 1:
        raise gdcan.errors.UnsupportedLayoutError('expected exactly one channel group, found %d' % len(dg.channel_groups))
    cg = dg.channel_groups[0]
    if cg.flags & CG_FLAG_VLSD:
        raise gdcan.errors.UnsupportedLayoutError('variable length records are not supported')
    if cg.record_size != gdcan.records.RECORD_SIZE or cg.invalidation_bytes != 0:
        raise gdcan.errors.UnsupportedLayoutError('records of %d+%d bytes, only %d byte records are supported'
                                                  % (cg.record_size, cg.invalidation_bytes, gdcan.records.RECORD_SIZE))

    payload = b''.join(block.payload for block in dg.data_blocks)
    if len(payload) % gdcan.records.RECORD_SIZE:
        raise gdcan.errors.FormatError('data blocks hold %d bytes, not a whole number of records' % len(payload))
    return payload, len(payload) // gdcan.records.RECORD_SIZE

def write_fixture(records, comment=None):
    """
    Writes records as a minimal MDF4 file: ID, HD, one DG, one CG with the
    CAN logging channels (named by TX blocks) and one DT block.

    comment is an optional (block type, payload) pair stored as an extra
    block linked from the HD comment link.
    """
    raw = gdcan.records.records_to_bytes(records) if not isinstance(records, (bytes, bytearray)) else bytes(records)
    if len(raw) % gdcan.records.RECORD_SIZE:
        raise gdcan.errors.FormatError('record bytes are not a whole number of records')
    record_count = len(raw) // gdcan.records.RECORD_SIZE

    layout = []
    layout.append(('HD', 'HD', ['DG', None, None, None, None, 'comment' if comment else None],
                   HD_DATA.pack(0, 0, 0, 0, 0, 0, 0, 0.0, 0.0)))
    if comment:
        block_type, payload = comment
        layout.append(('comment', block_type, [], bytes(payload)))
    layout.append(('DG', 'DG', [None, 'CG', 'DT', None], DG_DATA.pack(0, bytes(7))))
    layout.append(('CG', 'CG', [None, 'CN0', None, None, None, None],
                   CG_DATA.pack(0, record_count, 0, 0, bytes(4), gdcan.records.RECORD_SIZE, 0)))
    for i, (name, byte_offset, bit_count, data_type, cn_type, sync_type) in enumerate(CAN_CHANNELS):
        next_key = 'CN%d' % (i + 1) if i + 1 < len(CAN_CHANNELS) else None
        layout.append(('CN%d' % i, 'CN', [next_key, None, 'TX%d' % i, None, None, None, None, None],
                       CN_DATA.pack(cn_type, sync_type, data_type, 0, byte_offset, bit_count,
                                    0, 0, 0, 0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)))
    for i, (name, *_) in enumerate(CAN_CHANNELS):
        text = name.encode('utf-8') + b'\0'
        layout.append(('TX%d' % i, 'TX', [], text + bytes(-len(text) % 8)))
    layout.append(('DT', 'DT', [], raw))

    offsets = {}
    position = ID_BLOCK_SIZE
    for key, _, links, payload in layout:
        offsets[key] = position
        size = BLOCK_HEADER.size + 8 * len(links) + len(payload)
        position += size + (-size % 8)

    out = bytearray(ID_STRUCT.pack(ID_FILE, ID_VERSION, ID_PROGRAM, bytes(4), 410, bytes(30), 0, 0))
    for key, block_type, links, payload in layout:
        size = BLOCK_HEADER.size + 8 * len(links) + len(payload)
        out += BLOCK_HEADER.pack(b'##' + block_type.encode('ascii'), bytes(4), size, len(links))
        out += struct.pack('<%dQ' % len(links), *[offsets[link] if link else 0 for link in links])
        out += payload
        out += bytes(-size % 8)
    return bytes(out)
