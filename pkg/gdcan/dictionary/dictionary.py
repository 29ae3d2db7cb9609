from collections import OrderedDict

import gdcan.errors

"""
Library for the RAM-budgeted dynamic dictionary.

Entries are kept in recency order: the front is the least recently matched
or inserted fingerprint and is the first to be erased when the table is
full. IDs come from a counter that never goes back, so an evicted
fingerprint that shows up again gets a fresh ID.
"""

PAPER = 'paper'
UNIFORM = 'uniform'

PRIMARY = 'primary'
HYBRID_RAM = 'hybrid_ram'

# (entries, id bytes) per tier of each id space
ID_TIERS = {PRIMARY:    [(2**7, 1), (2**14, 2), (2**21, 3)],
            HYBRID_RAM: [(2**12, 2), (2**20 - 2**16, 3)]}

UNIFORM_ID_BYTES = 4


def id_space_size(space=PRIMARY):
    return sum(count for count, _ in ID_TIERS[space])

def capacity_for(ram_budget,
                 fingerprint_len,
                 accounting_mode=PAPER,
                 id_space=PRIMARY,
                 basis_len=0):
    """
    Number of dictionary entries that fit in ram_budget bytes.

    paper:   entries of each id tier cost fingerprint + id bytes, tiers are
             filled in order.
    uniform: every entry costs fingerprint + a fixed 4 byte id.
    basis_len is added to every entry when bases are kept for verification.
    """
    if ram_budget <= 0:
        return 0
    if accounting_mode == UNIFORM:
        return int(ram_budget // (fingerprint_len + UNIFORM_ID_BYTES + basis_len))
    if accounting_mode != PAPER:
        raise gdcan.errors.ParameterError('unknown accounting mode %r' % accounting_mode)

    capacity = 0
    remaining = ram_budget
    for count, id_bytes in ID_TIERS[id_space]:
        cost = fingerprint_len + id_bytes + basis_len
        fits = min(count, remaining // cost)
        capacity += fits
        remaining -= fits * cost
        if fits < count:
            break
    return int(capacity)


class DynamicDictionary:
    """
    Fingerprint -> ID map with recency ordered eviction.

    Args:
        capacity (int): maximum number of entries, 0 disables storage.
        id_limit (int): first ID that can not be encoded; the codec resets
            the dictionary before reaching it.
        verify (bool): keep the basis of every entry so that a fingerprint
            collision is reported as a miss.
    """
    def __init__(self, capacity, id_limit=None, verify=False):
        if capacity < 0:
            raise gdcan.errors.ParameterError('capacity must be >= 0')
        self.capacity = capacity
        self.id_limit = id_space_size(PRIMARY) if id_limit is None else id_limit
        self.verify = verify
        self.entries = OrderedDict()
        self.next_id = 0
        self.last_evicted = None

    def __len__(self):
        return len(self.entries)

    def __contains__(self, fp):
        return fp in self.entries

    @property
    def exhausted(self):
        return self.next_id >= self.id_limit

    def order(self):
        """
        Fingerprints from least to most recently used.
        """
        return list(self.entries)

    def lookup_touch(self, fp, basis=None):
        entry = self.entries.get(fp)
        if entry is None:
            return None
        entry_id, stored_basis = entry
        if self.verify and basis is not None and stored_basis != basis:
            return None
        self.entries.move_to_end(fp)
        return entry_id

    def insert(self, fp, basis=None):
        entry_id = self.next_id
        if entry_id >= self.id_limit:
            raise gdcan.errors.SpaceExhaustedError('dictionary id space of %d ids is used up' % self.id_limit)
        self.next_id += 1
        self.last_evicted = None
        if self.capacity == 0:
            return entry_id

        if fp in self.entries:
            # only reachable through a verified collision
            del self.entries[fp]
            self.last_evicted = fp
        elif len(self.entries) >= self.capacity:
            self.last_evicted, _ = self.entries.popitem(last=False)

        self.entries[fp] = (entry_id, basis if self.verify else None)
        return entry_id

    def clear(self):
        """
        Forgets every entry and restarts IDs at 0 (segment reset).
        """
        self.entries.clear()
        self.next_id = 0
        self.last_evicted = None
