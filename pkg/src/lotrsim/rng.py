"""Seeded random stream shared bit-for-bit by the Python engine and the compiled kernel.

The generator is SplitMix64: a single 64-bit state word, which is cheap to hand
across the extension boundary and back.
"""

import os

try:
    from ._kernel import shuffle_list as _compiled_shuffle
except ImportError:  # extension not built
    _compiled_shuffle = None

# Switched together with the playout kernel (kernel.set_enabled, LOTRSIM_PURE).
fast_shuffle = None if os.environ.get("LOTRSIM_PURE") else _compiled_shuffle

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
    return z ^ (z >> 31)


def derive_seed(master_seed, index):
    """Per-trial seed: avalanche of (master_seed, index); independent of scheduling."""
    return mix64((mix64(master_seed & MASK64) + (index + 1) * GOLDEN) & MASK64)


class Stream:
    __slots__ = ("state",)

    def __init__(self, seed=0):
        self.state = seed & MASK64

    def next_u64(self):
        self.state = s = (self.state + GOLDEN) & MASK64
        z = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
        return z ^ (z >> 31)

    def below(self, n):
        """Uniform integer in [0, n); n must be below 2**11."""
        return ((self.next_u64() >> 11) * n) >> 53

    def bits(self, k):
        """k uniform random bits (1 <= k <= 64)."""
        return self.next_u64() >> (64 - k)

    def shuffle(self, seq):
        # Fisher-Yates from the top end; the kernel does the identical walk.
        if fast_shuffle is not None and type(seq) is list:
            self.state = fast_shuffle(seq, self.state)
            return
        s = self.state
        for i in range(len(seq) - 1, 0, -1):
            s = (s + GOLDEN) & MASK64
            z = (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9 & MASK64
            z = (z ^ (z >> 27)) * 0x94D049BB133111EB & MASK64
            j = (((z ^ (z >> 31)) >> 11) * (i + 1)) >> 53
            seq[i], seq[j] = seq[j], seq[i]
        self.state = s

    def spawn(self):
        return Stream(self.next_u64())

    def copy(self):
        return Stream(self.state)

    def __eq__(self, other):
        return isinstance(other, Stream) and other.state == self.state

    def __repr__(self):
        return f"Stream(state={self.state:#018x})"
