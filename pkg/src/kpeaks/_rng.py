"""Counter-seeded random streams (numba kernels).

Every random object in the package is drawn from its own stream, keyed by a
``(master_seed, stream_index)`` pair:

* ``stream_seed(master, index)`` is one SplitMix64 step taken from the state
  ``master ^ (index * 0x9E3779B97F4A7C15)`` (all arithmetic mod 2**64).
  For ``(0, 0)`` this is the first SplitMix64 output for seed 0,
  ``0xE220A8397B1DCDAF``.
* The stream seed then initialises a xoshiro256++ generator: its four state
  words are the next four SplitMix64 outputs starting from the stream seed.
* Bounded integers use Lemire's multiply-shift on the upper 32 bits of each
  output, with rejection, so they are exactly uniform.
* Unit floats are ``(x >> 11) * 2**-53``, uniform on the 2**53-point grid in
  ``[0, 1)``.

Because each sample owns its stream, results do not depend on how samples are
split between workers.
"""

import numpy as np
from numba import njit

GOLDEN = 0x9E3779B97F4A7C15
MASK64 = 0xFFFFFFFFFFFFFFFF

_GOLDEN = np.uint64(GOLDEN)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_LOW32 = np.uint64(0xFFFFFFFF)
_TWO32 = np.uint64(1 << 32)
_S11 = np.uint64(11)
_S17 = np.uint64(17)
_S23 = np.uint64(23)
_S27 = np.uint64(27)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S32 = np.uint64(32)
_S41 = np.uint64(41)
_S45 = np.uint64(45)
_S19 = np.uint64(19)
_INV53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _mix(z):
    z = (z ^ (z >> _S30)) * _MIX1
    z = (z ^ (z >> _S27)) * _MIX2
    return z ^ (z >> _S31)


@njit(cache=True)
def stream_seed_kernel(master, index):
    state = master ^ (index * _GOLDEN)
    return _mix(state + _GOLDEN)


@njit(cache=True)
def seed_state(state, master, index):
    """Fill the 4-word xoshiro state for stream ``(master, index)``."""
    s = stream_seed_kernel(master, index)
    for w in range(4):
        s = s + _GOLDEN
        state[w] = _mix(s)


@njit(cache=True)
def next_u64(state):
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    t0 = s0 + s3
    result = ((t0 << _S23) | (t0 >> _S41)) + s0
    t = s1 << _S17
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = (s3 << _S45) | (s3 >> _S19)
    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return result


@njit(cache=True)
def bounded(state, bound):
    """Uniform integer in ``[0, bound)`` for ``1 <= bound <= 2**32``."""
    b = np.uint64(bound)
    m = (next_u64(state) >> _S32) * b
    low = m & _LOW32
    if low < b:
        threshold = (_TWO32 - b) % b
        while low < threshold:
            m = (next_u64(state) >> _S32) * b
            low = m & _LOW32
    return np.int64(m >> _S32)


@njit(cache=True)
def unit_float(state):
    return np.float64(next_u64(state) >> _S11) * _INV53


@njit(cache=True)
def shuffle_into(out, state):
    """Write a uniform permutation of 1..len(out) into ``out`` (Fisher-Yates)."""
    n = out.shape[0]
    for i in range(n):
        out[i] = i + 1
    for i in range(n - 1, 0, -1):
        j = bounded(state, i + 1)
        tmp = out[i]
        out[i] = out[j]
        out[j] = tmp


@njit(cache=True)
def sorted_has_duplicate(values):
    s = np.sort(values)
    for i in range(1, s.shape[0]):
        if s[i] == s[i - 1]:
            return True
    return False


@njit(cache=True)
def unit_vector_into(out, state):
    """Fill ``out`` with iid uniforms, redrawing the whole vector on a tie."""
    while True:
        for i in range(out.shape[0]):
            out[i] = unit_float(state)
        if not sorted_has_duplicate(out):
            return


def stream_seed(master_seed: int, index: int) -> int:
    """64-bit seed of stream ``index`` under ``master_seed``."""
    return int(stream_seed_kernel(np.uint64(master_seed & MASK64), np.uint64(index & MASK64)))


def new_state(master_seed: int, index: int) -> np.ndarray:
    state = np.empty(4, dtype=np.uint64)
    seed_state(state, np.uint64(master_seed & MASK64), np.uint64(index & MASK64))
    return state
