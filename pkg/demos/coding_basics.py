"""
Random linear coding over GF(16)
================================

A walk through the coding layer: split a payload into source packets,
emit coded packets from 16-bit seeds, and watch the decoder rank climb
until the block comes back.
"""

# %%
# Field arithmetic. Every element of GF(16) has an inverse, and the
# multiplication table is what the encoder indexes into.
import numpy as np

from icnho.gf import GF16
from icnho.rlc import (DecoderState, SourceBlock, decode_probability, encode,
                       expected_transmissions, ingest, try_decode)

print("7 * 9 =", GF16.mul(7, 9), " inv(7) =", GF16.inv(7))

# %%
# A block of 16 source packets with 64 bytes each.
rng = np.random.default_rng(0)
block = SourceBlock.from_array(rng.integers(0, 256, size=(16, 64), dtype=np.uint8))

state = DecoderState(16, 64)
sent = 0
for seed in rng.permutation(1 << 16):
    sent += 1
    useful = ingest(state, encode(block, int(seed)))
    print(f"packet {sent:2d} seed {int(seed):5d} useful={useful} rank={state.rank}")
    if state.complete:
        break

assert try_decode(state) == block
print("decoded after", sent, "packets")

# %%
# How often is that expected? The decode probability with exactly n
# packets, and the mean number of packets needed.
for n in (1, 4, 16, 32):
    st = expected_transmissions(n, 16)
    print(f"n={n:2d}  Pd(n,n)={decode_probability(n, n, 16):.5f}  "
          f"E[K]={st.k_expected:.5f}  overhead={st.epsilon:.5f}")
