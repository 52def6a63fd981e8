"""
Queue layout and the constant-geometry read pattern
===================================================

A bank is four shift-register queues. Writing half a transform into queues
0/1 and the other half into 2/3, then reading 0/2 and 1/3 alternately,
pairs stream positions c and c + N/2 at every PE.
"""

from scentt.memsim import layout_address, replay_stage

N, s = 16, 4
stream = list(range(N))
for k in range(s):
    pairs = replay_stage(stream, N)
    print(f"PE{k} pairs:", pairs[:4], "... partner bit", (pairs[0][0] ^ pairs[0][1]).bit_length() - 1)
    stream = [i for p in pairs for i in p]

###############################################################################
# Where each original coefficient sits in the bank of PE 1.

table = [[None] * (N // 4) for _ in range(4)]
for i in range(N):
    q, slot = layout_address(i, 1, s)
    table[q][slot] = i
for q, row in enumerate(table):
    print(f"queue {q}:", row)
