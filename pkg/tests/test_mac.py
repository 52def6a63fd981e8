import pytest

from scentt.mac import MemoryAccessController, TffTree, mac_triggers, tff_step
from scentt.memsim import read_schedule, write_schedule


def table_oracle(N, cycles):
    """Trigger stream rebuilt from the memory schedules and a cycle counter."""
    half = N // 2
    rows = []
    for c in range(cycles):
        wb = (c // half) % 2
        wq = write_schedule(c % half, N)
        if c >= half:
            rb, rq = ((c - half) // half) % 2, read_schedule((c - half) % half, N)
        else:
            rb, rq = None, ()
        rows.append((c, wb, tuple(wq), rb, tuple(rq), c >= half, c > 0 and c % half == 0))
    return rows


@pytest.mark.parametrize("N", [4, 16, 128])
@pytest.mark.parametrize("pruned", [False, True])
def test_mac_equals_table(N, pruned):
    cycles = 4 * N
    got = [(t.cycle, t.write_bank, t.write_queues, t.read_bank, t.read_queues, t.csrm, t.flip)
           for t in MemoryAccessController(N, pruned).run(cycles)]
    assert got == table_oracle(N, cycles)


def test_tff_counts_and_one_hot():
    t = TffTree(4)
    for i in range(40):
        hot = t.one_hot()
        assert sum(hot) == 1 and hot.index(True) == i % 16
        assert tff_step(t) == i % 16


def test_pruned_tree_same_count():
    a, b = TffTree(5), TffTree(5, pruned=True)
    for _ in range(70):
        assert tff_step(a) == tff_step(b)


def test_mac_triggers_lookup():
    t = mac_triggers(70, 3, 128)
    assert t.cycle == 70 and t.write_bank == 1 and t.read_bank == 0
    with pytest.raises(ValueError):
        mac_triggers(0, 7, 128)
    with pytest.raises(ValueError):
        MemoryAccessController(6)
