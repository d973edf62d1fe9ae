"""Replication, duplicate elimination, and the deterministic loss filter."""

import random

import pytest

from tsnsim.frer import LossFilterState, RecoveryState, recover, split
from tsnsim.rational import Rat
from tsnsim.traffic import Frame


def frame(seq, stream="blue", member=None):
    return Frame(
        stream_id=stream,
        seq=seq,
        size_bits=1000,
        priority=4,
        produced=Rat(0),
        member=member,
    )


def test_split_copies_keep_sequence_number():
    copies = split(frame(7), [0, 1])
    assert len(copies) == 2
    assert [c.member for c in copies] == [0, 1]
    assert all(c.seq == 7 and c.size_bits == 1000 for c in copies)


def test_split_single_member_is_passthrough():
    copies = split(frame(3), [0])
    assert len(copies) == 1
    assert copies[0].member == 0


def test_split_requires_members():
    with pytest.raises(ValueError):
        split(frame(0), [])


def test_recovery_worked_example():
    # Copies arrive as 2_long, 1_high, 2_high, 3_long, 3_high with 1_long
    # lost on its path; the merged stream forwards 2, 1, 3.
    state = RecoveryState()
    arrivals = [2, 1, 2, 3, 3]
    forwarded = [seq for seq in arrivals if recover(state, frame(seq))]
    assert forwarded == [2, 1, 3]


def test_recovery_simultaneous_duplicates_forward_exactly_one():
    state = RecoveryState()
    assert recover(state, frame(5, member=0))
    assert not recover(state, frame(5, member=1))


def test_recovery_distinct_sequences_both_forward():
    state = RecoveryState()
    assert recover(state, frame(8, member=1))
    assert recover(state, frame(9, member=0))


def test_recovery_window_expires_old_numbers():
    state = RecoveryState(history_window=64)
    assert recover(state, frame(0))
    for seq in range(1, 70):
        recover(state, frame(seq))
    # seq 0 fell out of the window; a late copy counts as stale, not new.
    assert not recover(state, frame(0))


def test_recovery_conservation_random():
    rng = random.Random(3)
    state = RecoveryState()
    seqs = []
    for seq in range(400):
        seqs.append(seq)
        if rng.random() < 0.8:
            seqs.append(seq)  # duplicate copy
    # Bounded shuffle keeps skew far below the window.
    for i in range(0, len(seqs) - 4, 4):
        chunk = seqs[i : i + 4]
        rng.shuffle(chunk)
        seqs[i : i + 4] = chunk
    outcomes = [recover(state, frame(s)) for s in seqs]
    assert sum(outcomes) == 400  # exactly one forward per sequence number
    assert sum(outcomes) + sum(not o for o in outcomes) == len(seqs)


def test_loss_filter_drop_first():
    state = LossFilterState(drop_first=True)
    outcomes = [state.admit() for _ in range(4)]
    assert outcomes == [False, True, False, True]


def test_loss_filter_pass_first():
    state = LossFilterState(drop_first=False)
    outcomes = [state.admit() for _ in range(4)]
    assert outcomes == [True, False, True, False]
