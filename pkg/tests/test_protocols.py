import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from labelcast.protocols import (
    ACK,
    PACK,
    STAY,
    AckTiming,
    Kind,
    Message,
    NodeState,
    Protocol,
    initial_state,
    step_function,
    step_ls,
    step_ls_ack,
    step_oack,
)

MU = Message(Kind.DATA, b"mu")


def run_node(step, st0, inbox_at, rounds):
    """Drive one node; ``inbox_at[r]`` is what it decoded at the end of round r."""
    st, sent = st0, {}
    for r in range(rounds):
        st, out = step(st, r, inbox_at.get(r - 1))
        if out is not None:
            sent[r] = out
    return st, sent


def test_only_data_carries_payload():
    with pytest.raises(ValueError):
        Message(Kind.ACK, b"x")
    assert MU.payload == b"mu"


def test_source_sends_at_round_zero():
    for proto in Protocol:
        st = initial_state(0, True, (0,) * 3, b"mu")
        _, out = step_function(proto)(st, 0, None)
        assert out == MU


def test_oack_generator_acks_next_round():
    st = initial_state(5, False, (0, 0, 1), b"")
    _, sent = run_node(step_oack, st, {3: MU}, 10)
    assert sent == {4: ACK}


def test_oack_all_zero_never_sends():
    st = initial_state(5, False, (0, 0, 0), b"")
    _, sent = run_node(step_oack, st, {3: MU, 5: STAY, 7: ACK, 9: MU}, 14)
    assert sent == {}


def test_oack_relay_stay_and_ack():
    st = initial_state(5, False, (1, 1, 1), b"")
    # informed at 2: relay at 4, Stay at 3; a Stay heard at 5 re-sends at 6; an ACK heard at 8 is relayed at 9 once
    final, sent = run_node(step_oack, st, {2: MU, 5: STAY, 8: ACK, 10: ACK}, 14)
    assert sent == {3: STAY, 4: MU, 6: MU, 9: ACK}
    assert final.sent_ack and final.sent_data


def test_oack_stay_ignored_without_recent_transmission():
    st = initial_state(5, False, (1, 0, 0), b"")
    _, sent = run_node(step_oack, st, {2: MU, 7: STAY}, 12)
    assert sent == {4: MU}


@pytest.mark.parametrize("x1, rx, tx", [(1, 0, 1), (0, 2, 4), (1, 3, 5), (0, 3, 6)])
def test_ls_relay_offsets(x1, rx, tx):
    st = initial_state(1, False, (x1,), b"")
    _, sent = run_node(step_ls, st, {rx: MU}, 12)
    assert sent == {tx: MU}


def test_ls_second_receipt_ignored():
    st = initial_state(1, False, (0,), b"")
    final, sent = run_node(step_ls, st, {2: MU, 5: Message(Kind.DATA, b"other")}, 12)
    assert sent == {4: MU}
    assert final.first_rx == 2 and final.sourcemsg == b"mu"


@given(st.integers(0, 40), st.sampled_from((0, 1)))
def test_ls_sends_exactly_once(rx, x1):
    st0 = initial_state(1, False, (x1,), b"")
    final, sent = run_node(step_ls, st0, {rx: MU, rx + 1: MU, rx + 3: MU}, rx + 10)
    assert len(sent) == 1
    (r,) = sent
    assert r - rx in ((1, 2) if rx % 2 == 0 else (2, 3))
    assert final.idle(rx + 10)


def test_lsack_literal_timing_even():
    st = initial_state(1, False, (0, 1), b"")
    lit = lambda s, r, m: step_ls_ack(s, r, m, AckTiming.LITERAL)  # noqa: E731
    _, sent = run_node(lit, st, {2: MU}, 14)
    assert sent == {4: MU, 5: PACK, 7: ACK}  # pACK at r+3, ACK at r+5


def test_lsack_literal_timing_odd():
    st = initial_state(1, False, (1, 1), b"")
    lit = lambda s, r, m: step_ls_ack(s, r, m, AckTiming.LITERAL)  # noqa: E731
    _, sent = run_node(lit, st, {3: MU}, 14)
    assert sent == {5: MU, 7: PACK, 9: ACK}  # pACK at r+4, ACK at r+6


@pytest.mark.parametrize("rx, base", [(2, 2), (3, 4)])
def test_lsack_halfway_timing(rx, base):
    st = initial_state(1, False, (0, 1), b"")
    _, sent = run_node(step_ls_ack, st, {rx: MU}, 20)
    assert sent[base + 4] == PACK and sent[base + 8] == ACK
    assert len([m for m in sent.values() if m.kind is Kind.ACK]) == 1


def test_lsack_pack_heard_suppresses_ack():
    st = initial_state(1, False, (0, 1), b"")
    _, sent = run_node(step_ls_ack, st, {2: MU, 8: PACK}, 20)
    assert ACK not in sent.values()
    assert sent[6] == PACK


def test_lsack_pack_outside_window_ignored():
    st = initial_state(1, False, (0, 1), b"")
    _, sent = run_node(step_ls_ack, st, {2: MU, 6: PACK}, 20)
    assert sent[10] == ACK


def test_lsack_relays_ack_once_when_marked():
    st = initial_state(1, False, (0, 1), b"")
    _, sent = run_node(step_ls_ack, st, {2: MU, 8: PACK, 12: ACK, 16: ACK}, 24)
    assert [r for r, m in sent.items() if m == ACK] == [14]


def test_lsack_unmarked_node_does_not_relay_ack():
    st = initial_state(1, False, (1, 0), b"")
    _, sent = run_node(step_ls_ack, st, {2: MU, 6: ACK}, 14)
    assert sent == {3: MU}


def test_flags_flip_at_most_once():
    st = initial_state(1, False, (1, 1, 1), b"")
    flips = {"sent_data": 0, "sent_ack": 0}
    prev = st
    inbox = {2: MU, 4: ACK, 6: ACK, 8: MU}
    for r in range(12):
        st, _ = step_oack(st, r, inbox.get(r - 1))
        for f in flips:
            if getattr(st, f) != getattr(prev, f):
                flips[f] += 1
                assert getattr(st, f) is True
        prev = st
    assert all(v <= 1 for v in flips.values())


def test_state_size_is_constant():
    fields = {f.name for f in dataclasses.fields(NodeState)}
    st = initial_state(1, False, (0, 1), b"")
    final, _ = run_node(step_ls_ack, st, {2: MU, 8: PACK, 12: ACK}, 100)
    assert {f.name for f in dataclasses.fields(final)} == fields
    assert all(not isinstance(getattr(final, f), (list, dict, set)) for f in fields)
