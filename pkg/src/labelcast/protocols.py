"""Per-node round transition functions for the three labelled broadcast protocols.

A step function receives the node state, the current round ``r`` and the
message the node decoded at the end of round ``r - 1`` (``None`` on silence or
collision), and returns the new state plus the message to transmit in round
``r`` (or ``None``). Step functions are pure.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable, Optional


class Kind(enum.Enum):
    DATA = "DATA"
    STAY = "STAY"
    ACK = "ACK"
    PACK = "PACK"


@dataclass(frozen=True)
class Message:
    kind: Kind
    payload: bytes = b""

    def __post_init__(self) -> None:
        if self.kind is not Kind.DATA and self.payload:
            raise ValueError(f"{self.kind.value} messages carry no payload")


STAY = Message(Kind.STAY)
ACK = Message(Kind.ACK)
PACK = Message(Kind.PACK)

Outbox = Optional[Message]


class Protocol(enum.Enum):
    OACK = "OACK"
    LS = "LS"
    LSACK = "LSACK"


class AckTiming(enum.Enum):
    """Timing of the pACK probe and ACK origination in the LSACK protocol.

    ``HALFWAY``: relative to the level deadline ``b`` (the first-receipt round
    rounded up to even), pACK at ``b+4``, listen through ``b+6``, ACK at ``b+8``.
    ``LITERAL``: offsets from the first-receipt round ``r`` (pACK at r+4/r+3,
    ACK at r+6/r+5 for odd/even ``r``). A deeper node's pACK then lands after
    the listening window closes, so every marked node originates an ACK; kept
    for comparison.
    """

    HALFWAY = "halfway"
    LITERAL = "literal"


@dataclass(frozen=True)
class NodeState:
    node: int
    is_source: bool
    label: tuple[int, ...]
    sourcemsg: bytes | None = None
    sent_data: bool = False  # k
    sent_ack: bool = False  # k_ack
    first_rx: int | None = None
    last_data_tx: int | None = None
    data_at: int | None = None
    pack_at: int | None = None
    listen_until: int | None = None
    ack_at: int | None = None

    def bit(self, i: int) -> int:
        return self.label[i - 1] if i <= len(self.label) else 0

    @property
    def informed(self) -> bool:
        return self.sourcemsg is not None

    def idle(self, r: int) -> bool:
        """No scheduled transmission at or after round ``r``."""
        return all(x is None or x < r for x in (self.data_at, self.pack_at, self.ack_at))


def initial_state(node: int, is_source: bool, label: tuple[int, ...], payload: bytes) -> NodeState:
    if is_source:
        return NodeState(node, True, label, sourcemsg=payload, first_rx=-1)
    return NodeState(node, False, label)


def _data(st: NodeState) -> Message:
    assert st.sourcemsg is not None
    return Message(Kind.DATA, st.sourcemsg)


def step_oack(st: NodeState, r: int, inbox: Message | None) -> tuple[NodeState, Outbox]:
    """3-bit broadcast with ACK on an arbitrary graph.

    Branches are tried in order: first receipt two rounds ago (relay if X1),
    first receipt last round (ACK if label 001, else Stay if X2), Stay heard
    after our own transmission two rounds ago (transmit again), ACK heard
    (relay once if X3).
    """
    if not st.is_source and inbox is not None and inbox.kind is Kind.DATA and st.first_rx is None:
        st = replace(st, sourcemsg=inbox.payload, first_rx=r - 1)

    out: Outbox = None
    if st.is_source and r == 0:
        out = _data(st)
    elif st.first_rx is not None and st.first_rx < r:
        if st.first_rx == r - 2:
            if st.bit(1):
                out = _data(st)
        elif st.first_rx == r - 1:
            if st.label == (0, 0, 1) and not st.sent_ack:
                out = ACK
                st = replace(st, sent_ack=True)
            elif st.bit(2):
                out = STAY
        elif inbox is not None and inbox.kind is Kind.STAY:
            if st.last_data_tx == r - 2:
                out = _data(st)
        elif inbox is not None and inbox.kind is Kind.ACK:
            if st.bit(3) and not st.sent_ack:
                out = ACK
                st = replace(st, sent_ack=True)

    if out is not None and out.kind is Kind.DATA:
        st = replace(st, last_data_tx=r, sent_data=True)
    return st, out


def _schedule_data(st: NodeState, rx: int) -> int:
    if rx % 2:
        return rx + (2 if st.bit(1) else 3)
    return rx + (1 if st.bit(1) else 2)


def step_ls(st: NodeState, r: int, inbox: Message | None) -> tuple[NodeState, Outbox]:
    """1-bit broadcast: relay once, one or two rounds after the level's odd/even slot."""
    if st.is_source:
        return st, (_data(st) if r == 0 else None)
    if inbox is not None and inbox.kind is Kind.DATA and not st.sent_data:
        rx = r - 1
        st = replace(st, sourcemsg=inbox.payload, first_rx=rx, sent_data=True,
                     data_at=_schedule_data(st, rx))
    if st.data_at == r:
        return replace(st, data_at=None), _data(st)
    return st, None


def step_ls_ack(
    st: NodeState, r: int, inbox: Message | None, timing: AckTiming = AckTiming.HALFWAY
) -> tuple[NodeState, Outbox]:
    """2-bit broadcast with a half-way ACK.

    Data handling is that of ``step_ls``. A node with X2 = 1 probes with a pACK
    after relaying; if no pACK from a deeper marked node arrives while it
    listens, it is the end of the marked chain and originates the ACK. Marked
    nodes relay a received ACK two rounds later, once.
    """
    if st.is_source:
        return st, (_data(st) if r == 0 else None)
    heard = r - 1
    if inbox is not None:
        if inbox.kind is Kind.DATA and not st.sent_data:
            st = replace(st, sourcemsg=inbox.payload, first_rx=heard, sent_data=True,
                         data_at=_schedule_data(st, heard))
            if st.bit(2):
                st = _schedule_probe(st, heard, timing)
        elif inbox.kind is Kind.PACK and st.pack_at is not None and st.listen_until is not None:
            if st.pack_at < heard <= st.listen_until and not st.sent_ack:
                st = replace(st, ack_at=None)
        elif inbox.kind is Kind.ACK and st.bit(2) and not st.sent_ack:
            st = replace(st, sent_ack=True, ack_at=heard + 2)

    # at most one of these is due in any round for valid labels; DATA wins otherwise
    if st.data_at == r:
        return replace(st, data_at=None), _data(st)
    if st.pack_at == r:
        return st, PACK
    if st.ack_at == r:
        return replace(st, ack_at=None, sent_ack=True), ACK
    return st, None


def _schedule_probe(st: NodeState, rx: int, timing: AckTiming) -> NodeState:
    if timing is AckTiming.HALFWAY:
        base = rx + (rx % 2)
        return replace(st, pack_at=base + 4, listen_until=base + 6, ack_at=base + 8)
    if rx % 2:
        pack, ack = rx + 4, rx + 6
    else:
        pack, ack = rx + 3, rx + 5
    return replace(st, pack_at=pack, listen_until=ack - 1, ack_at=ack)


StepFn = Callable[[NodeState, int, Optional[Message]], "tuple[NodeState, Outbox]"]


def step_function(protocol: Protocol, timing: AckTiming = AckTiming.HALFWAY) -> StepFn:
    if protocol is Protocol.OACK:
        return step_oack
    if protocol is Protocol.LS:
        return step_ls
    if timing is AckTiming.HALFWAY:
        return step_ls_ack
    return lambda st, r, inbox: step_ls_ack(st, r, inbox, timing)
