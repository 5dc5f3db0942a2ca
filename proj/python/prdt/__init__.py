"""Protocol replicated data types: consensus states, random simulation, and the KV store client."""

import json

from ._prdt import (
    Client,
    InvalidArgument,
    Paxos,
    Server,
    Voting,
    percentile,
    protocols,
    read_csv,
    summarize,
    write_csv,
)
from . import _prdt

__all__ = [
    "Client",
    "InvalidArgument",
    "Paxos",
    "Server",
    "Voting",
    "decision",
    "percentile",
    "protocols",
    "read_csv",
    "replay",
    "simulate",
    "summarize",
    "write_csv",
]


def simulate(protocol, replicas=3, runs=1, steps=50, seed=1, propose_probability=0.3,
             values=("val1", "val2", "val3"), stall_threshold=0, epilogue_rounds=0):
    """Random harness runs with the safety oracles; returns the report as a dict."""
    return json.loads(_prdt._simulate(protocol, replicas, runs, steps, seed, propose_probability,
                                      list(values), stall_threshold, epilogue_rounds))


def replay(trace):
    """Replays a trace (dict or JSON text) and re-checks the oracles."""
    text = trace if isinstance(trace, str) else json.dumps(trace)
    return json.loads(_prdt._replay(text))


def decision(state, members):
    """Decision of a Voting or Paxos state, e.g. {"kind": "decided", "value": "v"}."""
    return json.loads(state.decision(list(members)))
