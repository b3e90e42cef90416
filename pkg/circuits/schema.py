# circuits/schema.py
from typing import List

import numpy as np
from pydantic import BaseModel, Field, model_validator

from core.fileio import read_model, write_json
from .staircase import GATE_DIM, StaircaseCircuit

# --- Gate / Circuit Schema ---

class GateRecord(BaseModel):
    layer: int = Field(ge=0)
    pos: int = Field(ge=0)
    re: List[float] = Field(min_length=16, max_length=16)
    im: List[float] = Field(min_length=16, max_length=16)


class CircuitFile(BaseModel):
    n: int = Field(ge=2)
    depth: int = Field(ge=1)
    gates: List[GateRecord]

    @model_validator(mode="after")
    def _complete(self):
        expected = {(d, p) for d in range(self.depth) for p in range(self.n - 1)}
        seen = [(g.layer, g.pos) for g in self.gates]
        if len(seen) != len(set(seen)):
            raise ValueError("閘 (layer, pos) 重複")
        if set(seen) != expected:
            raise ValueError(f"需要恰好 {len(expected)} 個閘，涵蓋所有 (layer, pos)")
        return self


# --- Conversions ---

def circuit_to_record(c: StaircaseCircuit) -> CircuitFile:
    gates = []
    for d in range(c.depth):
        for p in range(c.n_qubits - 1):
            flat = c.gates[d, p].reshape(-1)
            gates.append(GateRecord(layer=d, pos=p, re=flat.real.tolist(), im=flat.imag.tolist()))
    return CircuitFile(n=c.n_qubits, depth=c.depth, gates=gates)


def circuit_from_record(record: CircuitFile) -> StaircaseCircuit:
    gates = np.zeros((record.depth, record.n - 1, GATE_DIM, GATE_DIM), dtype=np.complex128)
    for g in record.gates:
        gates[g.layer, g.pos] = (np.asarray(g.re) + 1j * np.asarray(g.im)).reshape(GATE_DIM, GATE_DIM)
    return StaircaseCircuit(record.n, record.depth, gates)


# --- File Loader ---

def load_circuit(path) -> StaircaseCircuit:
    return circuit_from_record(read_model(path, CircuitFile))


def save_circuit(c: StaircaseCircuit, path):
    write_json(path, circuit_to_record(c).model_dump())
