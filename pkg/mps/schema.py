# mps/schema.py
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from core.fileio import read_model, write_json
from .state import DenseState, MatrixProductState

# --- Site / MPS Schema ---

class SiteRecord(BaseModel):
    shape: List[int] = Field(min_length=3, max_length=3)
    re: List[float]
    im: List[float]

    @model_validator(mode="after")
    def _sizes(self):
        size = int(np.prod(self.shape))
        if len(self.re) != size or len(self.im) != size:
            raise ValueError(f"振幅數與 shape {self.shape} 不符")
        if self.shape[0] != 2:
            raise ValueError("物理維度必須為 2")
        return self


class MpsFile(BaseModel):
    n: int = Field(ge=1)
    bond_dims: List[int]
    sites: List[SiteRecord]

    @model_validator(mode="after")
    def _consistent(self):
        if len(self.sites) != self.n:
            raise ValueError(f"格點數 {len(self.sites)} 不等於 n={self.n}")
        if self.bond_dims != [s.shape[2] for s in self.sites[:-1]]:
            raise ValueError("bond_dims 與格點形狀不符")
        return self


# --- Dense State Schema ---

class DenseStateFile(BaseModel):
    n: int = Field(ge=1)
    re: List[float]
    im: List[float]
    meta: Dict[str, Any] = Field(default_factory=dict)

    @field_validator("im")
    @classmethod
    def _same_length(cls, im, info):
        re = info.data.get("re")
        if re is not None and len(re) != len(im):
            raise ValueError("re 與 im 長度不同")
        return im

    @model_validator(mode="after")
    def _size(self):
        if len(self.re) != 2 ** self.n:
            raise ValueError(f"振幅數 {len(self.re)} 不等於 2^{self.n}")
        return self


# --- Conversions ---

def _split(values: np.ndarray):
    flat = np.asarray(values).reshape(-1)
    return flat.real.tolist(), flat.imag.tolist()


def mps_to_record(phi: MatrixProductState) -> MpsFile:
    sites = []
    for a in phi.sites:
        re, im = _split(a)
        sites.append(SiteRecord(shape=list(a.shape), re=re, im=im))
    return MpsFile(n=phi.n, bond_dims=phi.bond_dims, sites=sites)


def mps_from_record(record: MpsFile) -> MatrixProductState:
    sites = [(np.asarray(s.re) + 1j * np.asarray(s.im)).reshape(s.shape) for s in record.sites]
    return MatrixProductState(tuple(sites))


def dense_to_record(psi: DenseState, meta: Dict[str, Any] = None) -> DenseStateFile:
    re, im = _split(psi.amplitudes)
    return DenseStateFile(n=psi.n_qubits, re=re, im=im, meta=meta or {})


def dense_from_record(record: DenseStateFile) -> DenseState:
    return DenseState(record.n, np.asarray(record.re) + 1j * np.asarray(record.im))


# --- File Loader ---

def load_mps(path) -> MatrixProductState:
    return mps_from_record(read_model(path, MpsFile))


def save_mps(phi: MatrixProductState, path):
    write_json(path, mps_to_record(phi).model_dump())


def load_dense_state(path) -> DenseState:
    return dense_from_record(read_model(path, DenseStateFile))


def save_dense_state(psi: DenseState, path, meta: Dict[str, Any] = None):
    write_json(path, dense_to_record(psi, meta).model_dump())
