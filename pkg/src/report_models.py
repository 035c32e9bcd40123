#!/usr/bin/env python3
"""
Report records printed by the CLI and exported by bench / verify.

Distances use graph_core.INF for infinity; the exporter renders it as "inf".
"""

from typing import Optional

from pydantic import BaseModel


class EstimateReport(BaseModel):
    """One estimate (or exact value) for one graph"""
    command: str
    mode: Optional[str] = None
    n: int
    m: int
    value: int
    lower: Optional[int] = None
    upper: Optional[int] = None
    probes: int = 0
    M: Optional[int] = None
    ratio_bound: Optional[float] = None
    bichromatic: Optional[int] = None
    timed_out: bool = False
    wall_time_s: float = 0.0


class FiniteReport(BaseModel):
    command: str = "bichrom finite"
    n: int
    m: int
    finite: bool
    wall_time_s: float = 0.0


class BenchRecord(BaseModel):
    """Per-instance benchmark row"""
    instance: str
    seed: int
    n: int
    m: int
    mode: str
    value: int
    lower: int
    probes: int
    wall_time_s: float
    oracle: Optional[int] = None


class VerifyRecord(BaseModel):
    """Outcome of one envelope or certificate check"""
    check: str
    instance: str
    seed: int
    n: int
    m: int
    truth: int
    value: Optional[int] = None
    lower: Optional[int] = None
    ok: bool
    message: str = ""
