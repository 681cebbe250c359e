"""Оптический поток: пирамида, варпинг, вариационный решатель, провайдеры."""

from app.flow.field import FlowField
from app.flow.flo import load_flow_dir, read_flo, write_flo
from app.flow.providers import (
    FlowProvider,
    InjectedFlowProvider,
    VariationalFlowProvider,
    clip_flows,
)
from app.flow.pyramid import gaussian_pyramid, warp_bilinear
from app.flow.solver import energy, solve_flow

__all__ = [
    "FlowField",
    "FlowProvider",
    "InjectedFlowProvider",
    "VariationalFlowProvider",
    "clip_flows",
    "energy",
    "gaussian_pyramid",
    "load_flow_dir",
    "read_flo",
    "solve_flow",
    "warp_bilinear",
    "write_flo",
]
