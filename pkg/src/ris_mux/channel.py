"""Line-of-sight per-element channels and the cascaded reflection channel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PathLossParams, RisGeometry

__all__ = ["ChannelRealization", "los_channel", "cascaded_channel"]


def los_channel(node: np.ndarray, geometry: RisGeometry, pathloss: PathLossParams) -> np.ndarray:
    """Spherical-wave line-of-sight channel from a node to every element.

    Entry n is sqrt(g0) * (d0/d_n)^(beta/2) * exp(-j*2*pi*d_n/wavelength)
    with d_n the exact node-to-element distance, so near-field curvature
    across the aperture is captured.
    """
    node = np.asarray(node, dtype=float)
    diff = geometry.positions - node
    dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    if np.any(dist == 0.0):
        raise ValueError("node position coincides with a surface element")
    amplitude = np.sqrt(pathloss.reference_gain) * (pathloss.reference_distance / dist) ** (
        pathloss.exponent / 2.0
    )
    phase = (-2.0 * np.pi / geometry.wavelength) * dist
    return amplitude * np.exp(1j * phase)


def cascaded_channel(h_bs: np.ndarray, h_ue: np.ndarray) -> np.ndarray:
    """Elementwise product of the BS-side and UE-side channels."""
    h_bs = np.asarray(h_bs)
    h_ue = np.asarray(h_ue)
    if h_bs.shape != h_ue.shape:
        raise ValueError("channel vectors have mismatched lengths")
    return h_bs * h_ue


@dataclass
class ChannelRealization:
    """One block-fading realization: per-element links and their cascades."""

    h_bs: np.ndarray
    h_embb: np.ndarray
    h_urllc: np.ndarray
    g_embb: np.ndarray
    g_urllc: np.ndarray

    @classmethod
    def from_links(cls, h_bs, h_embb, h_urllc) -> "ChannelRealization":
        return cls(
            h_bs=h_bs,
            h_embb=h_embb,
            h_urllc=h_urllc,
            g_embb=cascaded_channel(h_bs, h_embb),
            g_urllc=cascaded_channel(h_bs, h_urllc),
        )
