import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pairquench import (
    ModelParams,
    QuenchWorkspace,
    WavePacketSpec,
    band_scan,
    build_basis,
    build_h0,
    prepare_wavepacket,
)
from pairquench.model import site_sums

REF_N = 111
REF_KAPPA = 1.0
REF_U = -6.24
F_BLOCH = -0.097120
F_DECAY = -0.097815


@pytest.fixture(scope="session")
def ref_basis():
    return build_basis(REF_N)


@pytest.fixture(scope="session")
def ref_band():
    return band_scan(REF_KAPPA, REF_U, REF_N)


@pytest.fixture(scope="session")
def ref_packet_spec():
    return WavePacketSpec(center_momentum=-0.9 * np.pi, width=0.2, center_site=36)


@pytest.fixture(scope="session")
def ref_psi0(ref_packet_spec, ref_band, ref_basis):
    return prepare_wavepacket(ref_packet_spec, ref_band, ref_basis)


@pytest.fixture(scope="session")
def ref_h0_open(ref_basis):
    params = ModelParams(REF_N, REF_KAPPA, REF_U, REF_U)
    return build_h0(params, ref_basis)


@pytest.fixture(scope="session")
def ref_h0_ring(ref_basis):
    params = ModelParams(REF_N, REF_KAPPA, REF_U, REF_U, boundary="ring")
    return build_h0(params, ref_basis)


@pytest.fixture(scope="session")
def ref_workspace(ref_basis, ref_band, ref_psi0, ref_h0_open, ref_packet_spec):
    params = ModelParams(REF_N, REF_KAPPA, REF_U, REF_U)
    return QuenchWorkspace(
        params=params,
        packet=ref_packet_spec,
        basis=ref_basis,
        band=ref_band,
        psi0=ref_psi0,
        h0=ref_h0_open,
        site_weight=site_sums(ref_basis),
    )
